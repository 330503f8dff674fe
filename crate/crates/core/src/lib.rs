//! Pulsed-beam wavelets from complex source points.
//!
//! Scalar beams `G+/-` and general wavelets `W = g(tau - kappa r~) / (4 pi r~)`
//! evaluated at complex spacetime points `x + i y`, the exact source
//! distributions they radiate from, electromagnetic beams built on them, and
//! the brute-force machinery used to check all of it.

pub mod beams;
pub mod cli;
pub mod em;
pub mod error;
pub mod geometry;
pub mod oracles;
pub mod probes;
pub mod signals;
pub mod sources;

pub use beams::{
    green_euclidean, green_pm, minkowski_limit_probe, mother_translate, peak_time, pulse_duration,
    radiation_pattern, wavelet, BeamPoint, KappaSign, MinkowskiProbe, PulseDuration,
};
pub use em::{
    derivative_kernel, dyadic_mother, em_field, hertz_potential, split_real_fields, DerivativeKernel,
    EMField, Polarization,
};
pub use error::{PbError, Result};
pub use geometry::{
    classify_branch_locus, classify_causal, complex_distance, complex_distance_sided, farzone_complex_distance,
    from_oblate, to_oblate, to_oblate_sided, volume_jacobian, BranchLocus, CausalClass, ComplexEvent, Event,
    Frame, OblateCoords, Side, SpaceVec,
};
pub use oracles::QuadratureSpec;
pub use signals::{make_signal, AnalyticSignal, SignalKind};
pub use sources::{
    action_limit, action_regularized, action_spacetime_delta, action_static_delta, builtin, unsmeared_layers,
    LayerRepresentation, ProbeFunction, TestFunction,
};
