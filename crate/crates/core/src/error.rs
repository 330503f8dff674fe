use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the evaluation and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PbError {
    #[error("imaginary displacement y is zero; branch data is undefined")]
    DegenerateDilation,
    #[error("point lies on the open branch disk; a side must be given")]
    OnCutAmbiguous,
    #[error("point is not on the closed branch disk")]
    NotOnCut,
    #[error("point lies on the branch sphere (complex distance vanishes)")]
    OnBranchSphere,
    #[error("denominator tau -/+ r~ vanishes")]
    SingularDenominator,
    #[error("z^2 vanishes (complex light cone)")]
    LightConeSingular,
    #[error("signal evaluated at a pole: tau = {0}")]
    PoleOnEvaluation(Complex64),
    #[error("unsupported signal kind: {0}")]
    UnsupportedKind(String),
    #[error("rho = {rho} lies outside the disk of radius {a}")]
    OutOfDisk { rho: f64, a: f64 },
    #[error("quadrature did not reach tolerance: estimate {best}, error {error:e}")]
    QuadratureFailure { best: Complex64, error: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, PbError>;
