//! Independent verification machinery: adaptive quadrature (including
//! quadrature in oblate coordinates), finite-difference operators and
//! convergence-order fits.

pub mod brute;
pub mod convergence;
pub mod fd;
pub mod quad;

pub use brute::{action_bruteforce_regularized, action_bruteforce_spacetime, action_bruteforce_static, quad_oblate};
pub use convergence::{convergence_order, log_log_slope, richardson_to_zero, ConvergenceReport};
pub use fd::{fd_curl, fd_dalembertian, fd_divergence, fd_first, fd_second, fd_time_derivative};
pub use quad::{integrate, integrate_with_breaks, QuadEstimate, QuadratureSpec};
