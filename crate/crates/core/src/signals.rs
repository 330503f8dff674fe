//! Analytic driving signals `g(tau)` and their jump averages across the
//! branch disk.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{PbError, Result};

type ComplexFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Largest derivative order accepted for the Cauchy family.
pub const MAX_CAUCHY_ORDER: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalKind {
    /// `1 / (2 pi tau)`
    Cauchy,
    /// `-1`
    ConstNegOne,
    /// `m`-th derivative of the Cauchy signal.
    CauchyDeriv(u32),
    Custom,
}

impl fmt::Display for SignalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignalKind::Cauchy => write!(f, "cauchy"),
            SignalKind::ConstNegOne => write!(f, "const"),
            SignalKind::CauchyDeriv(m) => write!(f, "dcauchy:{m}"),
            SignalKind::Custom => write!(f, "custom"),
        }
    }
}

impl FromStr for SignalKind {
    type Err = PbError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "cauchy" => Ok(SignalKind::Cauchy),
            "const" => Ok(SignalKind::ConstNegOne),
            _ => {
                let m = s
                    .strip_prefix("dcauchy:")
                    .and_then(|m| m.parse::<u32>().ok())
                    .ok_or_else(|| PbError::UnsupportedKind(s.to_string()))?;
                Ok(SignalKind::CauchyDeriv(m))
            }
        }
    }
}

/// User-supplied signal. Both `eval` and `deriv` are required; `deriv2` is
/// only needed by the brute-force spacetime oracle.
#[derive(Clone)]
pub struct CustomSignal {
    pub name: String,
    pub eval: ComplexFn,
    pub deriv: ComplexFn,
    pub deriv2: Option<ComplexFn>,
}

impl fmt::Debug for CustomSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomSignal")
            .field("name", &self.name)
            .field("has_deriv2", &self.deriv2.is_some())
            .finish()
    }
}

/// A driving signal, holomorphic off the real `tau` axis.
#[derive(Debug, Clone)]
pub enum AnalyticSignal {
    Cauchy,
    ConstNegOne,
    CauchyDeriv(u32),
    Custom(CustomSignal),
}

/// Builds one of the built-in signals. `Custom` has no closures to attach,
/// and `CauchyDeriv(0)` duplicates `Cauchy`; both are rejected.
pub fn make_signal(kind: SignalKind) -> Result<AnalyticSignal> {
    match kind {
        SignalKind::Cauchy => Ok(AnalyticSignal::Cauchy),
        SignalKind::ConstNegOne => Ok(AnalyticSignal::ConstNegOne),
        SignalKind::CauchyDeriv(m) if (1..=MAX_CAUCHY_ORDER).contains(&m) => {
            Ok(AnalyticSignal::CauchyDeriv(m))
        }
        other => Err(PbError::UnsupportedKind(other.to_string())),
    }
}

impl FromStr for AnalyticSignal {
    type Err = PbError;

    fn from_str(s: &str) -> Result<Self> {
        make_signal(s.parse()?)
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `d^n/dtau^n [1/(2 pi tau)] = (-1)^n n! / (2 pi tau^(n+1))`.
fn cauchy_derivative(order: u32, tau: Complex64) -> Result<Complex64> {
    if tau.re == 0.0 && tau.im == 0.0 {
        return Err(PbError::PoleOnEvaluation(tau));
    }
    let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * factorial(order) / (2.0 * PI * tau.powi(order as i32 + 1)))
}

impl AnalyticSignal {
    pub fn kind(&self) -> SignalKind {
        match self {
            AnalyticSignal::Cauchy => SignalKind::Cauchy,
            AnalyticSignal::ConstNegOne => SignalKind::ConstNegOne,
            AnalyticSignal::CauchyDeriv(m) => SignalKind::CauchyDeriv(*m),
            AnalyticSignal::Custom(_) => SignalKind::Custom,
        }
    }

    pub fn custom(
        name: impl Into<String>,
        eval: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        deriv: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        AnalyticSignal::Custom(CustomSignal {
            name: name.into(),
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            deriv2: None,
        })
    }

    /// Attaches a second derivative to a custom signal; no-op otherwise.
    pub fn with_second_derivative(
        self,
        deriv2: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        match self {
            AnalyticSignal::Custom(mut c) => {
                c.deriv2 = Some(Arc::new(deriv2));
                AnalyticSignal::Custom(c)
            }
            other => other,
        }
    }

    /// `n`-th derivative, `n <= 2` for custom signals.
    pub fn derivative(&self, n: u32, tau: Complex64) -> Result<Complex64> {
        match self {
            AnalyticSignal::Cauchy => cauchy_derivative(n, tau),
            AnalyticSignal::CauchyDeriv(m) => cauchy_derivative(m + n, tau),
            AnalyticSignal::ConstNegOne => Ok(if n == 0 {
                Complex64::new(-1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }),
            AnalyticSignal::Custom(c) => {
                let v = match n {
                    0 => (c.eval)(tau),
                    1 => (c.deriv)(tau),
                    2 => match &c.deriv2 {
                        Some(d2) => d2(tau),
                        None => {
                            return Err(PbError::UnsupportedKind(format!(
                                "{} has no second derivative",
                                c.name
                            )))
                        }
                    },
                    _ => {
                        return Err(PbError::UnsupportedKind(format!(
                            "derivative order {n} of custom signal {}",
                            c.name
                        )))
                    }
                };
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(PbError::PoleOnEvaluation(tau))
                }
            }
        }
    }

    pub fn eval(&self, tau: Complex64) -> Result<Complex64> {
        self.derivative(0, tau)
    }

    pub fn deriv(&self, tau: Complex64) -> Result<Complex64> {
        self.derivative(1, tau)
    }

    pub fn deriv2(&self, tau: Complex64) -> Result<Complex64> {
        self.derivative(2, tau)
    }
}

/// Mean of `g` across the jump at `r~ = +/- i q`: `[g(tau - iq) + g(tau + iq)] / 2`.
pub fn jump_average(g: &AnalyticSignal, tau: Complex64, q: f64) -> Result<Complex64> {
    let iq = Complex64::new(0.0, q);
    Ok(0.5 * (g.eval(tau - iq)? + g.eval(tau + iq)?))
}

/// Jump average in cylindrical form, `q = sqrt(a^2 - rho^2)`.
pub fn gtilde_rho(g: &AnalyticSignal, tau: Complex64, rho: f64, a: f64) -> Result<Complex64> {
    if !(0.0..=a).contains(&rho) {
        return Err(PbError::OutOfDisk { rho, a });
    }
    jump_average(g, tau, ((a - rho) * (a + rho)).sqrt())
}
