//! Scalar pulsed beams: the Euclidean Green function continued to complex
//! spacetime, its retarded/advanced parts, general wavelets driven by an
//! analytic signal, radiation patterns and Minkowskian boundary values.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{PbError, Result};
use crate::geometry::{
    complex_distance, from_oblate_in, to_oblate, to_oblate_sided, ComplexEvent, Event, Frame,
    OblateCoords, Side, SpaceVec,
};
use crate::oracles::convergence::richardson_to_zero;
use crate::oracles::quad::{integrate_with_breaks, QuadratureSpec};
use crate::signals::AnalyticSignal;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `kappa = +1` selects the retarded beam `G+`, `-1` the advanced `G-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KappaSign {
    Plus,
    Minus,
}

impl KappaSign {
    pub fn sign(self) -> f64 {
        match self {
            KappaSign::Plus => 1.0,
            KappaSign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> KappaSign {
        match self {
            KappaSign::Plus => KappaSign::Minus,
            KappaSign::Minus => KappaSign::Plus,
        }
    }
}

impl std::str::FromStr for KappaSign {
    type Err = PbError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "plus" | "+1" | "1" | "retarded" => Ok(KappaSign::Plus),
            "-" | "minus" | "-1" | "advanced" => Ok(KappaSign::Minus),
            other => Err(PbError::InvalidArgument(format!("unknown kappa sign {other:?}"))),
        }
    }
}

/// A complex event with its complex distance and oblate coordinates cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamPoint {
    pub z: ComplexEvent,
    /// `None` when the spatial imaginary part vanishes.
    pub oblate: Option<OblateCoords>,
    pub rtilde: Complex64,
}

impl BeamPoint {
    pub fn new(z: ComplexEvent) -> Result<Self> {
        Self::build(z, None)
    }

    /// Resolves points on the open branch disk with the given side.
    pub fn sided(z: ComplexEvent, side: Side) -> Result<Self> {
        Self::build(z, Some(side))
    }

    fn build(z: ComplexEvent, side: Option<Side>) -> Result<Self> {
        let x = z.real_part().pos;
        let y = z.imag_part().pos;
        if y.norm_sq() == 0.0 {
            return Ok(BeamPoint {
                z,
                oblate: None,
                rtilde: complex_distance(&x, &y)?,
            });
        }
        let oblate = match side {
            Some(side) => to_oblate_sided(&x, &y, side)?,
            None => to_oblate(&x, &y)?,
        };
        // the direct square root avoids the rotation into the oblate frame
        let rtilde = match complex_distance(&x, &y) {
            Ok(rt) => rt,
            Err(PbError::OnCutAmbiguous) => oblate.rtilde(),
            Err(e) => return Err(e),
        };
        Ok(BeamPoint {
            z,
            oblate: Some(oblate),
            rtilde,
        })
    }

    /// Point with oblate coordinates `c` in `frame` (axis along `y`) at
    /// complex time `tau`; no square roots are taken.
    pub fn from_oblate(c: OblateCoords, frame: &Frame, tau: Complex64) -> Self {
        let x = from_oblate_in(&c, frame);
        let y = frame.axis * c.a;
        BeamPoint {
            z: ComplexEvent::from_parts(Event::new(x, tau.re), Event::new(y, tau.im)),
            oblate: Some(c),
            rtilde: c.rtilde(),
        }
    }

    pub fn tau(&self) -> Complex64 {
        self.z.tau
    }

    fn checked_rtilde(&self) -> Result<Complex64> {
        let x = self.z.real_part().pos;
        let y = self.z.imag_part().pos;
        let scale = x.norm_sq() + y.norm_sq();
        if self.rtilde.norm_sqr() <= 1e-14 * scale || self.rtilde.norm_sqr() == 0.0 {
            return Err(PbError::OnBranchSphere);
        }
        Ok(self.rtilde)
    }

    /// `tau - kappa r~`, checked against the singular set.
    fn retarded_argument(&self, sign: KappaSign) -> Result<Complex64> {
        let rt = self.rtilde;
        let d = self.z.tau - sign.sign() * rt;
        if d.norm() <= 1e-14 * (self.z.tau.norm() + rt.norm()) {
            return Err(PbError::SingularDenominator);
        }
        Ok(d)
    }

    /// `G+/-(z) = 1 / (8 pi^2 r~ (tau -/+ r~))`.
    pub fn green_pm(&self, sign: KappaSign) -> Result<Complex64> {
        let rt = self.checked_rtilde()?;
        let d = self.retarded_argument(sign)?;
        Ok(1.0 / (8.0 * PI * PI * rt * d))
    }

    /// `W(z) = g(tau - kappa r~) / (4 pi r~)`.
    pub fn wavelet(&self, g: &AnalyticSignal, kappa: KappaSign) -> Result<Complex64> {
        self.wavelet_time_derivative(g, kappa, 0)
    }

    /// `d_t^n W = g^(n)(tau - kappa r~) / (4 pi r~)`.
    pub fn wavelet_time_derivative(
        &self,
        g: &AnalyticSignal,
        kappa: KappaSign,
        n: u32,
    ) -> Result<Complex64> {
        let rt = self.checked_rtilde()?;
        let arg = self.z.tau - kappa.sign() * rt;
        Ok(g.derivative(n, arg)? / (4.0 * PI * rt))
    }

    /// `R+/- = i / (2 pi (tau -/+ r~))`.
    pub fn radiation_pattern(&self, sign: KappaSign) -> Result<Complex64> {
        let d = self.retarded_argument(sign)?;
        Ok(I / (2.0 * PI * d))
    }
}

/// `G4(z) = -1 / (4 pi^2 z^2)`.
pub fn green_euclidean(z: &ComplexEvent) -> Result<Complex64> {
    let z2 = z.square();
    let scale = z.zvec_square().norm() + (z.tau * z.tau).norm();
    if z2.norm() <= 1e-14 * scale || z2.norm() == 0.0 {
        return Err(PbError::LightConeSingular);
    }
    Ok(-1.0 / (4.0 * PI * PI * z2))
}

pub fn green_pm(z: &ComplexEvent, sign: KappaSign) -> Result<Complex64> {
    BeamPoint::new(*z)?.green_pm(sign)
}

pub fn wavelet(z: &ComplexEvent, g: &AnalyticSignal, kappa: KappaSign) -> Result<Complex64> {
    BeamPoint::new(*z)?.wavelet(g, kappa)
}

pub fn radiation_pattern(z: &ComplexEvent, sign: KappaSign) -> Result<Complex64> {
    BeamPoint::new(*z)?.radiation_pattern(sign)
}

/// Duration of the pulse seen in direction `theta` from the dilation axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseDuration {
    /// `|u -/+ a cos(theta)|`
    pub duration: f64,
    /// `a / |u|` of the elliptical radiation pattern
    pub eccentricity: f64,
    /// False outside the timelike case, where the value is still reported
    /// but carries no beam-quality guarantee.
    pub timelike: bool,
}

pub fn pulse_duration(theta: f64, u: f64, a: f64, sign: KappaSign) -> PulseDuration {
    PulseDuration {
        duration: (u - sign.sign() * a * theta.cos()).abs(),
        eccentricity: a / u.abs(),
        timelike: u.abs() > a,
    }
}

/// Time `+/- p` at which `|G+/-|` peaks at the spatial point `x`.
///
/// `|G+/-|` depends on `t` only through `|tau -/+ r~|^2 = (t -/+ p)^2 + (u -/+ q)^2`,
/// which is minimized exactly there.
pub fn peak_time(x: &SpaceVec, y: &SpaceVec, sign: KappaSign) -> Result<f64> {
    let p = if y.norm_sq() == 0.0 {
        x.norm()
    } else {
        match to_oblate(x, y) {
            Ok(c) => c.p,
            Err(PbError::OnCutAmbiguous) => 0.0,
            Err(e) => return Err(e),
        }
    };
    Ok(sign.sign() * p)
}

/// Mother wavelet translated to the complex source point `x - i y`:
/// `W(x' - x + i y)`.
pub fn mother_translate(
    xprime: &Event,
    x: &Event,
    y: &Event,
    g: &AnalyticSignal,
    kappa: KappaSign,
) -> Result<Complex64> {
    let z = ComplexEvent::from_parts(*xprime - *x, *y);
    wavelet(&z, g, kappa)
}

/// Result of smearing `G(x - i eps y) - G(x + i eps y)` against a test
/// function of time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiProbe {
    pub eps: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Polynomial extrapolation of `values` to `eps = 0`.
    pub extrapolated: Complex64,
    /// Distributional limit `sgn(u) i phi(+/- r) / (4 pi r)`.
    pub limit: Complex64,
}

impl MinkowskiProbe {
    pub fn relative_error(&self) -> f64 {
        let err = (self.extrapolated - self.limit).norm();
        if self.limit.norm() > 0.0 {
            err / self.limit.norm()
        } else {
            err
        }
    }
}

/// Smeared Minkowskian boundary value of `G+/-` at the real point `x`.
///
/// For each `eps`, integrates `phi(t) [G(x - i eps y) - G(x + i eps y)]` over
/// `support`, where `phi` vanishes outside `support`. The limit for a future
/// (past) timelike `y` is `+(-) i phi(+/- r) / (4 pi r)`.
pub fn minkowski_limit_probe<F>(
    x: &SpaceVec,
    y: &Event,
    sign: KappaSign,
    phi: F,
    support: (f64, f64),
    eps_list: &[f64],
    spec: &QuadratureSpec,
) -> Result<MinkowskiProbe>
where
    F: Fn(f64) -> f64,
{
    let r = x.norm();
    if r <= 0.0 {
        return Err(PbError::InvalidArgument("probe point must have r > 0".into()));
    }
    if y.time.abs() <= y.pos.norm() {
        return Err(PbError::InvalidArgument(
            "Minkowski probe needs a strictly timelike y".into(),
        ));
    }
    if eps_list.is_empty() || eps_list.iter().any(|e| *e <= 0.0) {
        return Err(PbError::InvalidArgument("eps ladder must be positive".into()));
    }
    let (lo, hi) = support;
    let shell = sign.sign() * r;
    let mut breaks = vec![lo];
    if shell > lo && shell < hi {
        breaks.push(shell);
    }
    breaks.push(hi);

    let mut values = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let shift = Event::new(y.pos * eps, y.time * eps);
        let integrand = |t: f64| -> Result<Complex64> {
            let w = phi(t);
            if w == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let at = Event::new(*x, t);
            let below = BeamPoint::new(ComplexEvent::from_parts(at, Event::new(-shift.pos, -shift.time)))?;
            let above = BeamPoint::new(ComplexEvent::from_parts(at, shift))?;
            Ok(w * (below.green_pm(sign)? - above.green_pm(sign)?))
        };
        values.push(integrate_with_breaks(integrand, &breaks, spec)?.value);
    }
    let extrapolated = richardson_to_zero(eps_list, &values)?;
    let limit = y.time.signum() * I * phi(shell) / (4.0 * PI * r);
    Ok(MinkowskiProbe {
        eps: eps_list.to_vec(),
        values,
        extrapolated,
        limit,
    })
}
