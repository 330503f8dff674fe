//! Source distributions `S = box W` of pulsed-beam wavelets, probed by
//! smooth test functions.
//!
//! The source is supported on the branch disk. Its action on a test function
//! `f` is available in four forms:
//!
//! * [`action_limit`]: the closed form
//!   `<S, f> = -gbar(tau, a) f(0) + 2ia int_0^a (dq/q) gbar(tau, q) fbar_r(iq)`;
//! * [`action_regularized`]: the action of `box (Theta(p - eps) W)`, a pair of
//!   pole sources at the tips of the ellipsoid `p = eps` plus a double layer
//!   and a tangential flow on it;
//! * [`action_static_delta`] and [`action_spacetime_delta`]: the cylindrical
//!   operator forms of the static (`g = -1`) and Cauchy (`g = 1/(2 pi tau)`)
//!   sources, with `(a/rho) d_rho - i d_3` applied directly to `f`.
//!
//! `fbar` is the azimuthal mean of `f` in oblate coordinates and
//! `fbar_r = (d_p - i d_q) fbar / 2`. Derivatives come from the analytic
//! gradient of `f` through the coordinate map.

pub mod test_fn;

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::beams::KappaSign;
use crate::error::{PbError, Result};
use crate::geometry::{from_oblate_in, Frame, OblateCoords, SpaceVec};
use crate::oracles::quad::{integrate, integrate_with_breaks, periodic_mean, QuadratureSpec};
use crate::signals::{jump_average, AnalyticSignal};

pub use test_fn::{builtin, builtins, Affine, Envelope, ProbeFunction, TestFunction, BUILTIN_NAMES};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Below this fraction of `a`, the radial mean `M` is taken from the Hessian.
const AXIS_RHO: f64 = 1e-6;

/// Frame and radius of the branch disk of `y`.
#[derive(Debug, Clone, Copy)]
pub struct DiskGeometry {
    pub frame: Frame,
    pub a: f64,
}

impl DiskGeometry {
    pub fn new(y: &SpaceVec) -> Result<Self> {
        Ok(DiskGeometry {
            frame: Frame::along(y)?,
            a: y.norm(),
        })
    }

    fn coords(&self, p: f64, q: f64, phi: f64) -> OblateCoords {
        OblateCoords {
            p,
            q,
            phi,
            a: self.a,
        }
    }

    /// Point at cylindrical radius `rho`, azimuth `phi`, height `h`.
    fn cylindrical(&self, rho: f64, phi: f64, h: f64) -> SpaceVec {
        let (s, c) = phi.sin_cos();
        self.frame.global([rho * c, rho * s, h])
    }
}

/// Azimuthal means entering `fbar_r`: `m_rho = <grad f . e_rho> / rho`
/// (the Hessian limit on the axis) and `m_axial = <grad f . y^>`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct RadialMeans {
    m_rho: f64,
    m_axial: f64,
}

fn radial_integrand<F: TestFunction + ?Sized>(
    f: &F,
    geom: &DiskGeometry,
    rho: f64,
    h: f64,
    phi: f64,
) -> [f64; 2] {
    let (s, c) = phi.sin_cos();
    let e_rho = geom.frame.e1 * c + geom.frame.e2 * s;
    let x = geom.cylindrical(rho, phi, h);
    let g = SpaceVec(f.grad(&x));
    let m_axial = g.dot(&geom.frame.axis);
    let m_rho = if rho > AXIS_RHO * geom.a {
        g.dot(&e_rho) / rho
    } else {
        let hs = f.hess(&x);
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                acc += e_rho.0[i] * hs[i][j] * e_rho.0[j];
            }
        }
        acc
    };
    [m_rho, m_axial]
}

/// Azimuthal mean of a two-component real function, doubling the periodic
/// trapezoid rule until both components settle.
fn mean2<G>(g: G, spec: &QuadratureSpec) -> Result<[f64; 2]>
where
    G: Fn(f64) -> [f64; 2],
{
    let mut n = spec.phi_nodes.max(4);
    let sum = |n: usize, offset: f64| {
        let h = 2.0 * PI / n as f64;
        (0..n).fold([0.0; 2], |acc, k| {
            let v = g((k as f64 + offset) * h);
            [acc[0] + v[0], acc[1] + v[1]]
        })
    };
    let s = sum(n, 0.0);
    let mut mean = [s[0] / n as f64, s[1] / n as f64];
    while n < (1 << 15) {
        let odd = sum(n, 0.5);
        let next = [
            0.5 * (mean[0] + odd[0] / n as f64),
            0.5 * (mean[1] + odd[1] / n as f64),
        ];
        n *= 2;
        let settled = (0..2).all(|i| {
            (next[i] - mean[i]).abs() <= spec.abs_tol.max(spec.rel_tol * next[i].abs())
        });
        mean = next;
        if settled {
            return Ok(mean);
        }
    }
    Err(PbError::QuadratureFailure {
        best: Complex64::new(mean[0], mean[1]),
        error: f64::NAN,
    })
}

fn radial_means<F: TestFunction + ?Sized>(
    f: &F,
    geom: &DiskGeometry,
    rho: f64,
    h: f64,
    spec: &QuadratureSpec,
) -> Result<RadialMeans> {
    let [m_rho, m_axial] = mean2(|phi| radial_integrand(f, geom, rho, h, phi), spec)?;
    Ok(RadialMeans { m_rho, m_axial })
}

fn rtilde_derivative(means: RadialMeans, p: f64, q: f64, a: f64) -> Complex64 {
    let a2 = a * a;
    let radial = Complex64::new(p * (a2 - q * q), q * (a2 + p * p)) / a2;
    let axial = Complex64::new(q, -p) / a;
    0.5 * (means.m_rho * radial + means.m_axial * axial)
}

/// Azimuthal mean of `f` at oblate `(p, q)` by the `n_nodes`-point trapezoid rule.
pub fn phi_mean<F: TestFunction + ?Sized>(
    f: &F,
    p: f64,
    q: f64,
    y: &SpaceVec,
    n_nodes: usize,
) -> Result<f64> {
    let geom = DiskGeometry::new(y)?;
    let n = n_nodes.max(1);
    let m = periodic_mean(
        |phi| Complex64::new(f.eval(&from_oblate_in(&geom.coords(p, q, phi), &geom.frame)), 0.0),
        n,
    );
    Ok(m.re)
}

/// `fbar_r = (d_p - i d_q) fbar / 2` at oblate `(p, q)`, with `n_nodes` azimuths.
pub fn f_rtilde<F: TestFunction + ?Sized>(
    f: &F,
    p: f64,
    q: f64,
    y: &SpaceVec,
    n_nodes: usize,
) -> Result<Complex64> {
    let geom = DiskGeometry::new(y)?;
    let c = geom.coords(p, q, 0.0);
    let (rho, h) = (c.rho(), c.axial());
    let n = n_nodes.max(1);
    let step = 2.0 * PI / n as f64;
    let mut acc = [0.0; 2];
    for k in 0..n {
        let v = radial_integrand(f, &geom, rho, h, k as f64 * step);
        acc[0] += v[0];
        acc[1] += v[1];
    }
    let means = RadialMeans {
        m_rho: acc[0] / n as f64,
        m_axial: acc[1] / n as f64,
    };
    Ok(rtilde_derivative(means, p, q, geom.a))
}

fn f_rtilde_adaptive<F: TestFunction + ?Sized>(
    f: &F,
    geom: &DiskGeometry,
    p: f64,
    q: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let c = geom.coords(p, q, 0.0);
    let means = radial_means(f, geom, c.rho(), c.axial(), spec)?;
    Ok(rtilde_derivative(means, p, q, geom.a))
}

fn inner_spec(spec: &QuadratureSpec) -> QuadratureSpec {
    spec.with_tolerances(spec.rel_tol * 0.1, spec.abs_tol * 0.1)
}

/// Limit action `<S, f>` of the source of `W = g(tau - kappa r~) / (4 pi r~)`.
/// Independent of `kappa`. For `y = 0` returns `-g(tau) f(0)`.
pub fn action_limit<F: TestFunction + ?Sized>(
    f: &F,
    y: &SpaceVec,
    tau: Complex64,
    g: &AnalyticSignal,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let f0 = f.eval(&SpaceVec::ZERO);
    if y.norm_sq() == 0.0 {
        return Ok(-g.eval(tau)? * f0);
    }
    let geom = DiskGeometry::new(y)?;
    let a = geom.a;
    let inner = inner_spec(spec);
    // 2ia fbar_r(iq) / q = i m_axial - a m_rho at p = 0, continuous at q = 0
    let integrand = |q: f64| -> Result<Complex64> {
        let rho = ((a - q) * (a + q)).max(0.0).sqrt();
        let m = radial_means(f, &geom, rho, 0.0, &inner)?;
        Ok(jump_average(g, tau, q)? * Complex64::new(-a * m.m_rho, m.m_axial))
    };
    let layer = integrate(integrand, 0.0, a, spec)?.value;
    Ok(-jump_average(g, tau, a)? * f0 + layer)
}

/// Action of the regularized source `box (Theta(p - eps) W)`.
pub fn action_regularized<F: TestFunction + ?Sized>(
    f: &F,
    y: &SpaceVec,
    tau: Complex64,
    g: &AnalyticSignal,
    kappa: KappaSign,
    eps: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if !(eps > 0.0) {
        return Err(PbError::InvalidArgument("eps must be positive".into()));
    }
    let geom = DiskGeometry::new(y)?;
    let a = geom.a;
    let k = kappa.sign();
    let alpha = Complex64::new(eps, a);
    let alpha_bar = alpha.conj();
    let aa = eps * eps + a * a;
    let north = f.eval(&(geom.frame.axis * eps));
    let south = f.eval(&(geom.frame.axis * -eps));
    let poles = aa / (2.0 * I * a)
        * (g.eval(tau - k * alpha)? * north / alpha - g.eval(tau - k * alpha_bar)? * south / alpha_bar);
    let inner = inner_spec(spec);
    let integrand = |q: f64| -> Result<Complex64> {
        let rt = Complex64::new(eps, q);
        let fr = f_rtilde_adaptive(f, &geom, eps, q, &inner)?;
        Ok(g.eval(tau - k * rt)? * fr / rt)
    };
    let layer = integrate_with_breaks(integrand, &[-a, 0.0, a], spec)?.value;
    Ok(poles - aa / a * layer)
}

fn cylindrical_layer<F, K>(f: &F, y: &SpaceVec, weight: K, spec: &QuadratureSpec) -> Result<Complex64>
where
    F: TestFunction + ?Sized,
    K: Fn(f64) -> Result<Complex64>,
{
    let geom = DiskGeometry::new(y)?;
    let a = geom.a;
    let inner = inner_spec(spec);
    // rho = a sin(psi) removes the 1/sqrt(a^2 - rho^2) rim singularity
    let integrand = |psi: f64| -> Result<Complex64> {
        let rho = a * psi.sin();
        let m = radial_means(f, &geom, rho, 0.0, &inner)?;
        Ok(weight(rho)? * a * psi.sin() * Complex64::new(a * m.m_rho, -m.m_axial))
    };
    Ok(integrate(integrand, 0.0, FRAC_PI_2, spec)?.value)
}

/// Action of the static complex point source (`g = -1`) in its cylindrical
/// operator form `delta(x) + Theta(a - rho) delta(x3) / (2 pi sqrt(a^2 - rho^2)) ((a/rho) d_rho - i d_3)`.
pub fn action_static_delta<F: TestFunction + ?Sized>(
    f: &F,
    y: &SpaceVec,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let f0 = f.eval(&SpaceVec::ZERO);
    if y.norm_sq() == 0.0 {
        return Ok(Complex64::new(f0, 0.0));
    }
    let layer = cylindrical_layer(f, y, |_| Ok(Complex64::new(1.0, 0.0)), spec)?;
    Ok(f0 + layer)
}

/// Action of the complex spacetime point source (`g = 1/(2 pi tau)`) in its
/// cylindrical form, with `z^2 = rho^2 - a^2 - tau^2` evaluated on the disk.
pub fn action_spacetime_delta<F: TestFunction + ?Sized>(
    f: &F,
    y: &SpaceVec,
    tau: Complex64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let a = y.norm();
    let weight = |rho: f64| -> Result<Complex64> {
        let z2 = (rho - a) * (rho + a) - tau * tau;
        if z2.norm() <= 1e-14 * (a * a + tau.norm_sqr()) {
            return Err(PbError::LightConeSingular);
        }
        Ok(tau / (2.0 * PI * z2))
    };
    let f0 = f.eval(&SpaceVec::ZERO);
    let point = weight(0.0)? * f0;
    if a == 0.0 {
        return Ok(point);
    }
    Ok(point + cylindrical_layer(f, y, weight, spec)?)
}

/// Unsmeared form of the regularized source on the ellipsoid `p = eps`:
/// `S_eps = W [i delta(r~ - alpha_bar) - i delta(r~ - alpha) - 2 |alpha / r~|^2 delta(p - eps) d_r~]`.
#[derive(Debug, Clone)]
pub struct LayerRepresentation {
    pub epsilon: f64,
    /// `eps + i a`, the north pole of the ellipsoid.
    pub alpha: Complex64,
    /// Weight `-i W(alpha)` of the point source at the north pole.
    pub pole_plus: Complex64,
    /// Weight `+i W(alpha_bar)` of the point source at the south pole.
    pub pole_minus: Complex64,
    geom: DiskGeometry,
    signal: AnalyticSignal,
    tau: Complex64,
    kappa: KappaSign,
}

impl LayerRepresentation {
    /// Coefficient `-2 |alpha / r~|^2 W(r~)` of `delta(p - eps) d_r~` at
    /// `r~ = eps + i q`; independent of the azimuth.
    pub fn double_layer(&self, q: f64) -> Result<Complex64> {
        let rt = Complex64::new(self.epsilon, q);
        let w = self.signal.eval(self.tau - self.kappa.sign() * rt)? / (4.0 * PI * rt);
        Ok(-2.0 * self.alpha.norm_sqr() / rt.norm_sqr() * w)
    }

    /// `<S_eps, f>`, integrating each layer against `f` with the oblate
    /// volume element.
    pub fn contract<F: TestFunction + ?Sized>(&self, f: &F, spec: &QuadratureSpec) -> Result<Complex64> {
        let a = self.geom.a;
        let eps = self.epsilon;
        let jac_pole = (eps * eps + a * a) / a;
        let north = f.eval(&(self.geom.frame.axis * eps));
        let south = f.eval(&(self.geom.frame.axis * -eps));
        let poles = 2.0 * PI * jac_pole * (self.pole_plus * north + self.pole_minus * south);
        let inner = inner_spec(spec);
        let integrand = |q: f64| -> Result<Complex64> {
            let jac = (eps * eps + q * q) / a;
            let fr = f_rtilde_adaptive(f, &self.geom, eps, q, &inner)?;
            Ok(2.0 * PI * jac * self.double_layer(q)? * fr)
        };
        let layer = integrate_with_breaks(integrand, &[-a, 0.0, a], spec)?.value;
        Ok(poles + layer)
    }
}

pub fn unsmeared_layers(
    y: &SpaceVec,
    tau: Complex64,
    g: &AnalyticSignal,
    kappa: KappaSign,
    eps: f64,
) -> Result<LayerRepresentation> {
    if !(eps > 0.0) {
        return Err(PbError::InvalidArgument("eps must be positive".into()));
    }
    let geom = DiskGeometry::new(y)?;
    let alpha = Complex64::new(eps, geom.a);
    let w = |rt: Complex64| -> Result<Complex64> {
        Ok(g.eval(tau - kappa.sign() * rt)? / (4.0 * PI * rt))
    };
    Ok(LayerRepresentation {
        epsilon: eps,
        alpha,
        pole_plus: -I * w(alpha)?,
        pole_minus: I * w(alpha.conj())?,
        geom,
        signal: g.clone(),
        tau,
        kappa,
    })
}
