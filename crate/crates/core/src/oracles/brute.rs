//! Brute-force source actions: `<box W, f> = int [W lap f - (d_t^2 W) f] d^3x`
//! integrated directly over the oblate shells `p_min < p < R` of the support
//! ball. None of the closed-form machinery is used.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::beams::KappaSign;
use crate::error::{PbError, Result};
use crate::geometry::{from_oblate_in, Frame, OblateCoords, SpaceVec};
use crate::oracles::quad::{integrate, integrate_with_breaks, QuadratureSpec};
use crate::signals::AnalyticSignal;
use crate::sources::TestFunction;

fn phi_mean<G>(g: G, n0: usize, spec: &QuadratureSpec) -> Result<Complex64>
where
    G: Fn(f64) -> Result<Complex64>,
{
    let mut n = n0.max(4);
    let step = |n: usize| 2.0 * PI / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        acc += g(k as f64 * step(n))?;
    }
    let mut mean = acc / n as f64;
    while n < (1 << 14) {
        let h = step(2 * n);
        let mut odd = Complex64::new(0.0, 0.0);
        for k in 0..n {
            odd += g((2 * k + 1) as f64 * h)?;
        }
        let next = 0.5 * (mean + odd / n as f64);
        n *= 2;
        let settled = (next - mean).norm() <= spec.abs_tol.max(spec.rel_tol * next.norm());
        mean = next;
        if settled {
            return Ok(mean);
        }
    }
    Err(PbError::QuadratureFailure {
        best: mean,
        error: f64::NAN,
    })
}

/// `int h(x, r~) d^3x` over the shell `p_min <= p <= p_max` about `y`, as
/// nested adaptive quadrature in `p`, `q` (split at the equator) and `phi`,
/// with the volume element `(p^2 + q^2) / a`.
pub fn quad_oblate<H>(h: H, y: &SpaceVec, p_min: f64, p_max: f64, spec: &QuadratureSpec) -> Result<Complex64>
where
    H: Fn(&SpaceVec, Complex64) -> Result<Complex64>,
{
    shells(h, y, p_min, p_max, None, spec)
}

/// As [`quad_oblate`] for an integrand vanishing outside the ball
/// `(center, radius)`: each azimuthal integral runs over the arc inside the
/// ball only, where the integrand is smooth.
pub fn quad_oblate_ball<H>(
    h: H,
    y: &SpaceVec,
    p_min: f64,
    ball: (SpaceVec, f64),
    spec: &QuadratureSpec,
) -> Result<Complex64>
where
    H: Fn(&SpaceVec, Complex64) -> Result<Complex64>,
{
    // r >= p on each shell
    let p_max = ball.0.norm() + ball.1;
    if p_min >= p_max {
        return Ok(Complex64::new(0.0, 0.0));
    }
    shells(h, y, p_min, p_max, Some(ball), spec)
}

/// Azimuthal arc `(phi0 - half, phi0 + half)` of the circle `(rho, height)`
/// lying inside the ball; `None` if the circle misses it.
fn arc_in_ball(rho: f64, height: f64, center: [f64; 3], radius: f64) -> Option<(f64, f64)> {
    let perp = center[0].hypot(center[1]);
    let dz = height - center[2];
    let base = rho * rho + perp * perp + dz * dz;
    let amp = 2.0 * rho * perp;
    let r2 = radius * radius;
    if amp <= 1e-15 * base {
        return (base < r2).then_some((0.0, PI));
    }
    let c = (base - r2) / amp;
    if c >= 1.0 {
        None
    } else if c <= -1.0 {
        Some((0.0, PI))
    } else {
        Some((center[1].atan2(center[0]), c.acos()))
    }
}

fn shells<H>(
    h: H,
    y: &SpaceVec,
    p_min: f64,
    p_max: f64,
    ball: Option<(SpaceVec, f64)>,
    spec: &QuadratureSpec,
) -> Result<Complex64>
where
    H: Fn(&SpaceVec, Complex64) -> Result<Complex64>,
{
    let frame = Frame::along(y)?;
    let a = y.norm();
    if !(p_min >= 0.0 && p_max > p_min) {
        return Err(PbError::InvalidArgument("need 0 <= p_min < p_max".into()));
    }
    let local_ball = ball.map(|(c, r)| (frame.local(&c), r));
    let q_spec = spec.with_tolerances(spec.rel_tol * 0.1, spec.abs_tol * 0.1);
    let phi_spec = spec.with_tolerances(spec.rel_tol * 0.01, spec.abs_tol * 0.01);
    let shell = |p: f64| -> Result<Complex64> {
        let in_q = |q: f64| -> Result<Complex64> {
            let jac = (p * p + q * q) / a;
            if jac == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let rt = Complex64::new(p, q);
            let at = |phi: f64| {
                let c = OblateCoords { p, q, phi, a };
                h(&from_oblate_in(&c, &frame), rt)
            };
            let total = match local_ball {
                None => 2.0 * PI * phi_mean(at, spec.phi_nodes, &phi_spec)?,
                Some((center, radius)) => {
                    let c = OblateCoords { p, q, phi: 0.0, a };
                    match arc_in_ball(c.rho(), c.axial(), center, radius) {
                        None => return Ok(Complex64::new(0.0, 0.0)),
                        Some((_, half)) if half >= PI => 2.0 * PI * phi_mean(at, spec.phi_nodes, &phi_spec)?,
                        Some((mid, half)) => integrate(at, mid - half, mid + half, &phi_spec)?.value,
                    }
                }
            };
            Ok(jac * total)
        };
        Ok(integrate_with_breaks(in_q, &[-a, 0.0, a], &q_spec)?.value)
    };
    Ok(integrate(shell, p_min, p_max, spec)?.value)
}

fn action_shell<F: TestFunction + ?Sized>(
    f: &F,
    y: &SpaceVec,
    tau: Complex64,
    g: &AnalyticSignal,
    kappa: KappaSign,
    p_min: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if y.norm_sq() == 0.0 {
        return Err(PbError::DegenerateDilation);
    }
    let k = kappa.sign();
    let h = |x: &SpaceVec, rt: Complex64| -> Result<Complex64> {
        let lap = f.laplacian(x);
        let fx = f.eval(x);
        if lap == 0.0 && fx == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let s = tau - k * rt;
        let w = g.eval(s)?;
        let w2 = if fx == 0.0 { Complex64::new(0.0, 0.0) } else { g.deriv2(s)? };
        Ok((w * lap - w2 * fx) / (4.0 * PI * rt))
    };
    quad_oblate_ball(h, y, p_min, f.support_ball(), spec)
}

/// Brute-force action of the static source (`g = -1`).
pub fn action_bruteforce_static<F: TestFunction + ?Sized>(
    f: &F,
    y: &SpaceVec,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    action_shell(f, y, Complex64::new(0.0, 0.0), &AnalyticSignal::ConstNegOne, KappaSign::Plus, 0.0, spec)
}

/// Brute-force action of the source of `g(tau - kappa r~) / (4 pi r~)`.
pub fn action_bruteforce_spacetime<F: TestFunction + ?Sized>(
    f: &F,
    y: &SpaceVec,
    tau: Complex64,
    g: &AnalyticSignal,
    kappa: KappaSign,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    action_shell(f, y, tau, g, kappa, 0.0, spec)
}

/// Brute-force action of `box (Theta(p - eps) W)`: the same integral
/// restricted to `p > eps`.
pub fn action_bruteforce_regularized<F: TestFunction + ?Sized>(
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
    action_shell(f, y, tau, g, kappa, eps, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volume() {
        let y = SpaceVec::new(0.0, 0.6, 0.8);
        let spec = QuadratureSpec::new(1e-10, 1e-14).unwrap();
        // oblate spheroid p < P has volume 4 pi P (P^2 + a^2) / 3
        let v = quad_oblate(|_, _| Ok(Complex64::new(1.0, 0.0)), &y, 0.0, 2.0, &spec).unwrap();
        let expected = 4.0 * PI * 2.0 * 5.0 / 3.0;
        assert!((v.re - expected).abs() < 1e-9 * expected, "{v}");
    }

    #[test]
    fn shell_moment() {
        let y = SpaceVec::new(0.0, 0.0, 1.0);
        let spec = QuadratureSpec::new(1e-10, 1e-14).unwrap();
        // int x3^2 over the spheroid p < P: semi-axes sqrt(P^2 + 1) and P
        let p = 1.5;
        let v = quad_oblate(|x, _| Ok(Complex64::new(x.0[2] * x.0[2], 0.0)), &y, 0.0, p, &spec).unwrap();
        let b = (p * p + 1.0_f64).sqrt();
        let expected = 4.0 * PI * b * b * p.powi(3) / 15.0;
        assert!((v.re - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn odd_azimuthal_integrand_vanishes() {
        let y = SpaceVec::new(0.0, 0.0, 1.0);
        let spec = QuadratureSpec::new(1e-10, 1e-14).unwrap();
        let v = quad_oblate(|x, _| Ok(Complex64::new(x.0[0] * x.0[2].exp(), 0.0)), &y, 0.0, 1.5, &spec).unwrap();
        assert!(v.norm() < 1e-13);
    }

    #[test]
    fn static_moments_of_flat_probes() {
        let y = SpaceVec::new(0.0, 0.0, 1.0);
        let spec = QuadratureSpec::new(1e-9, 1e-11).unwrap();
        let one = crate::sources::builtin("flat").unwrap();
        let v = action_bruteforce_static(&one, &y, &spec).unwrap();
        assert!((v - 1.0).norm() < 1e-8, "{v}");
        let x3 = crate::sources::builtin("x3-flat").unwrap();
        let v = action_bruteforce_static(&x3, &y, &spec).unwrap();
        assert!((v + Complex64::new(0.0, 1.0)).norm() < 1e-8, "{v}");
    }

    #[test]
    fn arcs_inside_ball() {
        assert_eq!(arc_in_ball(0.0, 0.0, [0.0; 3], 1.0), Some((0.0, PI)));
        assert_eq!(arc_in_ball(0.0, 2.0, [0.0; 3], 1.0), None);
        let (mid, half) = arc_in_ball(1.0, 0.0, [1.0, 0.0, 0.0], 1.0).unwrap();
        assert_eq!(mid, 0.0);
        // |x - c|^2 = 2 - 2 cos(phi) < 1
        assert!((half - PI / 3.0).abs() < 1e-15);
    }
}
