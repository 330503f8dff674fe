//! Numerical verification probes over random configurations: the wave
//! operator on beams, far-zone decay, Maxwell evolution sign and the
//! Minkowskian boundary value.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::beams::{minkowski_limit_probe, BeamPoint, KappaSign, MinkowskiProbe};
use crate::em::{maxwell_ratio, Polarization};
use crate::error::{PbError, Result};
use crate::geometry::{complex_distance, farzone_complex_distance, ComplexEvent, Event, SpaceVec};
use crate::oracles::convergence::{convergence_order, log_log_slope, ConvergenceReport};
use crate::oracles::fd::fd_dalembertian;
use crate::oracles::quad::QuadratureSpec;
use crate::signals::AnalyticSignal;

/// Step ladder, in units of the local length scale.
pub const WAVEOP_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// A random evaluation point `x + i y` kept clear of the branch disk and the
/// singular set, with the length scale on which the beam varies there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbePoint {
    pub x: Event,
    pub y: Event,
    pub scale: f64,
}

fn unit_vector(rng: &mut ChaCha8Rng) -> SpaceVec {
    loop {
        let v = SpaceVec::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v * (1.0 / n);
        }
    }
}

/// Draws `n` points with `|x_i| <= 3`, `|t| <= 2`, `a` in `[0.5, 1.5]` and
/// `|u|` in `[0, 3]`, rejecting those within `0.2` (in `p`, `|r~|` or
/// `|tau -/+ r~|`) of the singular set of either beam.
pub fn sample_points(n: usize, seed: u64) -> Vec<ProbePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = SpaceVec::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let y = unit_vector(&mut rng) * rng.gen_range(0.5..1.5);
        let t = rng.gen_range(-2.0..2.0);
        let u = rng.gen_range(-3.0..3.0);
        let z = ComplexEvent::from_parts(Event::new(x, t), Event::new(y, u));
        let Ok(bp) = BeamPoint::new(z) else { continue };
        let p = bp.oblate.map_or(x.norm(), |c| c.p);
        let rt = bp.rtilde.norm();
        let tau = z.tau;
        let d = (tau - bp.rtilde).norm().min((tau + bp.rtilde).norm());
        let scale = p.min(rt).min(d);
        if scale < 0.2 {
            continue;
        }
        out.push(ProbePoint {
            x: Event::new(x, t),
            y: Event::new(y, u),
            scale,
        });
    }
    out
}

/// Which beam a wave-operator probe differentiates.
#[derive(Debug, Clone)]
pub enum BeamField {
    Green(KappaSign),
    Wavelet(AnalyticSignal, KappaSign),
}

impl BeamField {
    pub fn eval(&self, x: &Event, y: &Event) -> Result<Complex64> {
        let bp = BeamPoint::new(ComplexEvent::from_parts(*x, *y))?;
        match self {
            BeamField::Green(s) => bp.green_pm(*s),
            BeamField::Wavelet(g, k) => bp.wavelet(g, *k),
        }
    }

    pub fn label(&self) -> String {
        match self {
            BeamField::Green(KappaSign::Plus) => "G+".into(),
            BeamField::Green(KappaSign::Minus) => "G-".into(),
            BeamField::Wavelet(g, k) => format!("W[{}, kappa={}]", g.kind(), if *k == KappaSign::Plus { "+" } else { "-" }),
        }
    }
}

/// Relative residual `|box_h F| L^2 / |F|` at one point for each step `h L`.
pub fn waveop_residuals(field: &BeamField, pt: &ProbePoint, steps: &[f64]) -> Result<Vec<f64>> {
    let y = pt.y;
    let f0 = field.eval(&pt.x, &y)?.norm();
    if f0 == 0.0 {
        return Err(PbError::SingularDenominator);
    }
    let mut failed = None;
    let eval = |e: &Event| match field.eval(e, &y) {
        Ok(v) => v,
        Err(_) => Complex64::new(f64::NAN, 0.0),
    };
    let out = steps
        .iter()
        .map(|&s| {
            let h = s * pt.scale;
            let r = fd_dalembertian(eval, &pt.x, h).norm() * pt.scale * pt.scale / f0;
            if !r.is_finite() {
                failed = Some(PbError::SingularDenominator);
            }
            r
        })
        .collect();
    match failed {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WaveopSummary {
    pub field: String,
    pub points: usize,
    /// Points whose residual sits at the rounding floor on every step.
    pub at_floor: usize,
    pub failing: usize,
    pub min_order: f64,
    pub median_order: f64,
    /// Fit of the residuals summed over all points.
    pub aggregate: ConvergenceReport,
    pub pass: bool,
}

/// Residual below which the difference quotient is dominated by rounding.
fn rounding_floor(step: f64) -> f64 {
    1e3 * f64::EPSILON / (step * step)
}

pub fn waveop_probe(field: &BeamField, points: &[ProbePoint], target: f64) -> Result<WaveopSummary> {
    let mut orders = Vec::new();
    let mut sums = vec![0.0; WAVEOP_STEPS.len()];
    let mut at_floor = 0;
    let mut failing = 0;
    for pt in points {
        let res = waveop_residuals(field, pt, &WAVEOP_STEPS)?;
        if res.iter().zip(WAVEOP_STEPS).all(|(r, s)| *r <= rounding_floor(s)) {
            at_floor += 1;
            continue;
        }
        for (acc, r) in sums.iter_mut().zip(&res) {
            *acc += r;
        }
        let rep = convergence_order(&WAVEOP_STEPS, &res, target)?;
        if !rep.pass {
            failing += 1;
        }
        orders.push(rep.order);
    }
    orders.sort_by(f64::total_cmp);
    let aggregate = convergence_order(&WAVEOP_STEPS, &sums, target)?;
    let (min_order, median_order) = if orders.is_empty() {
        (f64::NAN, f64::NAN)
    } else {
        (orders[0], orders[orders.len() / 2])
    };
    Ok(WaveopSummary {
        field: field.label(),
        points: points.len(),
        at_floor,
        failing,
        min_order,
        median_order,
        pass: aggregate.pass && failing == 0,
        aggregate,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FarzoneReport {
    pub a: f64,
    pub theta: f64,
    pub radii: Vec<f64>,
    /// `|r~ - (r + i a cos(theta))|` at each radius.
    pub errors: Vec<f64>,
    pub slope: f64,
    pub pass: bool,
}

/// Decay of the far-zone error along the ray at angle `theta` from `y`.
pub fn farzone_probe(a: f64, theta: f64, radii: &[f64]) -> Result<FarzoneReport> {
    if radii.len() < 2 || radii.iter().any(|r| *r <= 0.0) {
        return Err(PbError::InvalidArgument("far-zone probe needs two or more positive radii".into()));
    }
    let y = SpaceVec::new(0.0, 0.0, a);
    let mut errors = Vec::with_capacity(radii.len());
    for &r in radii {
        let x = SpaceVec::new(r * theta.sin(), 0.0, r * theta.cos());
        let rt = complex_distance(&x, &y)?;
        errors.push((rt - farzone_complex_distance(r, theta, a)).norm());
    }
    let logs: Vec<(f64, f64)> = radii.iter().zip(&errors).map(|(r, e)| (r.ln(), e.ln())).collect();
    let slope = log_log_slope(&logs);
    Ok(FarzoneReport {
        a,
        theta,
        radii: radii.to_vec(),
        errors,
        slope,
        pass: (slope + 1.0).abs() <= 0.05,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MaxwellSignReport {
    pub points: usize,
    /// Sign `s` in `curl F = s i d_t F`, if all points agree.
    pub sign: Option<i32>,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Estimates `s` at each point for both beams and a random polarization,
/// with steps `1e-3 L`; consistent means every ratio lies within `1e-3` of
/// one common value in `{+1, -1}`.
pub fn maxwell_sign_probe(points: &[ProbePoint], seed: u64) -> Result<MaxwellSignReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut signs = Vec::with_capacity(points.len());
    let mut max_deviation: f64 = 0.0;
    for (k, pt) in points.iter().enumerate() {
        let pol = Polarization([0; 3].map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
        let sign = if k % 2 == 0 { KappaSign::Plus } else { KappaSign::Minus };
        let s = maxwell_ratio(&pt.x, &pt.y, &pol, sign, 1e-3 * pt.scale)?;
        let nearest = if s.re >= 0.0 { 1.0 } else { -1.0 };
        max_deviation = max_deviation.max((s - nearest).norm());
        signs.push(nearest as i32);
    }
    let first = signs.first().copied();
    let consistent = signs.iter().all(|s| Some(*s) == first);
    let pass = consistent && max_deviation <= 1e-3 && first.is_some();
    Ok(MaxwellSignReport {
        points: points.len(),
        sign: if consistent { first } else { None },
        max_deviation,
        pass,
    })
}

/// Standard mollifier `exp(-1 / (1 - s^2))` on `|s| < 1`,
/// `s = (t - center) / half_width`.
pub fn time_bump(t: f64, center: f64, half_width: f64) -> f64 {
    let s = (t - center) / half_width;
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinkowskiReport {
    pub r: f64,
    pub probe: MinkowskiProbe,
    pub relative_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Smears `G+/-` at the real point `x` (at distance `r`) against the unit
/// [`time_bump`] centered on the light-cone time `+/- r`.
pub fn minkowski_probe(
    x: &SpaceVec,
    y: &Event,
    sign: KappaSign,
    eps_ladder: &[f64],
    tolerance: f64,
    spec: &QuadratureSpec,
) -> Result<MinkowskiReport> {
    let r = x.norm();
    let center = sign.sign() * r;
    let hw = 1.0;
    let probe = minkowski_limit_probe(
        x,
        y,
        sign,
        |t| time_bump(t, center, hw),
        (center - hw, center + hw),
        eps_ladder,
        spec,
    )?;
    let relative_error = probe.relative_error();
    Ok(MinkowskiReport {
        r,
        relative_error,
        tolerance,
        pass: relative_error <= tolerance,
        probe,
    })
}

/// Limit value `sgn(u) i phi(+/- r) / (4 pi r)` for a time bump centered on
/// the light cone, where `phi = 1/e`.
pub fn minkowski_reference(r: f64, u: f64) -> Complex64 {
    Complex64::new(0.0, u.signum() * (-1.0f64).exp() / (4.0 * PI * r))
}
