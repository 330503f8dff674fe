//! Adaptive Gauss-Kronrod (G10/K21) quadrature for complex-valued integrands.

use std::collections::BinaryHeap;
use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{PbError, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_138_400,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances and refinement limits for the oracle quadratures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum bisection depth of any subinterval.
    pub max_depth: u32,
    /// Starting azimuth count for periodic trapezoid means.
    pub phi_nodes: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_depth: 30,
            phi_nodes: 32,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Result<Self> {
        if !(rel_tol > 0.0 && abs_tol > 0.0) {
            return Err(PbError::InvalidArgument(
                "quadrature tolerances must be positive".into(),
            ));
        }
        Ok(QuadratureSpec {
            rel_tol,
            abs_tol,
            ..Default::default()
        })
    }

    pub fn with_tolerances(self, rel_tol: f64, abs_tol: f64) -> Self {
        QuadratureSpec {
            rel_tol,
            abs_tol,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: Complex64,
    pub error: f64,
    pub evals: usize,
}

struct Segment {
    lo: f64,
    hi: f64,
    depth: u32,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F>(f: &F, lo: f64, hi: f64) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center)?;
    let mut kron = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx)? + f(center + dx)?;
        kron += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kron * half;
    if !value.is_finite() {
        return Err(PbError::QuadratureFailure {
            best: value,
            error: f64::INFINITY,
        });
    }
    let error = ((kron - gauss) * half).norm();
    Ok((value, error))
}

/// Integrates `f` over `[lo, hi]` to `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<QuadEstimate>
where
    F: Fn(f64) -> Result<Complex64>,
{
    integrate_with_breaks(f, &[lo, hi], spec)
}

/// As [`integrate`], with the initial partition at the given sorted points.
pub fn integrate_with_breaks<F>(f: F, points: &[f64], spec: &QuadratureSpec) -> Result<QuadEstimate>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if points.len() < 2 {
        return Err(PbError::InvalidArgument(
            "integration needs at least two endpoints".into(),
        ));
    }
    let mut heap = BinaryHeap::new();
    let mut evals = 0;
    for w in points.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let (value, error) = kronrod21(&f, w[0], w[1])?;
        evals += 21;
        heap.push(Segment {
            lo: w[0],
            hi: w[1],
            depth: 0,
            value,
            error,
        });
    }
    let mut frozen_value = Complex64::new(0.0, 0.0);
    let mut frozen_error = 0.0;
    let mut iter = 0usize;
    let (mut value, mut error, mut abs_sum) = totals(&heap);
    loop {
        iter += 1;
        if iter % 64 == 0 {
            (value, error, abs_sum) = totals(&heap);
        }
        let total = frozen_value + value;
        let total_error = frozen_error + error;
        let target = spec
            .abs_tol
            .max(spec.rel_tol * total.norm())
            .max(50.0 * f64::EPSILON * abs_sum);
        if total_error <= target {
            let (v, e, _) = totals(&heap);
            let (total, total_error) = (frozen_value + v, frozen_error + e);
            return Ok(QuadEstimate {
                value: total,
                error: total_error,
                evals,
            });
        }
        let Some(worst) = heap.pop() else {
            return Err(PbError::QuadratureFailure {
                best: total,
                error: total_error,
            });
        };
        value -= worst.value;
        error -= worst.error;
        abs_sum -= worst.value.norm();
        if worst.depth >= spec.max_depth {
            frozen_value += worst.value;
            frozen_error += worst.error;
            if heap.is_empty() || frozen_error > target {
                let (v, e, _) = totals(&heap);
                return Err(PbError::QuadratureFailure {
                    best: frozen_value + v,
                    error: frozen_error + e,
                });
            }
            continue;
        }
        let mid = 0.5 * (worst.lo + worst.hi);
        for (lo, hi) in [(worst.lo, mid), (mid, worst.hi)] {
            let (v, e) = kronrod21(&f, lo, hi)?;
            evals += 21;
            value += v;
            error += e;
            abs_sum += v.norm();
            heap.push(Segment {
                lo,
                hi,
                depth: worst.depth + 1,
                value: v,
                error: e,
            });
        }
    }
}

fn totals(heap: &BinaryHeap<Segment>) -> (Complex64, f64, f64) {
    heap.iter().fold(
        (Complex64::new(0.0, 0.0), 0.0, 0.0),
        |(v, e, a), s| (v + s.value, e + s.error, a + s.value.norm()),
    )
}

/// Mean over `[0, 2 pi)` by the `n`-point periodic trapezoid rule.
pub fn periodic_mean<F>(f: F, n: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let h = 2.0 * PI / n as f64;
    (0..n).map(|k| f(k as f64 * h)).sum::<Complex64>() / n as f64
}

/// Periodic trapezoid mean, doubling the node count from `n0` until two
/// successive estimates agree to `max(abs_tol, rel_tol |mean|)`.
pub fn periodic_mean_adaptive<F>(f: F, n0: usize, spec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let mut n = n0.max(4);
    let mut prev = periodic_mean(&f, n);
    while n < (1 << 16) {
        // reuse the existing nodes: the new ones interleave them
        let h = 2.0 * PI / (2 * n) as f64;
        let odd: Complex64 = (0..n).map(|k| f((2 * k + 1) as f64 * h)).sum();
        let next = 0.5 * (prev + odd / n as f64);
        n *= 2;
        let diff = (next - prev).norm();
        if diff <= spec.abs_tol.max(spec.rel_tol * next.norm()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(PbError::QuadratureFailure {
        best: prev,
        error: f64::NAN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(v: f64) -> Result<Complex64> {
        Ok(Complex64::new(v, 0.0))
    }

    #[test]
    fn exact_for_polynomials() {
        // K21 integrates degree 31 exactly; one segment suffices
        let spec = QuadratureSpec::default();
        for deg in [0, 5, 19, 31] {
            let est = integrate(|x| ok(x.powi(deg)), 0.0, 1.0, &spec).unwrap();
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!((est.value.re - exact).abs() < 1e-14, "deg {deg}");
            if deg <= 19 {
                assert_eq!(est.evals, 21);
            }
        }
        // Gauss 10 is exact to degree 19 so the error estimate collapses
        let est = integrate(|x| ok(x.powi(19)), -1.0, 2.0, &spec).unwrap();
        assert!(est.error < 1e-12);
    }

    #[test]
    fn complex_and_endpoint_singular() {
        let spec = QuadratureSpec::new(1e-12, 1e-15).unwrap();
        let est = integrate(
            |x| Ok(Complex64::new(0.0, x).exp()),
            0.0,
            std::f64::consts::PI,
            &spec,
        )
        .unwrap();
        assert!((est.value - Complex64::new(0.0, 2.0)).norm() < 1e-12);

        let est = integrate(|x| ok(x.sqrt()), 0.0, 1.0, &spec).unwrap();
        assert!((est.value.re - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn reports_failure_with_estimate() {
        let spec = QuadratureSpec {
            max_depth: 3,
            ..QuadratureSpec::new(1e-14, 1e-16).unwrap()
        };
        let err = integrate(|x| ok(1.0 / x.abs().sqrt()), -1.0, 2.0, &spec).unwrap_err();
        match err {
            PbError::QuadratureFailure { best, error } => {
                assert!((best.re - 2.0 - 8f64.sqrt()).abs() < 0.5);
                assert!(error > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn breakpoints_handle_kinks() {
        let spec = QuadratureSpec::new(1e-12, 1e-15).unwrap();
        let est = integrate_with_breaks(|x| ok((x - 0.3).abs()), &[0.0, 0.3, 1.0], &spec).unwrap();
        assert!((est.value.re - (0.045 + 0.245)).abs() < 1e-14);
    }

    #[test]
    fn periodic_means() {
        let m = periodic_mean(|p| Complex64::new(p.cos().powi(2), 0.0), 8);
        assert!((m.re - 0.5).abs() < 1e-15);
        let spec = QuadratureSpec::default();
        let m = periodic_mean_adaptive(|p| Complex64::new((p.cos()).exp(), 0.0), 4, &spec).unwrap();
        // I0(1)
        assert!((m.re - 1.266_065_877_752_008_4).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_tolerances() {
        assert!(QuadratureSpec::new(0.0, 1e-10).is_err());
        assert!(QuadratureSpec::new(1e-8, -1.0).is_err());
    }
}
