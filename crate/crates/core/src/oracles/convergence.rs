//! Convergence-order estimation and Richardson extrapolation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{PbError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub steps: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Least-squares slope of `log residual` against `log step`.
    pub order: f64,
    pub target: f64,
    pub monotone: bool,
    pub pass: bool,
}

/// Fits the observed order of `residuals` against `steps`. Passes iff the
/// residuals shrink monotonically with the step and `order >= target - 0.1`.
pub fn convergence_order(steps: &[f64], residuals: &[f64], target: f64) -> Result<ConvergenceReport> {
    if steps.len() != residuals.len() || steps.len() < 3 {
        return Err(PbError::InvalidArgument(
            "convergence fit needs at least three (step, residual) pairs".into(),
        ));
    }
    let mut pairs: Vec<(f64, f64)> = steps.iter().copied().zip(residuals.iter().copied()).collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let monotone = pairs.windows(2).all(|w| w[1].1 < w[0].1) && pairs.iter().all(|p| p.1 > 0.0);
    let order = if pairs.iter().all(|p| p.0 > 0.0 && p.1 > 0.0) {
        let logs: Vec<(f64, f64)> = pairs.iter().map(|&(h, r)| (h.ln(), r.ln())).collect();
        log_log_slope(&logs)
    } else {
        f64::NAN
    };
    Ok(ConvergenceReport {
        steps: pairs.iter().map(|p| p.0).collect(),
        residuals: pairs.iter().map(|p| p.1).collect(),
        order,
        target,
        monotone,
        pass: monotone && order >= target - 0.1,
    })
}

/// Least-squares slope through `(x, y)` pairs.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Value at `x = 0` of the interpolating polynomial through `(xs, ys)`
/// (Neville's scheme).
pub fn richardson_to_zero(xs: &[f64], ys: &[Complex64]) -> Result<Complex64> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(PbError::InvalidArgument(
            "extrapolation needs matching, non-empty samples".into(),
        ));
    }
    let mut p = ys.to_vec();
    let n = xs.len();
    for k in 1..n {
        for i in 0..n - k {
            let (xi, xk) = (xs[i], xs[i + k]);
            if xi == xk {
                return Err(PbError::InvalidArgument("repeated extrapolation node".into()));
            }
            p[i] = (xk * p[i] - xi * p[i + 1]) / (xk - xi);
        }
    }
    Ok(p[0])
}
