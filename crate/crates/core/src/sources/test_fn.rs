//! Smooth probes `f(x)` with analytic gradients and Hessians.

use serde::{Deserialize, Serialize};

use crate::geometry::SpaceVec;

pub type Hessian = [[f64; 3]; 3];

/// A real test function on R^3, supported (up to `tail_bound`) in the ball
/// of radius `support_radius` about the origin.
pub trait TestFunction: Send + Sync {
    fn eval(&self, x: &SpaceVec) -> f64;
    fn grad(&self, x: &SpaceVec) -> [f64; 3];
    fn hess(&self, x: &SpaceVec) -> Hessian;
    fn support_radius(&self) -> f64;

    /// Ball `(center, radius)` containing the support.
    fn support_ball(&self) -> (SpaceVec, f64) {
        (SpaceVec::ZERO, self.support_radius())
    }

    /// Bound on `|f|` and its derivatives outside `support_radius`.
    fn tail_bound(&self) -> f64 {
        0.0
    }

    fn laplacian(&self, x: &SpaceVec) -> f64 {
        let h = self.hess(x);
        h[0][0] + h[1][1] + h[2][2]
    }
}

/// Radial envelope of a probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Envelope {
    /// `(1 - |x - c|^2 / R^2)^4` inside the ball, zero outside (C^3).
    Poly4 { center: SpaceVec, radius: f64 },
    /// `exp(-|x - c|^2 / (2 sigma^2))`, truncated at `cutoff` for integration.
    Gaussian { center: SpaceVec, sigma: f64, cutoff: f64 },
    /// Identically one for `|x - c| <= inner`, zero beyond `outer`, with a
    /// degree-7 smoothstep (C^3) in between.
    FlatTop { center: SpaceVec, inner: f64, outer: f64 },
}

fn outer(u: &[f64; 3], v: &[f64; 3]) -> Hessian {
    let mut h = [[0.0; 3]; 3];
    for (i, row) in h.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = u[i] * v[j];
        }
    }
    h
}

/// Radial profile `chi(r)` of the flat-top cutoff with its first two
/// derivatives.
fn flat_top_profile(r: f64, inner: f64, outer: f64) -> (f64, f64, f64) {
    if r <= inner {
        return (1.0, 0.0, 0.0);
    }
    if r >= outer {
        return (0.0, 0.0, 0.0);
    }
    let w = outer - inner;
    let s = (r - inner) / w;
    let s2 = s * s;
    let s3 = s2 * s;
    // smoothstep 35 s^4 - 84 s^5 + 70 s^6 - 20 s^7 and derivatives
    let step = s2 * s2 * (35.0 - 84.0 * s + 70.0 * s2 - 20.0 * s3);
    let d1 = 140.0 * s3 * (1.0 - s).powi(3);
    let d2 = 420.0 * s2 * (1.0 - s).powi(2) * (1.0 - 2.0 * s);
    (1.0 - step, -d1 / w, -d2 / (w * w))
}

impl Envelope {
    pub fn center(&self) -> SpaceVec {
        match *self {
            Envelope::Poly4 { center, .. }
            | Envelope::Gaussian { center, .. }
            | Envelope::FlatTop { center, .. } => center,
        }
    }

    fn reach(&self) -> f64 {
        match *self {
            Envelope::Poly4 { radius, .. } => radius,
            Envelope::Gaussian { cutoff, .. } => cutoff,
            Envelope::FlatTop { outer, .. } => outer,
        }
    }

    /// Value, gradient and Hessian at `x`.
    pub fn jet(&self, x: &SpaceVec) -> (f64, [f64; 3], Hessian) {
        let d = (*x - self.center()).0;
        let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        let ident = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let combine = |a: f64, b: f64| -> Hessian {
            // a I + b d d^T
            let dd = outer(&d, &d);
            let mut h = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    h[i][j] = a * ident[i][j] + b * dd[i][j];
                }
            }
            h
        };
        match *self {
            Envelope::Poly4 { radius, .. } => {
                let s = r2 / (radius * radius);
                if s >= 1.0 {
                    return (0.0, [0.0; 3], [[0.0; 3]; 3]);
                }
                let m = 1.0 - s;
                let k = 8.0 * m.powi(3) / (radius * radius);
                let grad = d.map(|c| -k * c);
                let h = combine(-k, 48.0 * m * m / radius.powi(4));
                (m.powi(4), grad, h)
            }
            Envelope::Gaussian { sigma, .. } => {
                let s2 = sigma * sigma;
                let e = (-r2 / (2.0 * s2)).exp();
                let grad = d.map(|c| -e * c / s2);
                let h = combine(-e / s2, e / (s2 * s2));
                (e, grad, h)
            }
            Envelope::FlatTop { inner, outer: out, .. } => {
                let r = r2.sqrt();
                let (chi, d1, d2) = flat_top_profile(r, inner, out);
                if d1 == 0.0 && d2 == 0.0 {
                    return (chi, [0.0; 3], [[0.0; 3]; 3]);
                }
                // grad = chi' d/r; hess = chi'' dd^T/r^2 + chi'/r (I - dd^T/r^2)
                let grad = d.map(|c| d1 * c / r);
                let h = combine(d1 / r, (d2 - d1 / r) / r2);
                (chi, grad, h)
            }
        }
    }
}

/// Affine weight `c0 + c . x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    pub constant: f64,
    pub linear: [f64; 3],
}

impl Affine {
    pub const ONE: Affine = Affine {
        constant: 1.0,
        linear: [0.0; 3],
    };

    pub fn coordinate(axis: usize) -> Affine {
        let mut linear = [0.0; 3];
        linear[axis] = 1.0;
        Affine {
            constant: 0.0,
            linear,
        }
    }

    fn eval(&self, x: &SpaceVec) -> f64 {
        self.constant + SpaceVec(self.linear).dot(x)
    }
}

/// `weight(x) * envelope(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeFunction {
    pub name: String,
    pub envelope: Envelope,
    pub weight: Affine,
}

impl ProbeFunction {
    pub fn new(name: impl Into<String>, envelope: Envelope, weight: Affine) -> Self {
        ProbeFunction {
            name: name.into(),
            envelope,
            weight,
        }
    }
}

impl TestFunction for ProbeFunction {
    fn eval(&self, x: &SpaceVec) -> f64 {
        let (e, _, _) = self.envelope.jet(x);
        if e == 0.0 {
            return 0.0;
        }
        self.weight.eval(x) * e
    }

    fn grad(&self, x: &SpaceVec) -> [f64; 3] {
        let (e, ge, _) = self.envelope.jet(x);
        let w = self.weight.eval(x);
        [0, 1, 2].map(|j| w * ge[j] + e * self.weight.linear[j])
    }

    fn hess(&self, x: &SpaceVec) -> Hessian {
        let (_, ge, he) = self.envelope.jet(x);
        let w = self.weight.eval(x);
        let c = &self.weight.linear;
        let mut h = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                h[i][j] = w * he[i][j] + c[i] * ge[j] + ge[i] * c[j];
            }
        }
        h
    }

    fn support_radius(&self) -> f64 {
        self.envelope.center().norm() + self.envelope.reach()
    }

    fn support_ball(&self) -> (SpaceVec, f64) {
        (self.envelope.center(), self.envelope.reach())
    }

    fn tail_bound(&self) -> f64 {
        match self.envelope {
            Envelope::Gaussian { sigma, cutoff, .. } => {
                let r = self.support_radius();
                let w = self.weight.constant.abs() + SpaceVec(self.weight.linear).norm() * r;
                let x = cutoff / sigma;
                // |f|, |grad f|, |hess f| all carry the factor exp(-x^2/2)
                (w + 1.0) * (1.0 + x + x * x) / (sigma * sigma).min(1.0) * (-0.5 * x * x).exp()
            }
            _ => 0.0,
        }
    }
}

fn poly4(center: [f64; 3], radius: f64) -> Envelope {
    Envelope::Poly4 {
        center: SpaceVec(center),
        radius,
    }
}

fn gaussian(center: [f64; 3], sigma: f64) -> Envelope {
    Envelope::Gaussian {
        center: SpaceVec(center),
        sigma,
        cutoff: 9.0 * sigma,
    }
}

fn flat(center: [f64; 3], inner: f64, outer: f64) -> Envelope {
    Envelope::FlatTop {
        center: SpaceVec(center),
        inner,
        outer,
    }
}

/// Names of the built-in probes, in a fixed order. Scales assume a source
/// disk of radius about one.
pub const BUILTIN_NAMES: [&str; 13] = [
    "bump",
    "bump-offset",
    "x1-bump",
    "x3-bump",
    "affine-bump",
    "gauss",
    "gauss-offset",
    "x3-gauss",
    "flat",
    "x3-flat",
    "x1-flat",
    "far-bump",
    "upper-bump",
];

/// Looks up a built-in probe by name.
pub fn builtin(name: &str) -> Option<ProbeFunction> {
    let (envelope, weight) = match name {
        "bump" => (poly4([0.0; 3], 2.0), Affine::ONE),
        "bump-offset" => (poly4([0.3, -0.2, 0.4], 2.2), Affine::ONE),
        "x1-bump" => (poly4([0.0; 3], 2.0), Affine::coordinate(0)),
        "x3-bump" => (poly4([0.0; 3], 2.0), Affine::coordinate(2)),
        "affine-bump" => (
            poly4([0.1, 0.2, -0.1], 2.5),
            Affine {
                constant: 1.0,
                linear: [0.5, -0.3, 0.7],
            },
        ),
        "gauss" => (gaussian([0.0; 3], 0.7), Affine::ONE),
        "gauss-offset" => (gaussian([0.2, 0.1, -0.3], 0.8), Affine::ONE),
        "x3-gauss" => (gaussian([0.0; 3], 0.9), Affine::coordinate(2)),
        "flat" => (flat([0.0; 3], 1.5, 3.0), Affine::ONE),
        "x3-flat" => (flat([0.0; 3], 1.5, 3.0), Affine::coordinate(2)),
        "x1-flat" => (flat([0.0; 3], 1.5, 3.0), Affine::coordinate(0)),
        // supported in r > a + margin
        "far-bump" => (poly4([3.0, 0.0, 0.0], 1.5), Affine::ONE),
        // supported in the half-space x3 > margin
        "upper-bump" => (poly4([0.2, 0.0, 2.0], 1.5), Affine::ONE),
        _ => return None,
    };
    Some(ProbeFunction::new(name, envelope, weight))
}

pub fn builtins() -> Vec<ProbeFunction> {
    BUILTIN_NAMES
        .iter()
        .map(|n| builtin(n).expect("listed built-in"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(f: &ProbeFunction, x: SpaceVec) {
        let h = 1e-4;
        let g = f.grad(&x);
        let hs = f.hess(&x);
        for j in 0..3 {
            let e = SpaceVec::unit(j) * h;
            let fd = (f.eval(&(x + e)) - f.eval(&(x - e))) / (2.0 * h);
            assert!((fd - g[j]).abs() < 1e-7, "{} grad {j}: {fd} vs {}", f.name, g[j]);
            let gp = f.grad(&(x + e));
            let gm = f.grad(&(x - e));
            for i in 0..3 {
                let fd = (gp[i] - gm[i]) / (2.0 * h);
                assert!(
                    (fd - hs[i][j]).abs() < 1e-6,
                    "{} hess {i}{j}: {fd} vs {}",
                    f.name,
                    hs[i][j]
                );
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let pts = [
            SpaceVec::new(0.3, -0.4, 0.2),
            SpaceVec::new(1.1, 0.5, -0.6),
            SpaceVec::new(-0.2, 1.7, 0.9),
            SpaceVec::new(0.05, 0.0, 2.1),
        ];
        for f in builtins() {
            for x in pts {
                fd_check(&f, x);
            }
        }
    }

    #[test]
    fn hessians_are_symmetric() {
        for f in builtins() {
            let h = f.hess(&SpaceVec::new(0.4, 0.7, -0.3));
            for i in 0..3 {
                for j in 0..3 {
                    assert!((h[i][j] - h[j][i]).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn flat_top_is_one_inside() {
        let f = builtin("flat").unwrap();
        assert_eq!(f.eval(&SpaceVec::new(1.0, 0.5, 0.2)), 1.0);
        assert_eq!(f.grad(&SpaceVec::new(1.0, 0.5, 0.2)), [0.0; 3]);
        assert_eq!(f.eval(&SpaceVec::new(3.1, 0.0, 0.0)), 0.0);
        let mid = f.eval(&SpaceVec::new(2.25, 0.0, 0.0));
        assert!((mid - 0.5).abs() < 1e-12);
    }

    #[test]
    fn support_and_tails() {
        let f = builtin("far-bump").unwrap();
        assert_eq!(f.support_radius(), 4.5);
        assert_eq!(f.eval(&SpaceVec::new(1.4, 0.0, 0.0)), 0.0);
        let g = builtin("gauss").unwrap();
        assert!(g.tail_bound() < 1e-14, "{}", g.tail_bound());
        assert_eq!(builtin("bump").unwrap().tail_bound(), 0.0);
        assert!(builtin("nope").is_none());
    }
}
