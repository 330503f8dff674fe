//! Electromagnetic pulsed beams: Hertz potentials `Z = p G+/-`, the
//! self-dual field `F = curl curl Z - d_{it} curl Z = E + i B` and the dyadic
//! mother beams.
//!
//! All derivatives of `G+/-` are analytic, built from `d_j r~ = z_j / r~`.
//! `d_{it}` is taken as `-i d_t`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::beams::{BeamPoint, KappaSign};
use crate::error::{PbError, Result};
use crate::geometry::{ComplexEvent, Event};
use crate::oracles::fd::{fd_curl, fd_time_derivative};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub type CVec3 = [Complex64; 3];
pub type CMat3 = [[Complex64; 3]; 3];

/// Complex dipole moment `p = p_e + i p_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Polarization(pub CVec3);

impl Polarization {
    pub fn new(p: CVec3) -> Result<Self> {
        if p.iter().all(|c| c.is_finite()) {
            Ok(Polarization(p))
        } else {
            Err(PbError::InvalidArgument("polarization must be finite".into()))
        }
    }

    /// From real electric and magnetic moments.
    pub fn from_moments(electric: [f64; 3], magnetic: [f64; 3]) -> Self {
        Polarization([0, 1, 2].map(|j| Complex64::new(electric[j], magnetic[j])))
    }

    /// Unit electric dipole along `axis`.
    pub fn electric(axis: usize) -> Self {
        let mut p = [ZERO; 3];
        p[axis] = Complex64::new(1.0, 0.0);
        Polarization(p)
    }

    pub fn electric_moment(&self) -> [f64; 3] {
        self.0.map(|c| c.re)
    }

    pub fn magnetic_moment(&self) -> [f64; 3] {
        self.0.map(|c| c.im)
    }
}

/// `G+/-` with all first and second space-time derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeKernel {
    pub value: Complex64,
    pub grad: CVec3,
    pub hess: CMat3,
    pub dt: Complex64,
    pub dtt: Complex64,
    pub dt_grad: CVec3,
}

impl DerivativeKernel {
    pub fn at(point: &BeamPoint, sign: KappaSign) -> Result<Self> {
        let value = point.green_pm(sign)?;
        let rt = point.rtilde;
        let s = sign.sign();
        let d = point.tau() - s * rt;
        let c = 1.0 / (8.0 * PI * PI);
        let (rt2, d2) = (rt * rt, d * d);
        let g_r = c * (-1.0 / (rt2 * d) + s / (rt * d2));
        let g_t = -c / (rt * d2);
        let g_tt = 2.0 * c / (rt * d2 * d);
        let g_rt = c * (1.0 / (rt2 * d2) - 2.0 * s / (rt * d2 * d));
        let g_rr = c * (2.0 / (rt2 * rt * d) - 2.0 * s / (rt2 * d2) + 2.0 / (rt * d2 * d));
        let z = point.z.zvec;
        let n = z.map(|zj| zj / rt);
        let grad = n.map(|nj| g_r * nj);
        let dt_grad = n.map(|nj| g_rt * nj);
        let mut hess = [[ZERO; 3]; 3];
        for j in 0..3 {
            for k in 0..3 {
                let delta = if j == k { 1.0 } else { 0.0 };
                hess[j][k] = g_rr * n[j] * n[k] + g_r * (delta - n[j] * n[k]) / rt;
            }
        }
        Ok(DerivativeKernel {
            value,
            grad,
            hess,
            dt: g_t,
            dtt: g_tt,
            dt_grad,
        })
    }

    /// Hessian trace; equals `dtt` off the singular set.
    pub fn laplacian(&self) -> Complex64 {
        self.hess[0][0] + self.hess[1][1] + self.hess[2][2]
    }

    /// `G_jl = d_j d_l G - delta_jl Delta G + i eps_jkl d_t d_k G`.
    pub fn dyadic(&self) -> CMat3 {
        let lap = self.laplacian();
        let mut m = [[ZERO; 3]; 3];
        for j in 0..3 {
            for l in 0..3 {
                let mut v = self.hess[j][l];
                if j == l {
                    v -= lap;
                }
                for k in 0..3 {
                    v += I * levi_civita(j, k, l) * self.dt_grad[k];
                }
                m[j][l] = v;
            }
        }
        m
    }
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

pub fn derivative_kernel(z: &ComplexEvent, sign: KappaSign) -> Result<DerivativeKernel> {
    DerivativeKernel::at(&BeamPoint::new(*z)?, sign)
}

/// Self-dual field `F = E + i B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EMField {
    pub f: CVec3,
}

impl EMField {
    pub fn e(&self) -> [f64; 3] {
        self.f.map(|c| c.re)
    }

    pub fn b(&self) -> [f64; 3] {
        self.f.map(|c| c.im)
    }
}

/// `Z+/- = p G+/-`.
pub fn hertz_potential(z: &ComplexEvent, p: &Polarization, sign: KappaSign) -> Result<CVec3> {
    let g = crate::beams::green_pm(z, sign)?;
    Ok(p.0.map(|pk| pk * g))
}

/// Contracts a dyadic with a polarization.
pub fn apply_dyadic(m: &CMat3, p: &Polarization) -> CVec3 {
    [0, 1, 2].map(|j| (0..3).map(|l| m[j][l] * p.0[l]).sum())
}

pub fn dyadic_mother(z: &ComplexEvent, sign: KappaSign) -> Result<CMat3> {
    Ok(derivative_kernel(z, sign)?.dyadic())
}

pub fn em_field(z: &ComplexEvent, p: &Polarization, sign: KappaSign) -> Result<EMField> {
    Ok(EMField {
        f: apply_dyadic(&dyadic_mother(z, sign)?, p),
    })
}

pub fn split_real_fields(f: &EMField) -> ([f64; 3], [f64; 3]) {
    (f.e(), f.b())
}

/// The field as a function of the real event `x`, with the imaginary part
/// `y` of the source point held fixed.
pub fn field_at(y: Event, p: Polarization, sign: KappaSign) -> impl Fn(&Event) -> Result<EMField> {
    move |x: &Event| em_field(&ComplexEvent::from_parts(*x, y), &p, sign)
}

/// Least-squares ratio `s` in `curl F = s i d_t F`, both sides by centered
/// differences of step `h`. Self-dual evolution makes `s` a real sign.
pub fn maxwell_ratio(x: &Event, y: &Event, p: &Polarization, sign: KappaSign, h: f64) -> Result<Complex64> {
    let field = field_at(*y, *p, sign);
    // probe the stencil first so errors surface instead of being zero-filled
    for axis in 0..4 {
        for s in [-1.0, 1.0] {
            let mut e = *x;
            if axis < 3 {
                e.pos.0[axis] += s * h;
            } else {
                e.time += s * h;
            }
            field(&e)?;
        }
    }
    let eval = |e: &Event| field(e).map(|f| f.f).unwrap_or([ZERO; 3]);
    let curl = fd_curl(eval, x, h);
    let dt = fd_time_derivative(eval, x, h).map(|c| I * c);
    let num: Complex64 = (0..3).map(|j| dt[j].conj() * curl[j]).sum();
    let den: f64 = dt.iter().map(|c| c.norm_sqr()).sum();
    if den == 0.0 {
        return Err(PbError::SingularDenominator);
    }
    Ok(num / den)
}
