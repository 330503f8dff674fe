//! Complex distance, branch locus, oblate spheroidal coordinates and
//! causal classification.
//!
//! A complex spatial point is `x + i y` with real `x, y` in R^3. Its complex
//! distance `r~ = sqrt((x + i y)^2) = sqrt(r^2 - a^2 + 2i x.y)` uses the branch
//! `Re r~ >= 0`, which puts the cut on the disk `{r <= a, x.y = 0}` and the
//! branch points on its rim. Writing `r~ = p + i q` gives oblate spheroidal
//! coordinates `(p, q, phi)` adapted to the direction of `y`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{PbError, Result};

/// A real 3-vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpaceVec(pub [f64; 3]);

impl SpaceVec {
    pub const ZERO: SpaceVec = SpaceVec([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        SpaceVec([x, y, z])
    }

    pub fn unit(axis: usize) -> Self {
        let mut v = [0.0; 3];
        v[axis] = 1.0;
        SpaceVec(v)
    }

    pub fn dot(&self, other: &SpaceVec) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, o: &SpaceVec) -> SpaceVec {
        let a = &self.0;
        let b = &o.0;
        SpaceVec([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<SpaceVec> {
        let n = self.norm();
        (n > 0.0).then(|| *self * (1.0 / n))
    }

    pub fn to_complex(&self) -> [Complex64; 3] {
        self.0.map(|c| Complex64::new(c, 0.0))
    }
}

impl Add for SpaceVec {
    type Output = SpaceVec;
    fn add(self, o: SpaceVec) -> SpaceVec {
        SpaceVec([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for SpaceVec {
    type Output = SpaceVec;
    fn sub(self, o: SpaceVec) -> SpaceVec {
        SpaceVec([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Mul<f64> for SpaceVec {
    type Output = SpaceVec;
    fn mul(self, s: f64) -> SpaceVec {
        SpaceVec(self.0.map(|c| c * s))
    }
}

impl Neg for SpaceVec {
    type Output = SpaceVec;
    fn neg(self) -> SpaceVec {
        SpaceVec(self.0.map(|c| -c))
    }
}

/// A real spacetime event `(x, t)`. Used for both the real part `x = (x, it)`
/// and the imaginary part `y = (y, iu)` of a complex event.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Event {
    pub pos: SpaceVec,
    pub time: f64,
}

impl Event {
    pub const fn new(pos: SpaceVec, time: f64) -> Self {
        Event { pos, time }
    }

    /// Minkowski square `|x|^2 - t^2`.
    pub fn square(&self) -> f64 {
        self.pos.norm_sq() - self.time * self.time
    }
}

impl Add for Event {
    type Output = Event;
    fn add(self, o: Event) -> Event {
        Event::new(self.pos + o.pos, self.time + o.time)
    }
}

impl Sub for Event {
    type Output = Event;
    fn sub(self, o: Event) -> Event {
        Event::new(self.pos - o.pos, self.time - o.time)
    }
}

/// A point `z = (z_vec, i tau)` of complex spacetime, `z_vec = x + i y`,
/// `tau = t + i u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEvent {
    pub zvec: [Complex64; 3],
    pub tau: Complex64,
}

impl ComplexEvent {
    pub fn new(zvec: [Complex64; 3], tau: Complex64) -> Self {
        ComplexEvent { zvec, tau }
    }

    /// Assembles `z = x + i y` from its real and imaginary events.
    pub fn from_parts(x: Event, y: Event) -> Self {
        let zvec = [0, 1, 2].map(|j| Complex64::new(x.pos.0[j], y.pos.0[j]));
        ComplexEvent {
            zvec,
            tau: Complex64::new(x.time, y.time),
        }
    }

    pub fn real_part(&self) -> Event {
        Event::new(SpaceVec(self.zvec.map(|c| c.re)), self.tau.re)
    }

    pub fn imag_part(&self) -> Event {
        Event::new(SpaceVec(self.zvec.map(|c| c.im)), self.tau.im)
    }

    /// `z_vec . z_vec`, computed from real parts as `r^2 - a^2 + 2i x.y`.
    pub fn zvec_square(&self) -> Complex64 {
        let x = self.real_part().pos;
        let y = self.imag_part().pos;
        Complex64::new(x.norm_sq() - y.norm_sq(), 2.0 * x.dot(&y))
    }

    /// `z^2 = z_vec^2 - tau^2`.
    pub fn square(&self) -> Complex64 {
        self.zvec_square() - self.tau * self.tau
    }
}

/// Side of the branch disk, by the sign of `x . y^` as the disk is approached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

/// Where a point sits relative to the branch structure of `r~`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchLocus {
    Regular,
    OnBranchSphere,
    OnDisk(Side),
}

/// Causal character of the imaginary part `y = (y, iu)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalClass {
    TimelikeFuture,
    TimelikePast,
    Spacelike,
    Lightlike,
}

impl CausalClass {
    pub fn is_timelike(self) -> bool {
        matches!(self, CausalClass::TimelikeFuture | CausalClass::TimelikePast)
    }

    pub fn label(self) -> &'static str {
        match self {
            CausalClass::TimelikeFuture => "timelike-future",
            CausalClass::TimelikePast => "timelike-past",
            CausalClass::Spacelike => "spacelike",
            CausalClass::Lightlike => "lightlike",
        }
    }
}

/// Oblate spheroidal coordinates with `r~ = p + i q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OblateCoords {
    pub p: f64,
    pub q: f64,
    pub phi: f64,
    pub a: f64,
}

impl OblateCoords {
    pub fn rtilde(&self) -> Complex64 {
        Complex64::new(self.p, self.q)
    }

    /// Cylindrical radius about the `y` axis.
    pub fn rho(&self) -> f64 {
        let a = self.a;
        ((a * a + self.p * self.p) * (a * a - self.q * self.q)).max(0.0).sqrt() / a
    }

    /// Coordinate along the `y` axis.
    pub fn axial(&self) -> f64 {
        self.p * self.q / self.a
    }
}

/// Orthonormal frame `(e1, e2, axis)` with `axis` along `y`.
///
/// The frame is the image of the standard basis under the minimal rotation
/// taking `e3` to the axis, so `y` along `e3` yields the standard basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub e1: SpaceVec,
    pub e2: SpaceVec,
    pub axis: SpaceVec,
}

impl Frame {
    pub fn along(y: &SpaceVec) -> Result<Frame> {
        let axis = y.normalized().ok_or(PbError::DegenerateDilation)?;
        let c = axis.0[2];
        if c <= -1.0 + 1e-15 {
            return Ok(Frame {
                e1: SpaceVec::unit(0),
                e2: -SpaceVec::unit(1),
                axis,
            });
        }
        // Rodrigues: R = I + [v]x + [v]x^2 / (1 + c), v = e3 x axis.
        let v = SpaceVec::unit(2).cross(&axis);
        let k = 1.0 / (1.0 + c);
        let rot = |w: SpaceVec| {
            let vw = v.cross(&w);
            w + vw + v.cross(&vw) * k
        };
        Ok(Frame {
            e1: rot(SpaceVec::unit(0)),
            e2: rot(SpaceVec::unit(1)),
            axis,
        })
    }

    /// Components `(x.e1, x.e2, x.axis)`.
    pub fn local(&self, x: &SpaceVec) -> [f64; 3] {
        [x.dot(&self.e1), x.dot(&self.e2), x.dot(&self.axis)]
    }

    pub fn global(&self, local: [f64; 3]) -> SpaceVec {
        self.e1 * local[0] + self.e2 * local[1] + self.axis * local[2]
    }
}

/// Default scale-aware classification tolerance `1e-9 * max(1, a)`.
pub fn default_tolerance(a: f64) -> f64 {
    1e-9 * a.max(1.0)
}

/// Complex distance `r~(x + i y)` on the branch `Re r~ >= 0`.
///
/// For `y = 0` the real distance `|x|` is returned. Points on the open
/// branch disk have two boundary values; use [`complex_distance_sided`].
pub fn complex_distance(x: &SpaceVec, y: &SpaceVec) -> Result<Complex64> {
    let a2 = y.norm_sq();
    if a2 == 0.0 {
        return Ok(Complex64::new(x.norm(), 0.0));
    }
    let r2 = x.norm_sq();
    let xy = x.dot(y);
    if xy == 0.0 && r2 < a2 {
        return Err(PbError::OnCutAmbiguous);
    }
    Ok(principal_sqrt(r2 - a2, 2.0 * xy))
}

/// `sqrt(re + i im)` with `Re >= 0`, without the polar form, so that both
/// parts keep full relative accuracy.
fn principal_sqrt(re: f64, im: f64) -> Complex64 {
    let s = ((re.abs() + re.hypot(im)) / 2.0).sqrt();
    if s == 0.0 {
        Complex64::new(0.0, 0.0)
    } else if re >= 0.0 {
        Complex64::new(s, im / (2.0 * s))
    } else {
        Complex64::new(im.abs() / (2.0 * s), s.copysign(im))
    }
}

/// Boundary value of `r~` on the closed disk, approached from `x.y^ -> 0+`
/// (`Side::Plus`) or `0-`. Equals `+/- i sqrt(a^2 - r^2)`.
pub fn complex_distance_sided(x: &SpaceVec, y: &SpaceVec, side: Side) -> Result<Complex64> {
    let a = y.norm();
    if a == 0.0 {
        return Err(PbError::DegenerateDilation);
    }
    let r = x.norm();
    let tol = default_tolerance(a);
    if r > a + tol || (x.dot(y) / a).abs() > tol {
        return Err(PbError::NotOnCut);
    }
    let q = (a * a - r * r).max(0.0).sqrt();
    Ok(Complex64::new(0.0, side.sign() * q))
}

fn oblate_from_local(local: [f64; 3], a: f64, side: Option<Side>) -> Result<OblateCoords> {
    let [u1, u2, x3] = local;
    let rho2 = u1 * u1 + u2 * u2;
    let d = rho2 + x3 * x3 - a * a;
    let s = d.hypot(2.0 * a * x3);
    let (p, q) = if d >= 0.0 {
        let p = ((d + s) / 2.0).sqrt();
        if p == 0.0 {
            (0.0, 0.0)
        } else {
            (p, a * x3 / p)
        }
    } else {
        let qa = ((s - d) / 2.0).sqrt();
        if x3 != 0.0 {
            let q = qa.copysign(x3);
            (a * x3 / q, q)
        } else {
            match side {
                Some(side) => (0.0, side.sign() * qa),
                None => return Err(PbError::OnCutAmbiguous),
            }
        }
    };
    let phi = if rho2 == 0.0 {
        0.0
    } else {
        let ang = u2.atan2(u1);
        if ang < 0.0 {
            ang + 2.0 * PI
        } else {
            ang
        }
    };
    Ok(OblateCoords {
        p: p.max(0.0),
        q: q.clamp(-a, a),
        phi,
        a,
    })
}

/// Oblate spheroidal coordinates of `x` relative to the dilation `y`.
pub fn to_oblate(x: &SpaceVec, y: &SpaceVec) -> Result<OblateCoords> {
    let frame = Frame::along(y)?;
    oblate_from_local(frame.local(x), y.norm(), None)
}

/// As [`to_oblate`], resolving points on the open disk with the given side.
pub fn to_oblate_sided(x: &SpaceVec, y: &SpaceVec, side: Side) -> Result<OblateCoords> {
    let frame = Frame::along(y)?;
    oblate_from_local(frame.local(x), y.norm(), Some(side))
}

/// Cartesian point with oblate coordinates `c` about the unit axis `yhat`.
pub fn from_oblate(c: &OblateCoords, yhat: &SpaceVec) -> Result<SpaceVec> {
    let frame = Frame::along(yhat)?;
    Ok(from_oblate_in(c, &frame))
}

pub(crate) fn from_oblate_in(c: &OblateCoords, frame: &Frame) -> SpaceVec {
    let rho = c.rho();
    let (s, co) = c.phi.sin_cos();
    frame.global([rho * co, rho * s, c.axial()])
}

/// Volume element `(p^2 + q^2) / a` of `dp dq dphi`.
pub fn volume_jacobian(c: &OblateCoords) -> f64 {
    (c.p * c.p + c.q * c.q) / c.a
}

pub fn classify_branch_locus(x: &SpaceVec, y: &SpaceVec, tol: f64) -> BranchLocus {
    let a = y.norm();
    let r = x.norm();
    let axial = match y.normalized() {
        Some(yhat) => x.dot(&yhat),
        None => r,
    };
    if axial.abs() > tol {
        return BranchLocus::Regular;
    }
    if (r - a).abs() <= tol {
        BranchLocus::OnBranchSphere
    } else if r < a {
        BranchLocus::OnDisk(if axial < 0.0 { Side::Minus } else { Side::Plus })
    } else {
        BranchLocus::Regular
    }
}

pub fn classify_causal(y: &SpaceVec, u: f64, tol: f64) -> CausalClass {
    let a = y.norm();
    if (u.abs() - a).abs() <= tol {
        CausalClass::Lightlike
    } else if u > a {
        CausalClass::TimelikeFuture
    } else if -u > a {
        CausalClass::TimelikePast
    } else {
        CausalClass::Spacelike
    }
}

/// Far-zone approximation `r + i a cos(theta)`.
pub fn farzone_complex_distance(r: f64, theta: f64, a: f64) -> Complex64 {
    Complex64::new(r, a * theta.cos())
}
