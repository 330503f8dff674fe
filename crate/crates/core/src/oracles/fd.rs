//! Centered finite-difference operators on spacetime fields.

use num_complex::Complex64;

use crate::geometry::Event;

fn shifted(at: &Event, axis: usize, h: f64) -> Event {
    let mut e = *at;
    if axis < 3 {
        e.pos.0[axis] += h;
    } else {
        e.time += h;
    }
    e
}

/// `(Delta - d_t^2) field` with the 7-point spatial Laplacian and 3-point
/// time stencil; `O(h^2)`.
pub fn fd_dalembertian<F>(field: F, at: &Event, h: f64) -> Complex64
where
    F: Fn(&Event) -> Complex64,
{
    let center = field(at);
    let second = |axis| {
        (field(&shifted(at, axis, h)) - 2.0 * center + field(&shifted(at, axis, -h))) / (h * h)
    };
    second(0) + second(1) + second(2) - second(3)
}

/// Centered first derivative along axis `0..3` (space) or `3` (time).
pub fn fd_first<F>(field: F, at: &Event, axis: usize, h: f64) -> Complex64
where
    F: Fn(&Event) -> Complex64,
{
    (field(&shifted(at, axis, h)) - field(&shifted(at, axis, -h))) / (2.0 * h)
}

/// Centered second derivative `d_i d_j`, axes as in [`fd_first`].
pub fn fd_second<F>(field: F, at: &Event, i: usize, j: usize, h: f64) -> Complex64
where
    F: Fn(&Event) -> Complex64,
{
    if i == j {
        let c = field(at);
        return (field(&shifted(at, i, h)) - 2.0 * c + field(&shifted(at, i, -h))) / (h * h);
    }
    let pp = field(&shifted(&shifted(at, i, h), j, h));
    let pm = field(&shifted(&shifted(at, i, h), j, -h));
    let mp = field(&shifted(&shifted(at, i, -h), j, h));
    let mm = field(&shifted(&shifted(at, i, -h), j, -h));
    (pp - pm - mp + mm) / (4.0 * h * h)
}

/// Centered divergence of a spatial vector field.
pub fn fd_divergence<F>(field: F, at: &Event, h: f64) -> Complex64
where
    F: Fn(&Event) -> [Complex64; 3],
{
    (0..3)
        .map(|j| (field(&shifted(at, j, h))[j] - field(&shifted(at, j, -h))[j]) / (2.0 * h))
        .sum()
}

/// Centered curl of a spatial vector field.
pub fn fd_curl<F>(field: F, at: &Event, h: f64) -> [Complex64; 3]
where
    F: Fn(&Event) -> [Complex64; 3],
{
    let d = |axis: usize, comp: usize| {
        (field(&shifted(at, axis, h))[comp] - field(&shifted(at, axis, -h))[comp]) / (2.0 * h)
    };
    [d(1, 2) - d(2, 1), d(2, 0) - d(0, 2), d(0, 1) - d(1, 0)]
}

/// Centered time derivative of a spatial vector field.
pub fn fd_time_derivative<F>(field: F, at: &Event, h: f64) -> [Complex64; 3]
where
    F: Fn(&Event) -> [Complex64; 3],
{
    let up = field(&shifted(at, 3, h));
    let dn = field(&shifted(at, 3, -h));
    [0, 1, 2].map(|j| (up[j] - dn[j]) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SpaceVec;

    fn unit_event(pos: SpaceVec) -> Event {
        Event::new(pos, 0.0)
    }

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn polynomial_dalembertian() {
        // t^2 - x1^2: Delta = -2, d_t^2 = 2
        let f = |e: &Event| c(e.time * e.time - e.pos.0[0] * e.pos.0[0]);
        let at = Event::new(SpaceVec::new(0.3, -1.0, 2.0), 0.7);
        let v = fd_dalembertian(f, &at, 1e-2);
        assert!((v - c(-4.0)).norm() < 1e-9);
    }

    #[test]
    fn plane_wave_is_null() {
        let k = 1.3;
        let f = |e: &Event| Complex64::new(0.0, k * (e.pos.0[0] - e.time)).exp();
        let at = unit_event(SpaceVec::new(0.2, 0.1, -0.4));
        // spatial and temporal truncation errors cancel for omega = k
        let v = fd_dalembertian(f, &at, 1e-2);
        assert!(v.norm() < 1e-10, "{v}");
    }

    #[test]
    fn second_derivatives_of_polynomial() {
        let f = |e: &Event| c(e.pos.0[0] * e.pos.0[1] * e.time + e.pos.0[2].powi(2));
        let at = Event::new(SpaceVec::new(0.5, 2.0, 1.0), 3.0);
        assert!((fd_second(f, &at, 0, 1, 1e-3) - c(3.0)).norm() < 1e-8);
        assert!((fd_second(f, &at, 2, 2, 1e-3) - c(2.0)).norm() < 1e-6);
        assert!((fd_second(f, &at, 0, 3, 1e-3) - c(2.0)).norm() < 1e-8);
        assert!((fd_first(f, &at, 3, 1e-3) - c(1.0)).norm() < 1e-9);
    }

    #[test]
    fn curl_of_gradient_vanishes() {
        let g = |e: &Event| {
            let [x, y, z] = e.pos.0;
            [c(2.0 * x * y), c(x * x + z), c(y)]
        };
        let at = unit_event(SpaceVec::new(0.4, 0.3, -0.2));
        let curl = fd_curl(g, &at, 1e-3);
        assert!(curl.iter().all(|v| v.norm() < 1e-9));
        let div = fd_divergence(g, &at, 1e-3);
        assert!((div - c(2.0 * 0.3)).norm() < 1e-9);
    }
}
