use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use pbwave::signals::SignalKind;
use pbwave::*;

fn vec3(lim: f64) -> impl Strategy<Value = SpaceVec> {
    (-lim..lim, -lim..lim, -lim..lim).prop_map(|(a, b, c)| SpaceVec::new(a, b, c))
}

fn dilation() -> impl Strategy<Value = SpaceVec> {
    vec3(2.0).prop_filter("nonzero", |y| y.norm() > 0.05)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn rtilde_squares_to_complex_square(x in vec3(5.0), y in dilation()) {
        prop_assume!(x.dot(&y).abs() > 1e-9);
        let rt = complex_distance(&x, &y).unwrap();
        let expected = Complex64::new(x.norm_sq() - y.norm_sq(), 2.0 * x.dot(&y));
        prop_assert!((rt * rt - expected).norm() <= 1e-12 * (x.norm_sq() + y.norm_sq()));
    }

    #[test]
    fn rtilde_branch_bounds(x in vec3(5.0), y in dilation()) {
        prop_assume!(x.dot(&y).abs() > 1e-9);
        let rt = complex_distance(&x, &y).unwrap();
        let a = y.norm();
        prop_assert!(rt.re >= 0.0);
        prop_assert!(rt.im.abs() <= a * (1.0 + 1e-12));
        prop_assert!(rt.re <= x.norm() * (1.0 + 1e-12));
        prop_assert_eq!(rt.im >= 0.0, x.dot(&y) >= 0.0);
    }

    #[test]
    fn oblate_round_trip(x in vec3(5.0), y in dilation()) {
        prop_assume!(x.dot(&y).abs() > 1e-6);
        let c = to_oblate(&x, &y).unwrap();
        let back = from_oblate(&c, &y.normalized().unwrap()).unwrap();
        prop_assert!((back - x).norm() <= 1e-10 * (1.0 + x.norm() + y.norm()));
        let rt = complex_distance(&x, &y).unwrap();
        prop_assert!((c.rtilde() - rt).norm() <= 1e-10 * (1.0 + rt.norm()));
    }

    #[test]
    fn coordinate_surfaces_are_confocal(
        p in 0.05f64..4.0,
        q in -0.999f64..0.999,
        phi in 0.0f64..(2.0 * PI),
        a in 0.2f64..2.0,
    ) {
        let c = OblateCoords { p, q: q * a, phi, a };
        let x = from_oblate(&c, &SpaceVec::new(0.0, 0.0, 1.0)).unwrap();
        let rho2 = x.0[0] * x.0[0] + x.0[1] * x.0[1];
        let z2 = x.0[2] * x.0[2];
        let ellipsoid = rho2 / (p * p + a * a) + z2 / (p * p);
        let hyperboloid = rho2 / (a * a - c.q * c.q) - z2 / (c.q * c.q);
        prop_assert!((ellipsoid - 1.0).abs() <= 1e-10);
        prop_assert!((hyperboloid - 1.0).abs() <= 1e-8);
        prop_assert!((volume_jacobian(&c) - (p * p + c.q * c.q) / a).abs() <= 1e-14);
    }

    #[test]
    fn green_difference_is_euclidean_kernel(
        x in vec3(3.0),
        t in -3.0f64..3.0,
        yhat in dilation(),
        a in 0.05f64..2.0,
        excess in 1.001f64..4.0,
        future in any::<bool>(),
    ) {
        let y = yhat * (a / yhat.norm());
        let u = if future { a * excess } else { -a * excess };
        let z = ComplexEvent::from_parts(Event::new(x, t), Event::new(y, u));
        let Ok(bp) = BeamPoint::new(z) else { return Ok(()) };
        let diff = bp.green_pm(KappaSign::Plus).unwrap() - bp.green_pm(KappaSign::Minus).unwrap();
        let g4 = -1.0 / (4.0 * PI * PI * z.square());
        prop_assert!((diff - g4).norm() <= 1e-12 * g4.norm());
    }

    #[test]
    fn cauchy_wavelet_is_green_function(
        x in vec3(3.0),
        t in -3.0f64..3.0,
        y in dilation(),
        u in 2.5f64..4.0,
    ) {
        let z = ComplexEvent::from_parts(Event::new(x, t), Event::new(y, u));
        let Ok(bp) = BeamPoint::new(z) else { return Ok(()) };
        let g = make_signal(SignalKind::Cauchy).unwrap();
        for sign in [KappaSign::Plus, KappaSign::Minus] {
            let w = bp.wavelet(&g, sign).unwrap();
            let gpm = bp.green_pm(sign).unwrap();
            prop_assert!((w - gpm).norm() <= 1e-13 * gpm.norm());
        }
    }

    #[test]
    fn reduces_to_real_distance(x in vec3(5.0)) {
        let rt = complex_distance(&x, &SpaceVec::ZERO).unwrap();
        prop_assert_eq!(rt, Complex64::new(x.norm(), 0.0));
    }

    #[test]
    fn causal_classes_partition(y in dilation(), u in -4.0f64..4.0) {
        let class = classify_causal(&y, u, 1e-9);
        prop_assert_eq!(class.is_timelike(), u.abs() > y.norm() + 1e-9);
        let d = pulse_duration(0.3, u, y.norm(), KappaSign::Plus);
        prop_assert_eq!(d.timelike, u.abs() > y.norm());
    }
}
