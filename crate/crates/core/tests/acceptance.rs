//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pbwave::oracles::{
    action_bruteforce_spacetime, action_bruteforce_static, convergence_order, fd_divergence, fd_first, fd_second,
    log_log_slope,
};
use pbwave::probes::{farzone_probe, maxwell_sign_probe, minkowski_probe, sample_points, waveop_probe, BeamField};
use pbwave::signals::SignalKind;
use pbwave::*;

const ACCEPTANCE_SET: [&str; 10] = [
    "bump",
    "bump-offset",
    "x1-bump",
    "x3-bump",
    "affine-bump",
    "gauss",
    "gauss-offset",
    "x3-gauss",
    "far-bump",
    "upper-bump",
];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn unit(rng: &mut ChaCha8Rng) -> SpaceVec {
    loop {
        let v = SpaceVec::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v * (1.0 / n);
        }
    }
}

fn partial_fractions() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut evaluated = 0;
    while evaluated < 100_000 {
        let x = SpaceVec::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let a = rng.gen_range(0.05..2.0);
        let y = unit(&mut rng) * a;
        let u = rng.gen_range(a * 1.001..3.0 * a + 1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let t = rng.gen_range(-3.0..3.0);
        let z = ComplexEvent::from_parts(Event::new(x, t), Event::new(y, u));
        let Ok(bp) = BeamPoint::new(z) else { continue };
        let diff = bp.green_pm(KappaSign::Plus).unwrap() - bp.green_pm(KappaSign::Minus).unwrap();
        let g4 = -1.0 / (4.0 * PI * PI * z.square());
        worst = worst.max((diff - g4).norm() / g4.norm());
        evaluated += 1;
    }
    verdict(worst <= 1e-12, format!("max rel err {worst:.2e} over {evaluated} tube points"))
}

fn wave_equation() -> Verdict {
    let points = sample_points(1000, 2024);
    let fields = [
        BeamField::Green(KappaSign::Plus),
        BeamField::Green(KappaSign::Minus),
        BeamField::Wavelet(make_signal(SignalKind::Cauchy).unwrap(), KappaSign::Plus),
        BeamField::Wavelet(make_signal(SignalKind::ConstNegOne).unwrap(), KappaSign::Plus),
        BeamField::Wavelet(make_signal(SignalKind::CauchyDeriv(1)).unwrap(), KappaSign::Minus),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for field in &fields {
        let s = waveop_probe(field, &points, 2.0).unwrap();
        pass &= s.pass && s.min_order >= 1.9;
        parts.push(format!("{} min order {:.3}", s.field, s.min_order));
    }
    verdict(pass, parts.join("; "))
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn triple_agreement() -> Verdict {
    let y = SpaceVec::new(0.0, 0.0, 1.0);
    let tau = c(0.3, 2.0);
    let cauchy = make_signal(SignalKind::Cauchy).unwrap();
    let minus_one = make_signal(SignalKind::ConstNegOne).unwrap();
    let spec = QuadratureSpec::new(1e-10, 1e-13).unwrap();
    let brute = QuadratureSpec::new(1e-9, 1e-11).unwrap();
    let eps = 1e-3;
    let mut failures = Vec::new();
    let mut worst = [0.0f64; 3];
    for name in ACCEPTANCE_SET {
        let f = builtin(name).unwrap();
        for (label, g, tau, tol) in [("static", &minus_one, c(0.0, 0.0), 1e-5), ("cauchy", &cauchy, tau, 1e-4)] {
            let limit = action_limit(&f, &y, tau, g, &spec).unwrap();
            let reg = action_regularized(&f, &y, tau, g, KappaSign::Plus, eps, &spec).unwrap();
            let bf = if label == "static" {
                action_bruteforce_static(&f, &y, &brute).unwrap()
            } else {
                action_bruteforce_spacetime(&f, &y, tau, g, KappaSign::Plus, &brute).unwrap()
            };
            if limit.norm() < 1e-12 {
                let d = (reg - limit).norm().max((bf - limit).norm());
                worst[2] = worst[2].max(d);
                if d > 1e-10 {
                    failures.push(format!("{name}/{label} abs {d:.1e}"));
                }
                continue;
            }
            let (dr, db) = (rel(reg, limit), rel(bf, limit));
            worst[0] = worst[0].max(dr);
            worst[1] = worst[1].max(db);
            if dr > 1e-3 {
                failures.push(format!("{name}/{label} regularized {dr:.1e}"));
            }
            if db > tol {
                failures.push(format!("{name}/{label} brute {db:.1e}"));
            }
        }
    }
    let mut detail = format!(
        "worst rel: regularized {:.1e}, brute {:.1e}; worst abs (null entries) {:.1e}",
        worst[0], worst[1], worst[2]
    );
    if !failures.is_empty() {
        detail.push_str(&format!("; failing: {}", failures.join(", ")));
    }
    verdict(failures.is_empty(), detail)
}

fn disk_moments() -> Verdict {
    let y = SpaceVec::new(0.0, 0.0, 1.0);
    let spec = QuadratureSpec::new(1e-11, 1e-13).unwrap();
    let brute = QuadratureSpec::new(1e-9, 1e-11).unwrap();
    let moment = |name: &str| action_static_delta(&builtin(name).unwrap(), &y, &spec).unwrap();
    let mass = moment("flat");
    let m3 = moment("x3-flat");
    let m1 = moment("x1-flat");
    let bf_mass = action_bruteforce_static(&builtin("flat").unwrap(), &y, &brute).unwrap();
    let bf_m3 = action_bruteforce_static(&builtin("x3-flat").unwrap(), &y, &brute).unwrap();
    let pass = (mass - 1.0).norm() <= 1e-8
        && (m3 - c(0.0, -1.0)).norm() <= 1e-6
        && m1.norm() <= 1e-10
        && (bf_mass - 1.0).norm() <= 1e-8
        && (bf_m3 - c(0.0, -1.0)).norm() <= 1e-6;
    verdict(
        pass,
        format!(
            "mass {:.1e} off, x3 {:.1e} off, x1 {:.1e}; brute mass {:.1e} off, brute x3 {:.1e} off",
            (mass - 1.0).norm(),
            (m3 - c(0.0, -1.0)).norm(),
            m1.norm(),
            (bf_mass - 1.0).norm(),
            (bf_m3 - c(0.0, -1.0)).norm()
        ),
    )
}

fn degenerate_limit() -> Verdict {
    let tau = c(0.3, 2.0);
    let g = make_signal(SignalKind::Cauchy).unwrap();
    let spec = QuadratureSpec::new(1e-12, 1e-16).unwrap();
    let scales = [1e-1, 1e-2, 1e-3];
    let mut pass = true;
    let mut parts = Vec::new();
    for name in ["bump", "bump-offset", "x3-bump"] {
        let f = builtin(name).unwrap();
        let point = -g.eval(tau).unwrap() * f.eval(&SpaceVec::ZERO);
        let gaps: Vec<f64> = scales
            .iter()
            .map(|&a| (action_limit(&f, &SpaceVec::new(0.0, 0.0, a), tau, &g, &spec).unwrap() - point).norm())
            .collect();
        let logs: Vec<(f64, f64)> = scales.iter().zip(&gaps).map(|(a, d)| (a.ln(), d.ln())).collect();
        let slope = log_log_slope(&logs);
        let linear = gaps.windows(2).all(|w| w[1] <= w[0] * 0.1 * 1.05);
        pass &= linear && slope >= 0.95;
        parts.push(format!("{name} slope {slope:.2}"));
    }
    verdict(pass, parts.join("; "))
}

fn minkowski_limit() -> Verdict {
    let x = SpaceVec::new(0.6, 0.0, 0.8);
    let spec = QuadratureSpec::new(1e-10, 1e-14).unwrap();
    let ladder = [0.1, 0.05, 0.025];
    let mut pass = true;
    let mut worst: f64 = 0.0;
    for (y, sign) in [
        (Event::new(SpaceVec::new(0.0, 0.0, 1.0), 2.0), KappaSign::Plus),
        (Event::new(SpaceVec::new(0.3, 0.0, 0.0), -1.0), KappaSign::Minus),
    ] {
        let rep = minkowski_probe(&x, &y, sign, &ladder, 1e-4, &spec).unwrap();
        pass &= rep.pass;
        worst = worst.max(rep.relative_error);
    }
    verdict(pass, format!("worst relative error {worst:.2e} at r = 1"))
}

fn far_zone() -> Verdict {
    let rep = farzone_probe(1.0, PI / 4.0, &[50.0, 100.0, 200.0, 400.0]).unwrap();
    verdict(rep.pass, format!("slope {:.4}", rep.slope))
}

const KERNEL_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

fn kernel_errors(pt: &pbwave::probes::ProbePoint, sign: KappaSign) -> Vec<f64> {
    let y = pt.y;
    let g = |e: &Event| green_pm(&ComplexEvent::from_parts(*e, y), sign).unwrap();
    let k = derivative_kernel(&ComplexEvent::from_parts(pt.x, y), sign).unwrap();
    let l = pt.scale;
    let norm = k.value.norm();
    KERNEL_STEPS
        .iter()
        .map(|s| {
            let h = s * l;
            let mut err = 0.0;
            for j in 0..3 {
                err += (fd_first(g, &pt.x, j, h) - k.grad[j]).norm() * l;
                err += (fd_second(g, &pt.x, j, 3, h) - k.dt_grad[j]).norm() * l * l;
                for m in 0..3 {
                    err += (fd_second(g, &pt.x, j, m, h) - k.hess[j][m]).norm() * l * l;
                }
            }
            err += (fd_first(g, &pt.x, 3, h) - k.dt).norm() * l;
            err += (fd_second(g, &pt.x, 3, 3, h) - k.dtt).norm() * l * l;
            err / norm
        })
        .collect()
}

fn em_validity() -> Verdict {
    let points = sample_points(1000, 77);
    let mut min_kernel = f64::INFINITY;
    let mut kernel_pass = true;
    for (i, pt) in points.iter().enumerate() {
        let sign = if i % 2 == 0 { KappaSign::Plus } else { KappaSign::Minus };
        let rep = convergence_order(&KERNEL_STEPS, &kernel_errors(pt, sign), 2.0).unwrap();
        kernel_pass &= rep.pass;
        min_kernel = min_kernel.min(rep.order);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(78);
    let mut min_div = f64::INFINITY;
    let mut div_pass = true;
    let mut div_floor = 0;
    for (i, pt) in points.iter().take(100).enumerate() {
        let sign = if i % 2 == 0 { KappaSign::Plus } else { KappaSign::Minus };
        let pol = Polarization([0; 3].map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
        let y = pt.y;
        let field = |e: &Event| em_field(&ComplexEvent::from_parts(*e, y), &pol, sign).unwrap().f;
        let f0: f64 = field(&pt.x).iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let res: Vec<f64> = KERNEL_STEPS
            .iter()
            .map(|s| fd_divergence(field, &pt.x, s * pt.scale).norm() * pt.scale / f0)
            .collect();
        if res.iter().zip(KERNEL_STEPS).all(|(r, s)| *r <= 1e3 * f64::EPSILON / s) {
            div_floor += 1;
            continue;
        }
        let rep = convergence_order(&KERNEL_STEPS, &res, 2.0).unwrap();
        div_pass &= rep.pass;
        min_div = min_div.min(rep.order);
    }

    let sign_rep = maxwell_sign_probe(&sample_points(100, 79), 80).unwrap();
    verdict(
        kernel_pass && div_pass && sign_rep.pass,
        format!(
            "kernel min order {min_kernel:.3}; divergence min order {min_div:.3} ({div_floor} at floor); Maxwell sign {:?}, max deviation {:.1e}",
            sign_rep.sign, sign_rep.max_deviation
        ),
    )
}

fn peak_and_duration() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let dt = 1e-3;
    let mut worst_peak: f64 = 0.0;
    let mut worst_width: f64 = 0.0;
    let mut pass = true;
    for _ in 0..100 {
        let a = rng.gen_range(0.5..1.5);
        let y = unit(&mut rng) * a;
        let u = rng.gen_range(a + 0.1..3.0);
        let x = unit(&mut rng) * rng.gen_range(1.0..4.0);
        let mag = |xs: &SpaceVec, t: f64| {
            green_pm(&ComplexEvent::from_parts(Event::new(*xs, t), Event::new(y, u)), KappaSign::Plus)
                .unwrap()
                .norm()
        };
        let (mut best_t, mut best) = (0.0, 0.0);
        let n = (16.0 / dt) as i64;
        for k in 0..=n {
            let t = -8.0 + k as f64 * dt;
            let m = mag(&x, t);
            if m > best {
                best = m;
                best_t = t;
            }
        }
        let p = peak_time(&x, &y, KappaSign::Plus).unwrap();
        let off = (best_t - p).abs();
        worst_peak = worst_peak.max(off);
        pass &= off <= 0.5 * dt + 1e-12;

        // far along x, |G+|^2 in t is a Lorentzian of half width |u - q| -> |u - a cos(theta)|
        let r = 1e4;
        let far = x * (r / x.norm());
        let theta = (x.dot(&y) / (x.norm() * a)).clamp(-1.0, 1.0).acos();
        let tp = peak_time(&far, &y, KappaSign::Plus).unwrap();
        let half = 0.5 * mag(&far, tp).powi(2);
        let (mut lo, mut hi) = (tp, tp + 10.0 * u);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mag(&far, mid).powi(2) > half {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let width = 0.5 * (lo + hi) - tp;
        let reported = pulse_duration(theta, u, a, KappaSign::Plus).duration;
        let gap = (width - reported).abs();
        worst_width = worst_width.max(gap);
        pass &= gap <= 2.0 * a * a / r + 1e-9 && (reported - (u - a * theta.cos()).abs()).abs() <= 1e-15;
    }
    verdict(
        pass,
        format!("peak offset {worst_peak:.1e} (grid {dt:.0e}); duration gap {worst_width:.1e}"),
    )
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let outs: Vec<_> = (0..2).map(|k| dir.path().join(format!("run{k}.csv"))).collect();
    for out in &outs {
        let code = pbwave::cli::run([
            "pbwave",
            "eval",
            "scalar",
            "--grid",
            "x1=-2:2:41,x3=-1:3:41",
            "--signal",
            "dcauchy:2",
            "--out",
            out.to_str().unwrap(),
        ]);
        if code != 0 {
            return verdict(false, format!("eval scalar exited with {code}"));
        }
    }
    let a = std::fs::read(&outs[0]).unwrap();
    let b = std::fs::read(&outs[1]).unwrap();
    verdict(a == b && !a.is_empty(), format!("{} bytes per run", a.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("partial fractions G+ - G- = G4", partial_fractions),
        ("wave-equation residual order", wave_equation),
        ("source-action triple agreement", triple_agreement),
        ("disk source moments", disk_moments),
        ("degenerate limit", degenerate_limit),
        ("Minkowskian boundary value", minkowski_limit),
        ("far-zone complex distance", far_zone),
        ("EM validity", em_validity),
        ("peak time and duration", peak_and_duration),
        ("determinism of eval scalar", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        let status = if v.pass { "PASS" } else { "FAIL" };
        if !v.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status} {name}: {} [{:.1} s]",
            k + 1,
            v.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
