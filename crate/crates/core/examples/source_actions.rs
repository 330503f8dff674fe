//! The source of a pulsed beam acting on built-in test functions: limit
//! form, regularized ladder, and the brute-force integral of `box W`.

use num_complex::Complex64;
use pbwave::oracles::action_bruteforce_spacetime;
use pbwave::signals::SignalKind;
use pbwave::*;

fn main() -> Result<()> {
    let y = SpaceVec::new(0.0, 0.0, 1.0);
    let tau = Complex64::new(0.3, 2.0);
    let g = make_signal(SignalKind::Cauchy)?;
    let spec = QuadratureSpec::new(1e-10, 1e-13)?;
    let brute = QuadratureSpec::new(1e-9, 1e-11)?;
    for name in ["bump-offset", "x3-bump", "gauss"] {
        let f = builtin(name).expect("built-in");
        let limit = action_limit(&f, &y, tau, &g, &spec)?;
        let delta = action_spacetime_delta(&f, &y, tau, &spec)?;
        let bf = action_bruteforce_spacetime(&f, &y, tau, &g, KappaSign::Plus, &brute)?;
        println!("{name}: limit {limit:.10}");
        println!("  cylindrical form differs by {:.1e}", (delta - limit).norm());
        println!("  brute force differs by {:.1e}", (bf - limit).norm());
        for eps in [1e-1, 1e-2, 1e-3] {
            let reg = action_regularized(&f, &y, tau, &g, KappaSign::Plus, eps, &spec)?;
            println!("  eps = {eps:.0e}: regularized differs by {:.3e}", (reg - limit).norm());
        }
    }

    let layers = unsmeared_layers(&y, tau, &g, KappaSign::Plus, 1e-2)?;
    println!(
        "pole weights at eps = 0.01: north {:.6}, south {:.6}",
        layers.pole_plus, layers.pole_minus
    );
    Ok(())
}
