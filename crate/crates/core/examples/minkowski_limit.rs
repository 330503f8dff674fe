//! Boundary values of `G+/-` on real spacetime: smearing against a time
//! bump and extrapolating in `eps` recovers the delta-shell propagators.

use pbwave::probes::{minkowski_probe, minkowski_reference};
use pbwave::*;

fn main() -> Result<()> {
    let x = SpaceVec::new(0.6, 0.0, 0.8);
    let spec = QuadratureSpec::new(1e-10, 1e-14)?;
    let ladder = [0.1, 0.05, 0.025];
    for (y, sign) in [
        (Event::new(SpaceVec::new(0.0, 0.0, 1.0), 2.0), KappaSign::Plus),
        (Event::new(SpaceVec::new(0.0, 0.0, 1.0), -2.0), KappaSign::Minus),
    ] {
        let rep = minkowski_probe(&x, &y, sign, &ladder, 1e-4, &spec)?;
        for (eps, v) in rep.probe.eps.iter().zip(&rep.probe.values) {
            println!("  eps = {eps}: {v:.8}");
        }
        println!(
            "u = {}: extrapolated {:.8}, expected {:.8}, relative error {:.2e}",
            y.time,
            rep.probe.extrapolated,
            minkowski_reference(rep.r, y.time),
            rep.relative_error
        );
    }
    Ok(())
}
