//! Far from the source `r~ -> r + i a cos(theta)` with error falling as `1/r`.

use std::f64::consts::PI;

use pbwave::probes::farzone_probe;
use pbwave::Result;

fn main() -> Result<()> {
    // exact on the axis
    let on_axis = farzone_probe(1.0, 0.0, &[50.0, 400.0])?;
    println!("theta = 0: errors {:?}", on_axis.errors);
    for theta in [PI / 8.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0] {
        let rep = farzone_probe(1.0, theta, &[50.0, 100.0, 200.0, 400.0])?;
        let errs: Vec<String> = rep.errors.iter().map(|e| format!("{e:.2e}")).collect();
        println!("theta = {:.3}: errors [{}], slope {:.4}", theta, errs.join(", "), rep.slope);
    }
    Ok(())
}
