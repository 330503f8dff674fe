//! Evaluates a scalar field slice through the library's grid writer and
//! prints the CSV head, as `pbwave eval scalar` does.

use pbwave::cli::config::{RunConfig, Settings};
use pbwave::cli::grid::{evaluate_grid, GridKind};

fn main() {
    let mut s = Settings::default();
    s.0.insert("grid".into(), "x1=-2:2:9,x3=-1:3:9".into());
    s.0.insert("signal".into(), "dcauchy:1".into());
    let cfg = RunConfig::resolve(&s).expect("valid settings");
    let grid = evaluate_grid(GridKind::Scalar, &cfg);
    let csv = grid.to_csv();
    for line in csv.lines().take(8) {
        println!("{line}");
    }
    let singular = grid.samples.iter().filter(|s| s.status == "singular").count();
    println!("... {} rows, {singular} on the branch disk", grid.samples.len());
}
