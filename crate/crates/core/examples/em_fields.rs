//! Electromagnetic pulsed beam of an electric dipole along `x3`: field
//! values and the Maxwell check `curl F = i d_t F`.

use pbwave::em::maxwell_ratio;
use pbwave::*;

fn show(v: [f64; 3]) -> String {
    format!("({:+.3e}, {:+.3e}, {:+.3e})", v[0], v[1], v[2])
}

fn main() -> Result<()> {
    let y = Event::new(SpaceVec::new(0.0, 0.0, 1.0), 2.0);
    let pol = Polarization::electric(2);
    for x3 in [1.0, 3.0, 6.0] {
        let x = Event::new(SpaceVec::new(0.5, 0.0, x3), x3);
        let f = em_field(&ComplexEvent::from_parts(x, y), &pol, KappaSign::Plus)?;
        let (e, b) = split_real_fields(&f);
        let s = maxwell_ratio(&x, &y, &pol, KappaSign::Plus, 1e-4)?;
        println!("x3 = t = {x3}: E = {}, B = {}, curl/(i d_t) = {s:.6}", show(e), show(b));
    }
    let z = ComplexEvent::from_parts(Event::new(SpaceVec::new(0.5, 0.0, 2.0), 1.0), y);
    let k = derivative_kernel(&z, KappaSign::Plus)?;
    println!("laplacian - d_t^2 of G+ from the kernel: {:.1e}", (k.laplacian() - k.dtt).norm());
    Ok(())
}
