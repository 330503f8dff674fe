//! Pulsed beams `G+/-` and a Cauchy-derivative wavelet along the beam axis,
//! with the predicted peak time and pulse duration.

use pbwave::signals::SignalKind;
use pbwave::*;

fn main() -> Result<()> {
    let y = Event::new(SpaceVec::new(0.0, 0.0, 1.0), 2.0);
    let g = make_signal(SignalKind::CauchyDeriv(2))?;
    let x = SpaceVec::new(0.0, 0.0, 5.0);
    let p = peak_time(&x, &y.pos, KappaSign::Plus)?;
    println!("peak of |G+| at x3 = 5 expected at t = {p:.4}");
    println!("{:>6} {:>12} {:>12} {:>12}", "t", "|G+|", "|G-|", "|W|");
    for k in -4..=8 {
        let t = k as f64;
        let bp = BeamPoint::new(ComplexEvent::from_parts(Event::new(x, t), y))?;
        println!(
            "{t:>6.1} {:>12.4e} {:>12.4e} {:>12.4e}",
            bp.green_pm(KappaSign::Plus)?.norm(),
            bp.green_pm(KappaSign::Minus)?.norm(),
            bp.wavelet(&g, KappaSign::Plus)?.norm()
        );
    }
    for deg in [0.0f64, 45.0, 90.0, 180.0] {
        let d = pulse_duration(deg.to_radians(), y.time, 1.0, KappaSign::Plus);
        println!("theta = {deg:>5}: duration {:.4}, eccentricity {:.2}", d.duration, d.eccentricity);
    }
    Ok(())
}
