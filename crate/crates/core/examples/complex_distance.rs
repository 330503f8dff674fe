//! Complex distance, oblate coordinates and the branch structure around a
//! dilation `y = (0, 0, 1)`.

use pbwave::*;

fn main() -> Result<()> {
    let y = SpaceVec::new(0.0, 0.0, 1.0);
    for x in [
        SpaceVec::new(2.0, 0.0, 0.0),
        SpaceVec::new(0.0, 0.0, 2.0),
        SpaceVec::new(0.6, 0.0, 0.8),
        SpaceVec::new(0.3, 0.4, -0.1),
    ] {
        let rt = complex_distance(&x, &y)?;
        let c = to_oblate(&x, &y)?;
        println!(
            "x = {:?}: r~ = {:.6} {:+.6}i, (p, q, phi) = ({:.4}, {:.4}, {:.4}), jacobian {:.4}",
            x.0,
            rt.re,
            rt.im,
            c.p,
            c.q,
            c.phi,
            volume_jacobian(&c)
        );
    }

    // on the disk the two sides carry opposite boundary values
    let on_disk = SpaceVec::new(0.6, 0.0, 0.0);
    println!("locus of {:?}: {:?}", on_disk.0, classify_branch_locus(&on_disk, &y, 1e-9));
    for side in [Side::Plus, Side::Minus] {
        println!("  {side:?} side: r~ = {}", complex_distance_sided(&on_disk, &y, side)?);
    }

    for u in [2.0, 1.0, 0.5, -3.0] {
        println!("u = {u}: {}", classify_causal(&y, u, 1e-9).label());
    }
    Ok(())
}
