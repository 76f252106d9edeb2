//! The proximal operator of `θ‖·‖₁` on a few hand-picked inputs.

use proxkit::prox::soft_threshold;

fn main() -> proxkit::Result<()> {
    let z = [-2.0, -0.5, 0.0, 0.3, 1.0, 4.0];
    for theta in [0.0, 0.5, 1.0] {
        let out = soft_threshold(&z, theta)?;
        println!("theta = {theta:<4} {:?} -> {:?}", z, out.as_ref() as &[f64]);
    }
    Ok(())
}
