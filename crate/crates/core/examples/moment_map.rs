//! The moment map of the two-sided SU(2) action.

use kaehler_sl2c::moment_map::{dual_direction, moment, moment_image_contains, moment_norm_sq, moment_value};
use kaehler_sl2c::profiles::{builtin, Builtin};
use kaehler_sl2c::sl2c::{c, chart_inverse, y_of, LieAlgPair};

fn main() {
    let lump = builtin(Builtin::Lump).unwrap();
    let m = chart_inverse(c(2.0, 0.5), c(0.3, 0.0), c(-0.1, 0.4)).unwrap();
    let mv = moment_value(&lump, &m).unwrap();
    let (v, w) = mv.coordinates();
    println!("μ(m): left {v:.5?}, right {w:.5?}");
    let f1 = lump.f1(y_of(&m)).unwrap();
    println!("‖μ‖² = {:.10}, f'²/4 = {:.10}", moment_norm_sq(&lump, &m).unwrap(), f1 * f1 / 4.0);
    let x = LieAlgPair::from_components([0.3, -0.5, 0.8], [0.1, 0.4, -0.2]);
    println!("μ^X(m) = {:.8}", moment(&lump, &m, &x).unwrap());
    let d = dual_direction(&mv);
    println!("maximizing direction gives μ^X/|X| = {:.8}", mv.evaluate(&d) / d.norm_sqr().sqrt());
    for t in [(0.5, 0.5), (1.2, 1.2), (0.5, 0.7)] {
        println!("{t:?} in image of the lump moment map: {}", moment_image_contains(&lump, t));
    }
}
