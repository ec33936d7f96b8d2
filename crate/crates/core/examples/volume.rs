//! Volumes, Monte-Carlo cross-check, completeness and geodesic distance.

use kaehler_sl2c::global_geom::{
    distance_to_infinity, geodesic_distance, is_complete, monte_carlo_volume, total_volume, volume_mr,
};
use kaehler_sl2c::profiles::{builtin, Builtin};

fn main() {
    for b in [Builtin::Lump, Builtin::Quadratic, Builtin::CoshInduced, Builtin::GaussianTail] {
        let p = builtin(b).unwrap();
        println!(
            "{:>14}: vol(M) = {}, complete = {:?}, D(0,∞) = {:?}",
            p.label(),
            total_volume(&p).unwrap(),
            is_complete(&p),
            distance_to_infinity(&p).ok()
        );
    }
    let lump = builtin(Builtin::Lump).unwrap();
    println!("π⁶/3 = {}", std::f64::consts::PI.powi(6) / 3.0);
    for r in [0.5, 1.0, 2.0] {
        let mc = monte_carlo_volume(&lump, r, 200_000, 42).unwrap();
        println!("vol(M_{r}) = {:.6}, Monte Carlo {:.6} ± {:.6}", volume_mr(&lump, r).unwrap(), mc.estimate, mc.stderr);
    }
    println!("lump D(0, 3) = {:.6}", geodesic_distance(&lump, 0.0, 3.0).unwrap());
}
