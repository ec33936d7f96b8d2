//! Scalar curvature, Ricci classification and the curvature CSV for a profile.
//!
//! `cargo run --example curvature -- "y^2 + cosh(y)"`

use kaehler_sl2c::curvature::{classify_ricci, curvature_curve, scalar_curvature, write_curvature_csv};
use kaehler_sl2c::profiles::resolve_profile;

fn main() {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "lump".into());
    let p = resolve_profile(&spec).expect("profile");
    for y in [0.0, 0.5, 1.0, 2.0, 4.0] {
        println!("s({y}) = {:+.8}", scalar_curvature(&p, y).unwrap());
    }
    println!("ricci class on [0, 8]: {:?}", classify_ricci(&p, 8.0));
    for name in ["stenzel:c=3", "cosh", "quadratic"] {
        println!("{name}: {:?}", classify_ricci(&resolve_profile(name).unwrap(), 8.0));
    }
    let rows = curvature_curve(&p, 4.0, 8).unwrap();
    write_curvature_csv(std::io::stdout().lock(), &rows).unwrap();
}
