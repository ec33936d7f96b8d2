//! Degree cutoff, dim H_poly and the semiclassical ratio.

use std::f64::consts::PI;

use kaehler_sl2c::profiles::{builtin, resolve_profile, Builtin};
use kaehler_sl2c::quantization::{k_of, quantization_report};

fn main() {
    let lump = builtin(Builtin::Lump).unwrap();
    println!("k(lump) = {:?}", k_of(&lump).unwrap());
    for den in [4.0, 20.0, 200.0, 2000.0] {
        let r = quantization_report(&lump, PI / den).unwrap();
        println!(
            "ħ = π/{den}: m = {:?}, dim = {:?}, ratio = {:?}, bounds = {:?}",
            r.m, r.dim_h_poly, r.semiclassical_ratio, r.bounds
        );
    }
    for spec in ["logcosh:a=1.5", "gaussian-tail", "cosh", "quadratic"] {
        let r = quantization_report(&resolve_profile(spec).unwrap(), 0.1).unwrap();
        println!("{spec} at ħ = 0.1: m = {:?}, k = {:?}, Ω = {}", r.m, r.k, r.omega);
    }
}
