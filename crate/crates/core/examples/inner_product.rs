//! Monte-Carlo L² inner products and the Hermiticity of a quantum operator.

use std::f64::consts::PI;

use kaehler_sl2c::profiles::{builtin, Builtin};
use kaehler_sl2c::quantization::{basis_h_poly, gram_hermiticity, monte_carlo_inner_product, Poly4};
use kaehler_sl2c::sl2c::LieAlgPair;

fn main() {
    let lump = builtin(Builtin::Lump).unwrap();
    let hbar = PI / 4.0;
    let one = Poly4::one();
    let z1 = Poly4::var(1);
    for (name, a, b) in [("⟨1,1⟩", &one, &one), ("⟨z1,z1⟩", &z1, &z1), ("⟨z1,1⟩", &z1, &one)] {
        let ip = monte_carlo_inner_product(&lump, hbar, a, b, None, 200_000, 3).unwrap();
        println!(
            "{name} = {:.6} {:+.6}i ± ({:.1e}, {:.1e}), r_cut = {:.2}",
            ip.re, ip.im, ip.stderr_re, ip.stderr_im, ip.r_cut
        );
    }
    let x = LieAlgPair::from_components([0.3, -0.5, 0.8], [0.1, 0.4, -0.2]);
    let g = gram_hermiticity(&lump, hbar, &basis_h_poly(1), &x, None, 200_000, 7).unwrap();
    println!("⟨μ̂φi, φj⟩ − ⟨φi, μ̂φj⟩ over a {0}×{0} basis: max |z| = {1:.2}", g.size, g.max_z);
}
