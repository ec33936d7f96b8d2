//! Polynomials modulo z1z4 − z2z3 − 1 and the quantum operators of the symmetry.

use kaehler_sl2c::quantization::{basis_h_poly, membership_check, quantum_operator, reduce_mod_ideal, Poly4};
use kaehler_sl2c::sl2c::LieAlgPair;

fn main() {
    let phi: Poly4 = "1+0i * z1^2 z4 + 2+0i * z2 z3 + 1+0i".parse().unwrap();
    println!("φ = {phi}");
    println!("reduced: {}", reduce_mod_ideal(&phi));
    let check = membership_check(&(&Poly4::quadric() * &Poly4::var(1)));
    println!("z1(z1z4 − z2z3) reduces to {} (warning: {:?})", check.reduced, check.warning);

    let x = LieAlgPair::from_components([0.0, 0.0, 1.0], [0.0, 1.0, 0.0]);
    for b in basis_h_poly(1) {
        println!("μ̂^X({b}) = {}", quantum_operator(&x, &b, 0.5));
    }
    let d = Poly4::ideal_generator();
    println!("μ̂^X(D·z2) = {}", quantum_operator(&x, &(&d * &Poly4::var(2)), 0.5));
}
