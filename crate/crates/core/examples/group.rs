//! SL(2,C), the SU(2)×SU(2) action and the orbit invariants of 2×2 matrices.

use kaehler_sl2c::sl2c::{
    act, act_point, beta_section, c, cartan_decompose, chart, chart_inverse, haar_sample, same_orbit, w_of, x_of, y_of,
    Mat2C,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = chart_inverse(c(1.5, 0.2), c(0.3, -0.4), c(0.0, 0.7)).unwrap();
    println!("m = {:?}\nchart = {:?}, y = {:.6}", m.matrix(), chart(&m).unwrap(), y_of(&m));

    let g = (haar_sample(&mut rng), haar_sample(&mut rng));
    let gm = act_point(&g, &m);
    println!("y is invariant: {:.6} -> {:.6}", y_of(&m), y_of(&gm));

    let a = Mat2C::from_real(1.0, 2.0, 0.5, -1.0);
    let cd = cartan_decompose(&a);
    println!("cartan: λ = {:?}, θ = {:.4}, residual {:.1e}", cd.lambda, cd.theta, cd.reconstruct().dist(&a));
    println!("same orbit as a rotated copy: {}", same_orbit(&a, &act(&g, &a), 1e-10));

    let s = beta_section(x_of(&a), w_of(&a)).unwrap();
    println!("normal form {:?} shares (x, w) with a: {}", s, same_orbit(&a, &s, 1e-10));
}
