//! Quantum operators of the symmetry, the H_poly basis and membership checks.

use num_complex::Complex64;
use serde::Serialize;

use super::poly::{is_quadric_divisible, monomials_of_degree, reduce_mod_ideal, Poly4};
use crate::sl2c::{LieAlgPair, Mat2C};

/// The entries L_k of aZ − Zb for the symbolic matrix Z = [[z1, z2], [z3, z4]].
pub fn action_field(x: &LieAlgPair) -> [Poly4; 4] {
    let a = |i, j| x.a.at(i, j);
    let b = |i, j| x.b.at(i, j);
    let lin = |cs: [Complex64; 4]| {
        Poly4::from_terms((0..4).map(|k| {
            let mut e = [0; 4];
            e[k] = 1;
            (e, cs[k])
        }))
    };
    let o = Complex64::new(0.0, 0.0);
    // (aZ)_{ij} = a_i1 z_{1j} + a_i2 z_{2j}; (Zb)_{ij} = z_{i1} b_1j + z_{i2} b_2j.
    [
        lin([a(0, 0) - b(0, 0), -b(1, 0), a(0, 1), o]),
        lin([-b(0, 1), a(0, 0) - b(1, 1), o, a(0, 1)]),
        lin([a(1, 0), o, a(1, 1) - b(0, 0), -b(1, 0)]),
        lin([o, a(1, 0), -b(0, 1), a(1, 1) - b(1, 1)]),
    ]
}

/// μ̂^X φ = iħ Σ_k (∂φ/∂z_k) L_k, reduced modulo the ideal.
pub fn quantum_operator(x: &LieAlgPair, phi: &Poly4, hbar: f64) -> Poly4 {
    let l = action_field(x);
    let mut out = Poly4::zero();
    for k in 0..4 {
        let d = phi.partial(k + 1);
        if !d.is_zero() {
            out = out + &d * &l[k];
        }
    }
    reduce_mod_ideal(&out.scale(Complex64::new(0.0, hbar)))
}

/// Numerical evaluation of L_k at a matrix, i.e. the entries of am − mb.
pub fn action_field_at(x: &LieAlgPair, m: &Mat2C) -> Mat2C {
    x.a * *m - *m * x.b
}

/// Monomials of degree m and m − 1; these represent H_poly when the cutoff is m.
pub fn basis_h_poly(m: u32) -> Vec<Poly4> {
    let one = Complex64::new(1.0, 0.0);
    let mut out: Vec<Poly4> = monomials_of_degree(m).into_iter().map(|e| Poly4::monomial(e, one)).collect();
    if m > 0 {
        out.extend(monomials_of_degree(m - 1).into_iter().map(|e| Poly4::monomial(e, one)));
    }
    out
}

/// (m+1)(m+2)(2m+3)/6.
pub fn dim_formula(m: u64) -> u64 {
    (m + 1) * (m + 2) * (2 * m + 3) / 6
}

#[derive(Debug, Clone, Serialize)]
pub struct MembershipCheck {
    pub reduced: Poly4,
    pub degree: Option<u32>,
    pub top_divisible: bool,
    pub warning: Option<String>,
}

/// Reduce φ and test its top homogeneous part for divisibility by the quadric;
/// when divisible the degree criterion says nothing about this representative.
pub fn membership_check(phi: &Poly4) -> MembershipCheck {
    let reduced = reduce_mod_ideal(phi);
    let degree = reduced.degree();
    let top_divisible = match degree {
        Some(d) if d > 0 => matches!(is_quadric_divisible(&reduced.homogeneous_part(d)), Ok((true, _))),
        _ => false,
    };
    let warning = top_divisible.then(|| {
        format!(
            "top homogeneous part of degree {} is divisible by z1z4 − z2z3; degree test inconclusive",
            degree.unwrap_or(0)
        )
    });
    MembershipCheck { reduced, degree, top_divisible, warning }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2c::C64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_poly(rng: &mut ChaCha8Rng, max_deg: u32) -> Poly4 {
        let mut p = Poly4::zero();
        for _ in 0..6 {
            let d = rng.gen_range(0..=max_deg);
            let ms = monomials_of_degree(d);
            let e = ms[rng.gen_range(0..ms.len())];
            p.add_term(e, Complex64::new(rng.gen_range(-2..=2) as f64, rng.gen_range(-2..=2) as f64));
        }
        p
    }

    #[test]
    fn operator_examples() {
        let x = LieAlgPair::from_components([0.0, 0.0, 1.0], [0.0; 3]);
        assert!(quantum_operator(&x, &Poly4::one(), 0.7).is_zero());
        let out = quantum_operator(&x, &Poly4::var(1), 2.0);
        assert_eq!(out, Poly4::var(1).scale(Complex64::new(-1.0, 0.0)));
    }

    #[test]
    fn symbolic_field_matches_matrix_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = LieAlgPair::random(&mut rng);
        let l = action_field(&x);
        let z: [C64; 4] = std::array::from_fn(|_| Complex64::new(rng.gen(), rng.gen()));
        let m = action_field_at(&x, &Mat2C(z));
        for k in 0..4 {
            assert!((l[k].eval(&z) - m.0[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn descends_to_the_quotient_and_keeps_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let d = Poly4::ideal_generator();
        for _ in 0..100 {
            let x = LieAlgPair::random(&mut rng);
            let q = random_poly(&mut rng, 3);
            assert!(quantum_operator(&x, &(&d * &q), 0.3).max_abs_coeff() < 1e-12);
            let phi = random_poly(&mut rng, 4);
            let out = quantum_operator(&x, &phi, 0.3);
            assert!(out.degree().unwrap_or(0) <= phi.degree().unwrap_or(0));
            let y = LieAlgPair::random(&mut rng);
            let sum = quantum_operator(&x.add(&y), &phi, 0.3);
            let parts = out.clone() + quantum_operator(&y, &phi, 0.3);
            assert!((sum - parts).max_abs_coeff() < 1e-12);
        }
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(basis_h_poly(0), vec![Poly4::one()]);
        assert_eq!(basis_h_poly(1).len(), 5);
        for m in 0..12u32 {
            assert_eq!(basis_h_poly(m).len() as u64, dim_formula(m as u64));
        }
        assert_eq!(dim_formula(3), 30);
        assert_eq!(dim_formula(2), 14);
        assert_eq!(dim_formula(101), 358_955);
    }

    #[test]
    fn reduced_top_part_is_never_divisible() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let w = Poly4::quadric();
        for _ in 0..200 {
            let q = random_poly(&mut rng, 3);
            let dq = q.degree().unwrap_or(0);
            let q_top = q.homogeneous_part(dq);
            let phi = &w * &q_top + random_poly(&mut rng, dq + 1);
            let raw_top = phi.homogeneous_part(dq + 2);
            assert!(is_quadric_divisible(&raw_top).unwrap().0);
            let check = membership_check(&phi);
            assert!(!check.top_divisible && check.warning.is_none());
        }
    }
}
