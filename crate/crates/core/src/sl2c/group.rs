//! SL(2,ℂ), SU(2) and su(2)⊕su(2): invariants, chart, action, χ map, Haar measure.

use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use super::mat::{c, pauli, Mat2C, C64};
use crate::error::{Error, Result};

pub const DET_TOL: f64 = 1e-10;

/// A point of SL(2,ℂ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SL2Point {
    m: Mat2C,
}

impl SL2Point {
    pub fn new(m: Mat2C) -> Result<Self> {
        let d = m.det();
        if (d - c(1.0, 0.0)).norm() > DET_TOL {
            return Err(Error::NotInGroup(format!("det = {d} is not 1")));
        }
        Ok(Self { m })
    }

    /// Wrap a matrix whose determinant is 1 by construction (up to rounding).
    pub(crate) fn from_unit_det(m: Mat2C) -> Self {
        Self { m }
    }

    pub fn matrix(&self) -> &Mat2C {
        &self.m
    }
}

/// An element of SU(2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SU2Element {
    u: Mat2C,
}

impl SU2Element {
    pub fn new(u: Mat2C) -> Result<Self> {
        let unitary = (u.adjoint() * u).dist(&Mat2C::identity());
        let det = (u.det() - c(1.0, 0.0)).norm();
        if unitary > DET_TOL || det > DET_TOL {
            return Err(Error::NotInGroup(format!("not in SU(2): |u†u − I| = {unitary:e}, |det − 1| = {det:e}")));
        }
        Ok(Self { u })
    }

    pub(crate) fn from_matrix_unchecked(u: Mat2C) -> Self {
        Self { u }
    }

    pub fn identity() -> Self {
        Self { u: Mat2C::identity() }
    }

    pub fn matrix(&self) -> &Mat2C {
        &self.u
    }

    pub fn inverse(&self) -> Self {
        Self { u: self.u.adjoint() }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { u: self.u * other.u }
    }

    /// The rotation R_ab = ½ tr(τ_a U τ_b U†) of the double cover SU(2) → SO(3).
    pub fn rotation(&self) -> [[f64; 3]; 3] {
        let t = pauli();
        let ud = self.u.adjoint();
        let mut r = [[0.0; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                r[a][b] = 0.5 * (t[a] * self.u * t[b] * ud).trace().re;
            }
        }
        r
    }
}

/// (a, b) ∈ su(2) ⊕ su(2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LieAlgPair {
    pub a: Mat2C,
    pub b: Mat2C,
}

pub const ALGEBRA_TOL: f64 = 1e-12;

impl LieAlgPair {
    pub fn new(a: Mat2C, b: Mat2C) -> Result<Self> {
        for (name, x) in [("a", a), ("b", b)] {
            let skew = (x.adjoint() + x).max_norm();
            let tr = x.trace().norm();
            if skew > ALGEBRA_TOL || tr > ALGEBRA_TOL {
                return Err(Error::Domain(format!("{name} is not in su(2): |x† + x| = {skew:e}, |tr x| = {tr:e}")));
            }
        }
        Ok(Self { a, b })
    }

    pub fn zero() -> Self {
        Self { a: Mat2C::zero(), b: Mat2C::zero() }
    }

    /// (i/2) Σ p_k τ_k and (i/2) Σ q_k τ_k.
    pub fn from_components(p: [f64; 3], q: [f64; 3]) -> Self {
        Self { a: su2_vector(p), b: su2_vector(q) }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut v = [0.0; 6];
        v.iter_mut().for_each(|x| *x = rng.gen_range(-1.0..1.0));
        Self::from_components([v[0], v[1], v[2]], [v[3], v[4], v[5]])
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { a: self.a + other.a, b: self.b + other.b }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { a: self.a.scale(c(s, 0.0)), b: self.b.scale(c(s, 0.0)) }
    }

    /// Ad_g (a, b) = (U1 a U1†, U2 b U2†).
    pub fn adjoint_action(&self, g: &(SU2Element, SU2Element)) -> Self {
        let (u1, u2) = (g.0.matrix(), g.1.matrix());
        Self { a: *u1 * self.a * u1.adjoint(), b: *u2 * self.b * u2.adjoint() }
    }

    /// ‖(a, b)‖² = −tr a² − tr b².
    pub fn norm_sqr(&self) -> f64 {
        -((self.a * self.a).trace() + (self.b * self.b).trace()).re
    }
}

/// (i/2) Σ v_k τ_k ∈ su(2).
pub fn su2_vector(v: [f64; 3]) -> Mat2C {
    let t = pauli();
    let mut m = Mat2C::zero();
    for k in 0..3 {
        m = m + t[k].scale(c(0.0, 0.5 * v[k]));
    }
    m
}

/// x = tr(m†m)/2.
pub fn x_of(m: &Mat2C) -> f64 {
    0.5 * m.frob_sqr()
}

/// y = arccosh x, with x clamped to [1, ∞) against rounding.
pub fn y_of(p: &SL2Point) -> f64 {
    x_of(p.matrix()).max(1.0).acosh()
}

/// w = z1 z4 − z2 z3.
pub fn w_of(m: &Mat2C) -> C64 {
    m.det()
}

/// ε⁻¹(z1, z2, z3) = [[z1, z2], [z3, (1 + z2 z3)/z1]].
pub fn chart_inverse(z1: C64, z2: C64, z3: C64) -> Result<SL2Point> {
    if z1.norm() < 1e-15 {
        return Err(Error::ChartDomain(z1.norm()));
    }
    Ok(SL2Point::from_unit_det(Mat2C::new(z1, z2, z3, (c(1.0, 0.0) + z2 * z3) / z1)))
}

/// The chart coordinates (z1, z2, z3) of a point.
pub fn chart(p: &SL2Point) -> Result<[C64; 3]> {
    let m = p.matrix();
    if m.0[0].norm() < 1e-15 {
        return Err(Error::ChartDomain(m.0[0].norm()));
    }
    Ok([m.0[0], m.0[1], m.0[2]])
}

/// ψ((U1, U2), m) = U1 m U2⁻¹.
pub fn act(g: &(SU2Element, SU2Element), m: &Mat2C) -> Mat2C {
    *g.0.matrix() * *m * g.1.matrix().adjoint()
}

pub fn act_point(g: &(SU2Element, SU2Element), p: &SL2Point) -> SL2Point {
    SL2Point::from_unit_det(act(g, p.matrix()))
}

/// χ(U, λ) = U (√(1+|λ|²) I + λ·τ).
pub fn chi(u: &SU2Element, lambda: [f64; 3]) -> SL2Point {
    let l2 = lambda.iter().map(|v| v * v).sum::<f64>();
    let t = pauli();
    let mut h = Mat2C::identity().scale(c((1.0 + l2).sqrt(), 0.0));
    for k in 0..3 {
        h = h + t[k].scale(c(lambda[k], 0.0));
    }
    SL2Point::from_unit_det(*u.matrix() * h)
}

/// exp(+iβτ3/2)·exp(+iατ2/2)·exp(+iγτ3/2) on the closed chart box
/// [0, 4π] × [0, π] × [0, 2π].
///
/// With this sign the components of U⁻¹dU = Σ σ_a (i/2) τ_a are
/// σ1 = −sin γ dα + cos γ sin α dβ, σ2 = cos γ dα + sin γ sin α dβ,
/// σ3 = cos α dβ + dγ.
pub fn su2_from_euler(beta: f64, alpha: f64, gamma: f64) -> Result<SU2Element> {
    let inside = (0.0..=4.0 * PI).contains(&beta) && (0.0..=PI).contains(&alpha) && (0.0..=2.0 * PI).contains(&gamma);
    if !inside {
        return Err(Error::Domain(format!("Euler angles ({beta}, {alpha}, {gamma}) outside [0,4π]×[0,π]×[0,2π]")));
    }
    Ok(euler_unchecked(beta, alpha, gamma))
}

fn euler_unchecked(beta: f64, alpha: f64, gamma: f64) -> SU2Element {
    let rz = |t: f64| Mat2C::diag(c(0.0, t / 2.0).exp(), c(0.0, -t / 2.0).exp());
    let (s, co) = (alpha / 2.0).sin_cos();
    // exp(iατ2/2) = cos(α/2) I + i sin(α/2) τ2
    let ry = Mat2C::from_real(co, s, -s, co);
    SU2Element::from_matrix_unchecked(rz(beta) * ry * rz(gamma))
}

/// Draw from the normalized Haar measure sin α/(16π²) dβ dα dγ.
pub fn haar_sample<R: Rng + ?Sized>(rng: &mut R) -> SU2Element {
    let beta = rng.gen::<f64>() * 4.0 * PI;
    let gamma = rng.gen::<f64>() * 2.0 * PI;
    let alpha = (1.0 - 2.0 * rng.gen::<f64>()).clamp(-1.0, 1.0).acos();
    euler_unchecked(beta, alpha, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn invariants_examples() {
        assert_eq!(x_of(&Mat2C::identity()), 1.0);
        assert_eq!(x_of(&Mat2C::from_real(2.0, 0.0, 0.0, 0.5)), 2.125);
        let e = std::f64::consts::E;
        let p = SL2Point::new(Mat2C::from_real(e, 0.0, 0.0, 1.0 / e)).unwrap();
        assert!((y_of(&p) - 2.0).abs() < 1e-14);
        for t in [0.0, 0.3, 2.5] {
            let (ch, sh) = ((t / 2.0f64).cosh(), (t / 2.0f64).sinh());
            let h = SL2Point::new(Mat2C::from_real(ch, sh, sh, ch)).unwrap();
            assert!((y_of(&h) - t).abs() < 1e-7, "t = {t}");
        }
        assert_eq!(w_of(&Mat2C::from_real(2.0, 0.0, 0.0, 3.0)), c(6.0, 0.0));
        assert!(SL2Point::new(Mat2C::from_real(2.0, 0.0, 0.0, 3.0)).is_err());
    }

    #[test]
    fn chart_examples() {
        assert_eq!(*chart_inverse(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap().matrix(), Mat2C::identity());
        let xi = c(0.3, 1.2);
        let d = chart_inverse(xi, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(d.matrix().dist(&Mat2C::diag(xi, 1.0 / xi)) < 1e-15);
        let m = chart_inverse(c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(*m.matrix(), Mat2C::from_real(2.0, 1.0, 1.0, 1.0));
        assert!(matches!(chart_inverse(c(1e-16, 0.0), c(0.0, 0.0), c(0.0, 0.0)), Err(Error::ChartDomain(_))));
        assert_eq!(chart(&m).unwrap(), [c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn chi_examples() {
        let id = SU2Element::identity();
        assert_eq!(*chi(&id, [0.0; 3]).matrix(), Mat2C::identity());
        let l: f64 = 0.7;
        let s = (1.0 + l * l).sqrt();
        assert!(chi(&id, [0.0, 0.0, l]).matrix().dist(&Mat2C::from_real(s + l, 0.0, 0.0, s - l)) < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let u = haar_sample(&mut rng);
            let lam = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let p = chi(&u, lam);
            let l2: f64 = lam.iter().map(|v| v * v).sum();
            assert!((p.matrix().det() - c(1.0, 0.0)).norm() < 1e-12);
            assert!((x_of(p.matrix()) - (1.0 + 2.0 * l2)).abs() < 1e-12 * (1.0 + l2));
        }
    }

    #[test]
    fn euler_chart_box_and_identity() {
        assert!(su2_from_euler(1e-300, 1e-300, 1e-300).unwrap().matrix().dist(&Mat2C::identity()) < 1e-15);
        assert!(su2_from_euler(-0.1, 1.0, 1.0).is_err());
        assert!(su2_from_euler(1.0, 3.2, 1.0).is_err());
        assert!(su2_from_euler(1.0, 1.0, 6.3).is_err());
    }

    /// Maurer–Cartan components σ_a(v) = tr(U⁻¹ ∂_v U τ_a)/i along each angle.
    fn pulled_back_forms(b: f64, a: f64, g: f64) -> [[f64; 3]; 3] {
        let h = 1e-5;
        let t = pauli();
        let u = euler_unchecked(b, a, g);
        let uinv = u.matrix().adjoint();
        let mut out = [[0.0; 3]; 3];
        for (dir, (db, da, dg)) in [(h, 0.0, 0.0), (0.0, h, 0.0), (0.0, 0.0, h)].into_iter().enumerate() {
            let up = *euler_unchecked(b + db, a + da, g + dg).matrix();
            let um = *euler_unchecked(b - db, a - da, g - dg).matrix();
            let du = (up - um).scale(c(1.0 / (2.0 * h), 0.0));
            for k in 0..3 {
                let v = (uinv * du * t[k]).trace() / c(0.0, 1.0);
                assert!(v.im.abs() < 1e-9);
                out[k][dir] = v.re;
            }
        }
        out
    }

    #[test]
    fn euler_convention_reproduces_left_invariant_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let (b, a, g) = (rng.gen_range(0.1..12.0), rng.gen_range(0.1..3.0), rng.gen_range(0.1..6.2));
            let s = pulled_back_forms(b, a, g);
            // Columns are (dβ, dα, dγ).
            let want = [[g.cos() * a.sin(), -g.sin(), 0.0], [g.sin() * a.sin(), g.cos(), 0.0], [a.cos(), 0.0, 1.0]];
            for k in 0..3 {
                for d in 0..3 {
                    assert!((s[k][d] - want[k][d]).abs() < 1e-8, "σ{} d{d}: {} vs {}", k + 1, s[k][d], want[k][d]);
                }
            }
        }
    }

    #[test]
    fn haar_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 100_000;
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        let mut ones = 0.0;
        for _ in 0..n {
            let u = haar_sample(&mut rng);
            let v = u.matrix().trace().norm_sqr() / 4.0;
            sum += v;
            sum2 += v * v;
            ones += 1.0;
        }
        assert_eq!(ones / n as f64, 1.0);
        let mean = sum / n as f64;
        let se = ((sum2 / n as f64 - mean * mean) / n as f64).sqrt();
        assert!((mean - 0.25).abs() < 3.0 * se, "{mean} ± {se}");
    }

    #[test]
    fn rotation_is_special_orthogonal_and_even() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let u = haar_sample(&mut rng);
            let r = u.rotation();
            for i in 0..3 {
                for j in 0..3 {
                    let dot: f64 = (0..3).map(|k| r[k][i] * r[k][j]).sum();
                    assert!((dot - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
                }
            }
            let det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
                - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
            assert!((det - 1.0).abs() < 1e-12);
            let neg = SU2Element::from_matrix_unchecked(-*u.matrix()).rotation();
            for i in 0..3 {
                for j in 0..3 {
                    assert!((neg[i][j] - r[i][j]).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn action_preserves_invariants_and_composes() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..1000 {
            let g = (haar_sample(&mut rng), haar_sample(&mut rng));
            let h = (haar_sample(&mut rng), haar_sample(&mut rng));
            let z1 = c(rng.gen_range(0.2..2.0), rng.gen_range(-1.0..1.0));
            let p = chart_inverse(z1, c(rng.gen_range(-1.0..1.0), 0.3), c(0.1, rng.gen_range(-1.0..1.0))).unwrap();
            let q = act_point(&g, &p);
            assert!((x_of(q.matrix()) - x_of(p.matrix())).abs() < 1e-12 * x_of(p.matrix()));
            assert!((w_of(q.matrix()) - w_of(p.matrix())).norm() < 1e-12);
            assert!((y_of(&q) - y_of(&p)).abs() < 1e-10);
            let gh = (g.0.compose(&h.0), g.1.compose(&h.1));
            assert!(act(&g, &act(&h, p.matrix())).dist(&act(&gh, p.matrix())) < 1e-12 * p.matrix().max_norm());
        }
        let m = Mat2C::from_real(1.0, 2.0, 3.0, 4.0);
        assert_eq!(act(&(SU2Element::identity(), SU2Element::identity()), &m), m);
    }

    #[test]
    fn lie_algebra_validation() {
        assert!(LieAlgPair::new(su2_vector([1.0, 2.0, 3.0]), su2_vector([0.0, -1.0, 0.5])).is_ok());
        assert!(LieAlgPair::new(Mat2C::identity(), Mat2C::zero()).is_err());
        let x = LieAlgPair::from_components([1.0, 0.0, 0.0], [0.0, 0.0, 2.0]);
        // −tr((iτ/2)²) = 1/2 per unit component.
        assert!((x.norm_sqr() - 0.5 * (1.0 + 4.0)).abs() < 1e-15);
    }
}
