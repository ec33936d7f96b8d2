//! The moment map of the SU(2)×SU(2) action m ↦ U1 m U2⁻¹.

use std::f64::consts::SQRT_2;

use serde::Serialize;

use crate::error::Result;
use crate::profiles::MetricProfile;
use crate::sl2c::{c, su2_vector, x_of, y_of, LieAlgPair, Mat2C, SL2Point};

/// X#(m) = am − mb for X = (a, b).
pub fn fundamental_field(x: &LieAlgPair, m: &Mat2C) -> Mat2C {
    x.a * *m - *m * x.b
}

/// μ(m) stored as (μ_L, μ_R) with μ(a, b) = tr(μ_L a) + tr(μ_R b).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentValue {
    pub mu_l: Mat2C,
    pub mu_r: Mat2C,
}

impl MomentValue {
    /// Evaluation on X; the imaginary part is rounding only.
    pub fn evaluate_complex(&self, x: &LieAlgPair) -> crate::sl2c::C64 {
        (self.mu_l * x.a).trace() + (self.mu_r * x.b).trace()
    }

    pub fn evaluate(&self, x: &LieAlgPair) -> f64 {
        self.evaluate_complex(x).re
    }

    /// Coordinates (v, w) with μ(X) = v·p + w·q for X = ((i/2)p·τ, (i/2)q·τ).
    pub fn coordinates(&self) -> ([f64; 3], [f64; 3]) {
        let mut v = [0.0; 3];
        let mut w = [0.0; 3];
        for k in 0..3 {
            let mut e = [0.0; 3];
            e[k] = 1.0;
            let t = su2_vector(e);
            v[k] = (self.mu_l * t).trace().re;
            w[k] = (self.mu_r * t).trace().re;
        }
        (v, w)
    }

    /// Dual norms of the two components for ‖a‖² = −tr a², i.e. (i/2)p·τ
    /// has norm |p|/√2.
    pub fn component_norms(&self) -> (f64, f64) {
        let (v, w) = self.coordinates();
        let n = |u: [f64; 3]| SQRT_2 * u.iter().map(|x| x * x).sum::<f64>().sqrt();
        (n(v), n(w))
    }

    pub fn dual_norm_sq(&self) -> f64 {
        let (a, b) = self.component_norms();
        a * a + b * b
    }
}

/// μ_L = (i/4)(f'/sinh y)(mm† − x I), μ_R = −(i/4)(f'/sinh y)(m†m − x I).
pub fn moment_value(p: &MetricProfile, m: &SL2Point) -> Result<MomentValue> {
    let mm = *m.matrix();
    let y = y_of(m);
    crate::curvature::metric_at(p, &crate::curvature::DiagonalPoint::from_y(y))?;
    let pref = 0.25 * p.fprime_over_sinh(y)?;
    let x = x_of(&mm);
    let id = Mat2C::identity().scale(c(x, 0.0));
    Ok(MomentValue {
        mu_l: (mm * mm.adjoint() - id).scale(c(0.0, pref)),
        mu_r: (mm.adjoint() * mm - id).scale(c(0.0, -pref)),
    })
}

/// μ(m)[X] = (i/4)(f'/sinh y) tr(mm†a − m†mb).
pub fn moment(p: &MetricProfile, m: &SL2Point, x: &LieAlgPair) -> Result<f64> {
    let v = moment_value(p, m)?.evaluate_complex(x);
    debug_assert!(v.im.abs() <= 1e-12 * (1.0 + v.re.abs()), "non-real moment {v}");
    Ok(v.re)
}

/// ‖μ(m)‖² = f'(y)²/4.
pub fn moment_norm_sq(p: &MetricProfile, m: &SL2Point) -> Result<f64> {
    Ok(0.25 * p.f1(y_of(m))?.powi(2))
}

/// Whether (‖a‖, ‖b‖) lies in the image {‖a‖ = ‖b‖ < f'(∞)/(2√2)}.
pub fn moment_image_contains(p: &MetricProfile, target: (f64, f64)) -> bool {
    let (a, b) = target;
    if !(a >= 0.0 && b >= 0.0) || (a - b).abs() > 1e-10 {
        return false;
    }
    match p.f_prime_limit() {
        Some(lim) => a < lim / (2.0 * SQRT_2),
        None => true,
    }
}

/// The unit-norm X maximizing |μ(X)|, i.e. the direction dual to μ.
pub fn dual_direction(mv: &MomentValue) -> LieAlgPair {
    let (v, w) = mv.coordinates();
    let n = (0.5 * (v.iter().chain(&w).map(|x| x * x).sum::<f64>())).sqrt();
    if n == 0.0 {
        return LieAlgPair::zero();
    }
    LieAlgPair::from_components(v.map(|x| x / n), w.map(|x| x / n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{metric_at, DiagonalPoint};
    use crate::profiles::{builtin, Builtin};
    use crate::sl2c::{act_point, chart, chart_inverse, haar_sample, C64};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(b: Builtin) -> MetricProfile {
        builtin(b).unwrap()
    }

    fn random_point(rng: &mut ChaCha8Rng) -> SL2Point {
        loop {
            let mut z = [c(0.0, 0.0); 3];
            z.iter_mut().for_each(|v| *v = c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)));
            if z[0].norm() > 0.2 {
                return chart_inverse(z[0], z[1], z[2]).unwrap();
            }
        }
    }

    #[test]
    fn fundamental_field_examples() {
        let m = Mat2C::from_real(1.3, 0.2, -0.4, 0.7);
        assert_eq!(fundamental_field(&LieAlgPair::zero(), &m), Mat2C::zero());
        let a = su2_vector([0.0, 0.0, 1.0]);
        let x = LieAlgPair::new(a, Mat2C::zero()).unwrap();
        assert!(fundamental_field(&x, &Mat2C::identity()).dist(&a) < 1e-16);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = LieAlgPair::random(&mut rng);
        let t = 1e-6;
        let moved = x.a.scale(c(t, 0.0)).expm() * m * x.b.scale(c(-t, 0.0)).expm();
        let fd = (moved - m).scale(c(1.0 / t, 0.0));
        assert!(fd.dist(&fundamental_field(&x, &m)) < 1e-5);
    }

    #[test]
    fn vanishes_on_su2_and_is_real_and_linear() {
        let lump = p(Builtin::Lump);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = haar_sample(&mut rng);
        let on_su2 = SL2Point::new(*u.matrix()).unwrap();
        let x = LieAlgPair::random(&mut rng);
        assert!(moment(&lump, &on_su2, &x).unwrap().abs() < 1e-14);
        assert_eq!(moment_norm_sq(&lump, &on_su2).unwrap(), 0.0);
        for _ in 0..1000 {
            let m = random_point(&mut rng);
            let (x, z) = (LieAlgPair::random(&mut rng), LieAlgPair::random(&mut rng));
            let v = moment_value(&lump, &m).unwrap();
            let e = v.evaluate_complex(&x);
            assert!(e.im.abs() <= 1e-12 * (1.0 + e.re.abs()));
            let sum = moment(&lump, &m, &x.add(&z)).unwrap();
            let parts = moment(&lump, &m, &x).unwrap() + moment(&lump, &m, &z).unwrap();
            assert!((sum - parts).abs() <= 1e-12 * (1.0 + sum.abs()));
        }
    }

    #[test]
    fn equivariance() {
        let q = p(Builtin::Quadratic);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..1000 {
            let m = random_point(&mut rng);
            let g = (haar_sample(&mut rng), haar_sample(&mut rng));
            let x = LieAlgPair::random(&mut rng);
            let lhs = moment(&q, &act_point(&g, &m), &x).unwrap();
            let ginv = (g.0.inverse(), g.1.inverse());
            let rhs = moment(&q, &m, &x.adjoint_action(&ginv)).unwrap();
            assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn norm_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for b in [Builtin::Lump, Builtin::Quadratic, Builtin::CoshInduced] {
            let pr = p(b);
            for _ in 0..300 {
                let m = random_point(&mut rng);
                let f1 = pr.f1(y_of(&m)).unwrap();
                let dual = moment_value(&pr, &m).unwrap().dual_norm_sq();
                assert!((dual - f1 * f1 / 4.0).abs() <= 1e-10 * (1.0 + f1 * f1));
                let (na, nb) = moment_value(&pr, &m).unwrap().component_norms();
                assert!((na - nb).abs() <= 1e-10 * (1.0 + na));
            }
        }
        let q = p(Builtin::Quadratic);
        let m = SL2Point::new(Mat2C::from_real((1.5f64).exp(), 0.0, 0.0, (-1.5f64).exp())).unwrap();
        assert!((moment_norm_sq(&q, &m).unwrap() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn image() {
        let lump = p(Builtin::Lump);
        let edge = std::f64::consts::PI / (2.0 * SQRT_2);
        assert!(moment_image_contains(&lump, (0.0, 0.0)));
        assert!(!moment_image_contains(&lump, (edge, edge)));
        assert!(moment_image_contains(&lump, (0.999 * edge, 0.999 * edge)));
        assert!(!moment_image_contains(&lump, (0.1, 0.2)));
        assert!(moment_image_contains(&p(Builtin::CoshInduced), (1e6, 1e6)));
    }

    /// dμ^X(v) = ω(X#, v) with ω(U, V) = −Im Σ h_αβ̄ U_α V̄_β at diagonal points.
    #[test]
    fn moment_generates_the_action() {
        let lump = p(Builtin::Lump);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for z1 in [c(1.3, 0.0), c(0.6, 0.5), c(2.0, -1.0), c(0.9, 0.1), c(-1.7, 0.4)] {
            let pt = DiagonalPoint::new(z1).unwrap();
            let h = metric_at(&lump, &pt).unwrap().as_array();
            let m = chart_inverse(z1, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
            let x = LieAlgPair::random(&mut rng);
            let xs = fundamental_field(&x, m.matrix());
            let u = [xs.0[0], xs.0[1], xs.0[2]];
            let mut v = [c(0.0, 0.0); 3];
            v.iter_mut().for_each(|e| *e = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let z = chart(&m).unwrap();
            let at = |t: f64| -> f64 {
                let w: [C64; 3] = std::array::from_fn(|k| z[k] + v[k] * t);
                moment(&lump, &chart_inverse(w[0], w[1], w[2]).unwrap(), &x).unwrap()
            };
            let t = 1e-4;
            let dmu = (at(-2.0 * t) - 8.0 * at(-t) + 8.0 * at(t) - at(2.0 * t)) / (12.0 * t);
            let herm: C64 = (0..3).map(|k| h[k] * u[k] * v[k].conj()).sum();
            let omega = -herm.im;
            assert!((dmu - omega).abs() < 1e-4 * (1.0 + omega.abs()), "{z1}: {dmu} vs {omega}");
        }
    }

    #[test]
    fn brute_force_dual_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let q = p(Builtin::Quadratic);
        for y in [0.4, 1.0, 2.5] {
            let z1 = c((0.5f64 * y).exp(), 0.0);
            let m = chart_inverse(z1, c(0.3, 0.1), c(-0.2, 0.4)).unwrap();
            let mv = moment_value(&q, &m).unwrap();
            let ratio = |x: &LieAlgPair| mv.evaluate(x).powi(2) / x.norm_sqr();
            let mut best = LieAlgPair::random(&mut rng);
            for _ in 0..10_000 {
                let x = LieAlgPair::random(&mut rng);
                if ratio(&x) > ratio(&best) {
                    best = x;
                }
            }
            let mut step = 0.3;
            for _ in 0..4000 {
                let cand = best.add(&LieAlgPair::random(&mut rng).scale(step));
                if ratio(&cand) > ratio(&best) {
                    best = cand;
                } else {
                    step *= 0.998;
                }
            }
            let want = moment_norm_sq(&q, &m).unwrap();
            assert!((ratio(&best) - want).abs() < 0.01 * want, "{} vs {want}", ratio(&best));
            assert!((ratio(&dual_direction(&mv)) - want).abs() < 1e-10 * want);
        }
    }
}
