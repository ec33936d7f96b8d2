//! Local Kähler geometry on the diagonal slice Λ = {diag(z1, 1/z1)}.
//!
//! Components are reported as coefficients of dz_α ∧ dz̄_β in the (i/2)
//! convention, so the metric is h = ∂∂̄(f∘y) and the Ricci form is
//! (i/2)·r with r = ∂∂̄ρ̃, ρ̃ = −2 ln[(f'/sinh y)² f''].
//!
//! The scalar curvature s = 2g''/f'' + 4g'/f' with g = ln(sinh²y/(f''f'²))
//! is half of the usual Riemannian scalar curvature.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::Mat3C;
use crate::profiles::MetricProfile;

/// Below this y, g'/sinh y, g'' and s are extrapolated from `SMALL_Y_NODES`.
pub const SMALL_Y: f64 = 0.15;
pub const SMALL_Y_NODES: [f64; 3] = [0.15, 0.2, 0.3];

/// A point diag(z1, 1/z1) of Λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagonalPoint {
    pub z1: Complex64,
}

impl DiagonalPoint {
    pub fn new(z1: Complex64) -> Result<Self> {
        if !(z1.norm() > 0.0) || !z1.norm().is_finite() {
            return Err(Error::Domain(format!("diagonal point needs 0 < |z1| < ∞, got {z1}")));
        }
        Ok(Self { z1 })
    }

    /// The point with real z1 = e^{y/2} ≥ 1.
    pub fn from_y(y: f64) -> Self {
        Self { z1: Complex64::new((0.5 * y.abs()).exp(), 0.0) }
    }

    /// y = arccosh((|z1|² + |z1|⁻²)/2) = 2|ln|z1||.
    pub fn y(&self) -> f64 {
        2.0 * self.z1.norm().ln().abs()
    }
}

/// Diagonal Hermitian form in the chart (z1, z2, z3); off-diagonals vanish on Λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HermitianMetric3 {
    pub h11: f64,
    pub h22: f64,
    pub h33: f64,
}

impl HermitianMetric3 {
    pub fn is_positive_definite(&self) -> bool {
        self.h11 > 0.0 && self.h22 > 0.0 && self.h33 > 0.0
    }

    pub fn max_abs(&self) -> f64 {
        self.h11.abs().max(self.h22.abs()).max(self.h33.abs())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.h11, self.h22, self.h33]
    }
}

fn admissible_at(p: &MetricProfile, y: f64) -> Result<[f64; 5]> {
    let d = p.derivatives(y)?;
    if !(d[2] > 0.0) || (y > 0.0 && !(d[1] > 0.0)) {
        return Err(Error::InadmissibleProfile(format!(
            "f'({y}) = {}, f''({y}) = {} (needs f' > 0 for y > 0 and f'' > 0)",
            d[1], d[2]
        )));
    }
    Ok(d)
}

/// h11 = f''/|z1|², h22 = h33 = f'/(2 sinh y).
pub fn metric_at(p: &MetricProfile, pt: &DiagonalPoint) -> Result<HermitianMetric3> {
    let y = pt.y();
    let d = admissible_at(p, y)?;
    let h22 = 0.5 * p.fprime_over_sinh(y)?;
    Ok(HermitianMetric3 { h11: d[2] / pt.z1.norm_sqr(), h22, h33: h22 })
}

/// ρ̃(y) = −2 ln[(f'/sinh y)² f''].
pub fn ricci_potential(p: &MetricProfile, y: f64) -> Result<f64> {
    let y = y.abs();
    let d = admissible_at(p, y)?;
    let r = p.fprime_over_sinh(y)?;
    Ok(-2.0 * (2.0 * r.ln() + d[2].ln()))
}

/// g'(y) and g''(y) for g = ln(sinh²y/(f''f'²)), y > 0, from closed formulas.
pub fn g_derivatives(p: &MetricProfile, y: f64) -> Result<(f64, f64)> {
    let d = admissible_at(p, y)?;
    if y <= 0.0 {
        return Err(Error::Domain("g' and g'' are evaluated directly only for y > 0".into()));
    }
    let (a1, a2) = (d[2] / d[1], d[3] / d[2]);
    let coth = 1.0 / y.tanh();
    let csch2 = 1.0 / y.sinh().powi(2);
    let g1 = 2.0 * coth - a2 - 2.0 * a1;
    let g2 = -2.0 * csch2 - (d[4] / d[2] - a2 * a2) - 2.0 * (d[3] / d[1] - a1 * a1);
    Ok((g1, g2))
}

/// Quadratic interpolation in y² through the three nodes, evaluated at y.
fn extrapolate_even(y: f64, vals: [f64; 3]) -> f64 {
    let u: Vec<f64> = SMALL_Y_NODES.iter().map(|t| t * t).collect();
    let x = y * y;
    let mut out = 0.0;
    for i in 0..3 {
        let mut l = 1.0;
        for j in 0..3 {
            if i != j {
                l *= (x - u[j]) / (u[i] - u[j]);
            }
        }
        out += vals[i] * l;
    }
    out
}

/// (g''(y), g'(y)/sinh y), extrapolated below `SMALL_Y`.
fn ricci_radial(p: &MetricProfile, y: f64) -> Result<(f64, f64)> {
    let y = y.abs();
    let direct = |t: f64| -> Result<(f64, f64)> {
        let (g1, g2) = g_derivatives(p, t)?;
        Ok((g2, g1 / t.sinh()))
    };
    if y >= SMALL_Y {
        return direct(y);
    }
    admissible_at(p, y)?;
    let mut a = [0.0; 3];
    let mut b = [0.0; 3];
    for (k, &t) in SMALL_Y_NODES.iter().enumerate() {
        (a[k], b[k]) = direct(t)?;
    }
    Ok((extrapolate_even(y, a), extrapolate_even(y, b)))
}

/// r11 = 2g''/|z1|², r22 = r33 = g'/sinh y.
pub fn ricci_components(p: &MetricProfile, pt: &DiagonalPoint) -> Result<HermitianMetric3> {
    let (g2, g1_over_sinh) = ricci_radial(p, pt.y())?;
    Ok(HermitianMetric3 { h11: 2.0 * g2 / pt.z1.norm_sqr(), h22: g1_over_sinh, h33: g1_over_sinh })
}

/// s = 2g''/f'' + 4g'/f'.
pub fn scalar_curvature(p: &MetricProfile, y: f64) -> Result<f64> {
    let y = y.abs();
    let direct = |t: f64| -> Result<f64> {
        let d = p.derivatives(t)?;
        let (g1, g2) = g_derivatives(p, t)?;
        Ok(2.0 * g2 / d[2] + 4.0 * g1 / d[1])
    };
    if y >= SMALL_Y {
        return direct(y);
    }
    admissible_at(p, y)?;
    let mut v = [0.0; 3];
    for (k, &t) in SMALL_Y_NODES.iter().enumerate() {
        v[k] = direct(t)?;
    }
    Ok(extrapolate_even(y, v))
}

/// s through the divergence form 2/(f''f'²)·d/dy(f'²g'), with the inner
/// derivative taken by a five-point stencil; used as an internal cross-check.
pub fn scalar_curvature_divergence_form(p: &MetricProfile, y: f64, h: f64) -> Result<f64> {
    let q = |t: f64| -> Result<f64> {
        let (g1, _) = g_derivatives(p, t)?;
        Ok(p.f1(t)?.powi(2) * g1)
    };
    let dq = (q(y - 2.0 * h)? - 8.0 * q(y - h)? + 8.0 * q(y + h)? - q(y + 2.0 * h)?) / (12.0 * h);
    let d = p.derivatives(y)?;
    Ok(2.0 * dq / (d[2] * d[1] * d[1]))
}

/// h_{αβ̄} = ∂_α∂̄_β(f∘y) at an arbitrary chart point (z1, z2, z3), through
/// y_α = x_α/sinh y and y_{αβ̄} = x_{αβ̄}/sinh y − x x_α x_β̄/sinh³y.
/// Needs y ≥ 10⁻³; on SU(2) itself use [`metric_at`].
pub fn chart_metric(p: &MetricProfile, z: &[Complex64; 3]) -> Result<Mat3C> {
    let [z1, z2, z3] = *z;
    let a = z1.norm_sqr();
    if !(a > 1e-30) {
        return Err(Error::ChartDomain(z1.norm()));
    }
    let q = Complex64::new(1.0, 0.0) + z2 * z3;
    let x = 0.5 * (a + z2.norm_sqr() + z3.norm_sqr() + q.norm_sqr() / a);
    let s = (x * x - 1.0).max(0.0).sqrt();
    if s.asinh() < 1e-3 {
        return Err(Error::Domain(format!("chart_metric needs y ≥ 1e-3, got {}", s.asinh())));
    }
    let y = s.asinh();
    let d = p.derivatives(y)?;
    let xa = [
        0.5 * (z1.conj() - q.norm_sqr() / (z1 * a)),
        0.5 * (z2.conj() + z3 * q.conj() / a),
        0.5 * (z3.conj() + z2 * q.conj() / a),
    ];
    let z1sq_bar = z1 * z1 * z1.conj();
    let mut xab = [[Complex64::new(0.0, 0.0); 3]; 3];
    xab[0][0] = Complex64::new(0.5 * (1.0 + q.norm_sqr() / (a * a)), 0.0);
    xab[0][1] = -0.5 * q * z3.conj() / z1sq_bar;
    xab[0][2] = -0.5 * q * z2.conj() / z1sq_bar;
    xab[1][1] = Complex64::new(0.5 * (1.0 + z3.norm_sqr() / a), 0.0);
    xab[1][2] = 0.5 * z3 * z2.conj() / a;
    xab[2][2] = Complex64::new(0.5 * (1.0 + z2.norm_sqr() / a), 0.0);
    for i in 0..3 {
        for j in 0..i {
            xab[i][j] = xab[j][i].conj();
        }
    }
    let mut h = [[Complex64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let outer = xa[i] * xa[j].conj();
            let yij = xab[i][j] / s - outer * (x / (s * s * s));
            h[i][j] = outer * (d[2] / (s * s)) + yij * d[1];
        }
    }
    Ok(h)
}

pub fn det3(m: &Mat3C) -> Complex64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RicciClass {
    PositiveDefinite,
    NegativeDefinite,
    Flat,
    Mixed,
}

/// Sign pattern of the Ricci components on a uniform grid of [0, y_max]; a
/// component counts as zero when below 10⁻⁶ of the metric at that point.
/// Zeros mixed with one strict sign (asymptotic decay) keep that sign.
pub fn classify_ricci(p: &MetricProfile, y_max: f64) -> RicciClass {
    const N: usize = 64;
    let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);
    for i in 0..=N {
        let y = y_max * i as f64 / N as f64;
        let pt = DiagonalPoint::from_y(y);
        let (Ok(h), Ok(r)) = (metric_at(p, &pt), ricci_components(p, &pt)) else {
            return RicciClass::Mixed;
        };
        let tol = 1e-6 * h.max_abs();
        for v in r.as_array() {
            if v.abs() <= tol {
                zero += 1;
            } else if v > 0.0 {
                pos += 1;
            } else {
                neg += 1;
            }
        }
    }
    match (pos, neg, zero) {
        (0, 0, _) => RicciClass::Flat,
        (_, 0, _) => RicciClass::PositiveDefinite,
        (0, _, _) => RicciClass::NegativeDefinite,
        _ => RicciClass::Mixed,
    }
}

/// One row of the curvature curve, at the Λ point z1 = e^{y/2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub y: f64,
    pub s: f64,
    pub rho_potential: f64,
    pub h11: f64,
    pub h22: f64,
    pub r11: f64,
    pub r22: f64,
}

pub fn curvature_curve(p: &MetricProfile, y_max: f64, n: usize) -> Result<Vec<CurvatureSample>> {
    (0..=n)
        .map(|i| {
            let y = y_max * i as f64 / n as f64;
            let pt = DiagonalPoint::from_y(y);
            let h = metric_at(p, &pt)?;
            let r = ricci_components(p, &pt)?;
            Ok(CurvatureSample {
                y,
                s: scalar_curvature(p, y)?,
                rho_potential: ricci_potential(p, y)?,
                h11: h.h11,
                h22: h.h22,
                r11: r.h11,
                r22: r.h22,
            })
        })
        .collect()
}

pub fn write_curvature_csv<W: Write>(mut w: W, rows: &[CurvatureSample]) -> std::io::Result<()> {
    writeln!(w, "y,s,rho_potential,h11,h22,r11,r22")?;
    for r in rows {
        writeln!(w, "{},{},{},{},{},{},{}", r.y, r.s, r.rho_potential, r.h11, r.h22, r.r11, r.r22)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{builtin, Builtin};
    use approx::assert_relative_eq;

    fn p(b: Builtin) -> MetricProfile {
        builtin(b).unwrap()
    }

    #[test]
    fn metric_examples() {
        let h = metric_at(&p(Builtin::Quadratic), &DiagonalPoint::from_y(0.0)).unwrap();
        assert_eq!((h.h11, h.h22, h.h33), (2.0, 1.0, 1.0));
        for y in [0.3, 1.0, 4.0] {
            let h = metric_at(&p(Builtin::CoshInduced), &DiagonalPoint::from_y(y)).unwrap();
            assert_relative_eq!(h.h22, 0.5, max_relative = 1e-14);
        }
        let e = std::f64::consts::E;
        let pt = DiagonalPoint::new(Complex64::new(e, 0.0)).unwrap();
        assert_relative_eq!(pt.y(), 2.0, max_relative = 1e-15);
        let neg = crate::profiles::parse_profile("-y^2").unwrap().into_profile("neg");
        assert!(matches!(metric_at(&neg, &pt), Err(Error::InadmissibleProfile(_))));
        assert!(DiagonalPoint::new(Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn ricci_potential_examples() {
        let y: f64 = 1.0;
        let want = -2.0 * ((2.0 / y.sinh()).powi(2) * 2.0).ln();
        assert_relative_eq!(ricci_potential(&p(Builtin::Quadratic), y).unwrap(), want, max_relative = 1e-14);
        // Lump: ρ̃ = −2 ln[(y cosh y − sinh y)(sinh 2y − 2y)²/sinh⁹ y] + const.
        let lump = p(Builtin::Lump);
        let closed =
            |y: f64| -2.0 * ((y * y.cosh() - y.sinh()) * ((2.0 * y).sinh() - 2.0 * y).powi(2) / y.sinh().powi(9)).ln();
        let c0 = ricci_potential(&lump, 0.5).unwrap() - closed(0.5);
        for y in [0.8, 1.5, 3.0, 6.0] {
            assert_relative_eq!(ricci_potential(&lump, y).unwrap() - closed(y), c0, epsilon = 1e-10);
        }
    }

    #[test]
    fn ricci_signs_match_the_examples() {
        for y in [0.5, 1.0, 2.0, 3.0] {
            let pt = DiagonalPoint::from_y(y);
            let c = ricci_components(&p(Builtin::CoshInduced), &pt).unwrap();
            assert!(c.as_array().iter().all(|&v| v < 0.0));
            let q = ricci_components(&p(Builtin::Quadratic), &pt).unwrap();
            assert!(q.as_array().iter().all(|&v| v > 0.0));
            let s = ricci_components(&p(Builtin::Stenzel(3.0)), &pt).unwrap();
            assert!(s.max_abs() < 1e-8, "{s:?}");
        }
        assert_eq!(classify_ricci(&p(Builtin::Stenzel(3.0)), 8.0), RicciClass::Flat);
        assert_eq!(classify_ricci(&p(Builtin::Lump), 8.0), RicciClass::PositiveDefinite);
        assert_eq!(classify_ricci(&p(Builtin::CoshInduced), 8.0), RicciClass::NegativeDefinite);
        assert_eq!(classify_ricci(&p(Builtin::Quadratic), 8.0), RicciClass::PositiveDefinite);
    }

    #[test]
    fn scalar_curvature_examples() {
        let st = p(Builtin::Stenzel(3.0));
        for i in 0..=48 {
            let y = 0.2 + 4.8 * i as f64 / 48.0;
            assert!(scalar_curvature(&st, y).unwrap().abs() <= 1e-6);
        }
        let lump = p(Builtin::Lump);
        let mut prev = 0.0;
        for i in 0..=48 {
            let y = 0.2 + 4.8 * i as f64 / 48.0;
            let s = scalar_curvature(&lump, y).unwrap();
            assert!(s > prev, "s({y}) = {s} not increasing");
            prev = s;
        }
        assert!(scalar_curvature(&lump, 12.0).unwrap() > 1e3 * prev);
        let q = p(Builtin::Quadratic);
        let via_div = scalar_curvature_divergence_form(&q, 1.0, 1e-3).unwrap();
        assert_relative_eq!(scalar_curvature(&q, 1.0).unwrap(), via_div, max_relative = 1e-8);
        let via_div = scalar_curvature_divergence_form(&lump, 1.3, 1e-3).unwrap();
        assert_relative_eq!(scalar_curvature(&lump, 1.3).unwrap(), via_div, max_relative = 1e-8);
    }

    #[test]
    fn small_y_extrapolation_matches_closed_forms() {
        // cosh: s = −2/cosh³y − 4/cosh y; quadratic: s = g'' + 2g'/y, s(0) = 2.
        let ch = p(Builtin::CoshInduced);
        for y in [0.0f64, 0.05, 0.1, 0.149] {
            let want = -2.0 / y.cosh().powi(3) - 4.0 / y.cosh();
            assert_relative_eq!(scalar_curvature(&ch, y).unwrap(), want, max_relative = 1e-4);
        }
        let q = p(Builtin::Quadratic);
        assert_relative_eq!(scalar_curvature(&q, 0.0).unwrap(), 2.0, max_relative = 1e-4);
        let y: f64 = 0.1;
        let (g1, g2) = (2.0 / y.tanh() - 2.0 / y, 2.0 / (y * y) - 2.0 / y.sinh().powi(2));
        assert_relative_eq!(scalar_curvature(&q, y).unwrap(), g2 + 2.0 * g1 / y, max_relative = 1e-4);
        let r = ricci_components(&q, &DiagonalPoint::from_y(0.0)).unwrap();
        assert_relative_eq!(r.h11, 4.0 / 3.0, max_relative = 1e-4);
        assert_relative_eq!(r.h22, 2.0 / 3.0, max_relative = 1e-4);
    }

    #[test]
    fn doubling_the_potential_scales_metric_and_fixes_ricci() {
        let lump = p(Builtin::Lump);
        let two = lump.scaled(2.0).unwrap();
        for y in [0.1, 0.7, 2.5] {
            let pt = DiagonalPoint::from_y(y);
            let (a, b) = (metric_at(&lump, &pt).unwrap(), metric_at(&two, &pt).unwrap());
            assert_eq!(b.as_array(), a.as_array().map(|v| 2.0 * v));
            let (ra, rb) = (ricci_components(&lump, &pt).unwrap(), ricci_components(&two, &pt).unwrap());
            for k in 0..3 {
                assert!((ra.as_array()[k] - rb.as_array()[k]).abs() < 1e-12 * ra.max_abs());
            }
        }
    }

    #[test]
    fn csv_has_the_documented_columns() {
        let rows = curvature_curve(&p(Builtin::Lump), 3.0, 6).unwrap();
        let mut buf = Vec::new();
        write_curvature_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("y,s,rho_potential,h11,h22,r11,r22\n"));
        assert_eq!(text.lines().count(), 8);
    }

    #[test]
    fn chart_metric_is_the_hessian_of_the_potential() {
        use crate::numerics::{central_hessian_complex, default_step};
        use crate::sl2c::{chart_inverse, y_of};
        let lump = p(Builtin::Lump);
        let pts = [
            [Complex64::new(1.4, 0.3), Complex64::new(0.2, -0.5), Complex64::new(0.7, 0.1)],
            [Complex64::new(0.6, -0.2), Complex64::new(-0.3, 0.0), Complex64::new(0.1, 0.9)],
            [Complex64::new(2.5, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
        ];
        for z in pts {
            let pot = |w: &[Complex64; 3]| lump.f(y_of(&chart_inverse(w[0], w[1], w[2]).unwrap())).unwrap();
            let fd = central_hessian_complex(pot, &z, default_step(&z)).unwrap();
            let h = chart_metric(&lump, &z).unwrap();
            let scale = h.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
            for i in 0..3 {
                for j in 0..3 {
                    assert!(
                        (h[i][j] - fd[i][j]).norm() < 1e-7 * scale,
                        "{z:?} [{i}][{j}]: {} vs {}",
                        h[i][j],
                        fd[i][j]
                    );
                }
            }
            assert!(det3(&h).re > 0.0);
        }
        let on_lambda = chart_metric(&lump, &pts[2]).unwrap();
        let diag = metric_at(&lump, &DiagonalPoint::new(pts[2][0]).unwrap()).unwrap();
        assert!((on_lambda[0][0].re - diag.h11).abs() < 1e-12 * diag.h11);
        assert!((on_lambda[1][1].re - diag.h22).abs() < 1e-12 * diag.h22);
    }
}
