//! Built-in profiles: the lump, Stenzel's Ricci-flat profile, y², cosh y, and
//! two finite-volume families used for the quantization regimes.

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

use super::{MetricProfile, ProfileFn};
use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, Jet4};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Builtin {
    Lump,
    Stenzel(f64),
    Quadratic,
    CoshInduced,
    /// f = ln cosh(a y)/a: finite volume with k(f) = 2a.
    LogCosh(f64),
    /// Finite volume with a Gaussian approach f' → 1, so k(f) = +∞.
    GaussianTail,
}

pub fn builtin(name: Builtin) -> Result<MetricProfile> {
    Ok(match name {
        Builtin::Lump => MetricProfile::new("lump", Lump),
        Builtin::Quadratic => MetricProfile::new("quadratic", Quadratic),
        Builtin::CoshInduced => MetricProfile::new("cosh", CoshInduced),
        Builtin::Stenzel(c) => MetricProfile::new(format!("stenzel:c={c}"), Stenzel::new(c)?),
        Builtin::LogCosh(a) => MetricProfile::new(format!("logcosh:a={a}"), LogCosh::new(a)?),
        Builtin::GaussianTail => MetricProfile::new("gaussian-tail", GaussianTail::new()),
    })
}

/// ln sinh y for y > 0 without overflow.
pub(crate) fn ln_sinh(y: f64) -> f64 {
    if y < 1.0 {
        y.sinh().ln()
    } else {
        y - LN_2 + (-(-2.0 * y).exp()).ln_1p()
    }
}

/// ln cosh y without overflow.
pub(crate) fn ln_cosh(y: f64) -> f64 {
    let a = y.abs();
    a - LN_2 + (-2.0 * a).exp().ln_1p()
}

fn even(y: f64, jet_at_abs: impl FnOnce(f64) -> Result<Jet4>) -> Result<Jet4> {
    if y < 0.0 {
        Ok(jet_at_abs(-y)?.reflect())
    } else {
        jet_at_abs(y)
    }
}

/// f = π y coth y.
#[derive(Debug, Clone, Copy)]
pub struct Lump;

impl ProfileFn for Lump {
    fn jet(&self, y: f64) -> Result<Jet4> {
        Ok(Jet4::variable(y).ycoth().scale(PI))
    }
    fn ln_f2(&self, y: f64) -> f64 {
        let a = y.abs();
        if a < 0.1 {
            return self.jet(a).map(|j| j.derivative(2).ln()).unwrap_or(f64::NAN);
        }
        // f'' = 2π csch²y (y coth y − 1)
        (2.0 * PI).ln() - 2.0 * ln_sinh(a) + (a / a.tanh() - 1.0).ln()
    }
    fn f_prime_limit(&self) -> Option<f64> {
        Some(PI)
    }
}

/// f = y².
#[derive(Debug, Clone, Copy)]
pub struct Quadratic;

impl ProfileFn for Quadratic {
    fn jet(&self, y: f64) -> Result<Jet4> {
        Ok(Jet4::new([y * y, 2.0 * y, 1.0, 0.0, 0.0]))
    }
    fn ln_f1(&self, y: f64) -> f64 {
        (2.0 * y).ln()
    }
    fn ln_f2(&self, _y: f64) -> f64 {
        2.0f64.ln()
    }
}

/// f = cosh y.
#[derive(Debug, Clone, Copy)]
pub struct CoshInduced;

impl ProfileFn for CoshInduced {
    fn jet(&self, y: f64) -> Result<Jet4> {
        Ok(Jet4::variable(y).cosh())
    }
    fn ln_f1(&self, y: f64) -> f64 {
        ln_sinh(y)
    }
    fn ln_f2(&self, y: f64) -> f64 {
        ln_cosh(y)
    }
}

/// Ricci-flat profile: (f')³ = c (sinh 2y − 2y)/4, f(0) = 0.
#[derive(Debug)]
pub struct Stenzel {
    c: f64,
    table: OnceLock<Vec<f64>>,
}

const STENZEL_PANEL: f64 = 0.25;
const STENZEL_TABLE_PANELS: usize = 1024;

fn gl20() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(20))
}

impl Stenzel {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("Stenzel constant must be positive, got {c}")));
        }
        Ok(Self { c, table: OnceLock::new() })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// T(y) = (sinh 2y − 2y)/(4y³) as a jet, so that f' = y (c T)^{1/3}.
    fn t_jet(y: f64) -> Result<Jet4> {
        let j = Jet4::variable(y);
        if y.abs() < 0.1 {
            // T = Σ_{n≥1} 2^{2n−1} y^{2n−2} / (2n+1)!
            let u = j * j;
            let mut coef = Vec::with_capacity(9);
            let mut fact = 6.0; // (2n+1)! for n = 1
            let mut pow2 = 2.0; // 2^{2n−1}
            for n in 1..=9 {
                if n > 1 {
                    fact *= (2 * n) as f64 * (2 * n + 1) as f64;
                    pow2 *= 4.0;
                }
                coef.push(pow2 / fact);
            }
            let mut acc = Jet4::constant(0.0);
            for &a in coef.iter().rev() {
                acc = acc * u + a;
            }
            return Ok(acc);
        }
        let two_y = j * 2.0;
        let num = two_y.sinh() - two_y;
        num.try_div(&(j * j * j * 4.0))
    }

    /// ln T for y > 20, where T itself would overflow the jet's Taylor terms.
    fn ln_t_jet_large(y: f64) -> Result<Jet4> {
        // ln T = 2y − ln 8 − 3 ln y + ln(1 − e^{−4y} − 4y e^{−2y})
        let j = Jet4::variable(y);
        let e2 = (j * -2.0).exp();
        let corr = (Jet4::constant(1.0) - e2 * e2 - j * e2 * 4.0).ln()?;
        Ok(j * 2.0 + (-(8.0f64.ln())) - j.ln()? * 3.0 + corr)
    }

    fn fprime_jet(&self, y: f64) -> Result<Jet4> {
        if y > 20.0 {
            let j = Jet4::variable(y);
            let lt = Self::ln_t_jet_large(y)?;
            return Ok((j.ln()? + (lt + self.c.ln()) * (1.0 / 3.0)).exp());
        }
        let t = Self::t_jet(y)?;
        Ok(Jet4::variable(y) * (t * self.c).powf(1.0 / 3.0)?)
    }

    fn fprime_value(&self, y: f64) -> f64 {
        self.fprime_jet(y).map(|j| j.value()).unwrap_or(f64::NAN)
    }

    fn panel_integral(&self, a: f64, b: f64) -> f64 {
        let (x, w) = gl20();
        let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
        x.iter().zip(w).map(|(xi, wi)| wi * self.fprime_value(m + h * xi)).sum::<f64>() * h
    }

    fn table(&self) -> &[f64] {
        self.table.get_or_init(|| {
            let mut t = Vec::with_capacity(STENZEL_TABLE_PANELS + 1);
            t.push(0.0);
            for k in 0..STENZEL_TABLE_PANELS {
                let a = k as f64 * STENZEL_PANEL;
                let v = t[k] + self.panel_integral(a, a + STENZEL_PANEL);
                t.push(v);
            }
            t
        })
    }

    /// f(y) = ∫_0^y f' for y ≥ 0.
    fn value(&self, y: f64) -> f64 {
        let table = self.table();
        let k = ((y / STENZEL_PANEL).floor() as usize).min(STENZEL_TABLE_PANELS);
        let mut acc = table[k];
        let mut a = k as f64 * STENZEL_PANEL;
        while y - a > STENZEL_PANEL {
            acc += self.panel_integral(a, a + STENZEL_PANEL);
            a += STENZEL_PANEL;
        }
        acc + self.panel_integral(a, y)
    }
}

impl ProfileFn for Stenzel {
    fn jet(&self, y: f64) -> Result<Jet4> {
        even(y, |a| {
            let fp = self.fprime_jet(a)?;
            Ok(Jet4::antiderivative(self.value(a), &fp))
        })
    }
    fn ln_f1(&self, y: f64) -> f64 {
        let a = y.abs();
        let lt =
            if a > 20.0 { Self::ln_t_jet_large(a).map(|j| j.value()) } else { Self::t_jet(a).map(|j| j.value().ln()) };
        match lt {
            Ok(lt) => a.ln() + (self.c.ln() + lt) / 3.0,
            Err(_) => f64::NAN,
        }
    }
    fn ln_f2(&self, y: f64) -> f64 {
        let a = y.abs();
        if a < 0.1 {
            return self.jet(a).map(|j| j.derivative(2).ln()).unwrap_or(f64::NAN);
        }
        // f'' = c sinh²y / (3 f'²)
        (self.c / 3.0).ln() + 2.0 * ln_sinh(a) - 2.0 * self.ln_f1(a)
    }
}

/// f = ln cosh(a y)/a.
#[derive(Debug, Clone, Copy)]
pub struct LogCosh {
    a: f64,
}

impl LogCosh {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(format!("logcosh rate must be positive, got {a}")));
        }
        Ok(Self { a })
    }
}

impl ProfileFn for LogCosh {
    fn jet(&self, y: f64) -> Result<Jet4> {
        let a = self.a;
        let fp = (Jet4::variable(y) * a).tanh();
        Ok(Jet4::antiderivative(ln_cosh(a * y) / a, &fp))
    }
    fn ln_f1(&self, y: f64) -> f64 {
        (self.a * y).tanh().ln()
    }
    fn ln_f2(&self, y: f64) -> f64 {
        self.a.ln() - 2.0 * ln_cosh(self.a * y)
    }
    fn f_prime_limit(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// f' = 1 − e^{−t²} for |t| ≥ 1 joined to an odd quintic on [−1, 1] that
/// matches value, first and second derivative at t = ±1.
#[derive(Debug, Clone, Copy)]
pub struct GaussianTail {
    /// f' = p1 t + p3 t³ + p5 t⁵ on |t| ≤ 1.
    p: [f64; 3],
    f_at_one: f64,
}

impl GaussianTail {
    pub fn new() -> Self {
        let e = (-1.0f64).exp();
        let (v, d1, d2) = (1.0 - e, 2.0 * e, -2.0 * e);
        // p1 + p3 + p5 = v;  p1 + 3p3 + 5p5 = d1;  6p3 + 20p5 = d2
        let p5 = ((d1 - v) - d2 / 3.0) / (4.0 - 20.0 / 3.0);
        let p3 = (d2 - 20.0 * p5) / 6.0;
        let p1 = v - p3 - p5;
        let f_at_one = p1 / 2.0 + p3 / 4.0 + p5 / 6.0;
        Self { p: [p1, p3, p5], f_at_one }
    }

    pub fn quintic_coefficients(&self) -> [f64; 3] {
        self.p
    }
}

impl Default for GaussianTail {
    fn default() -> Self {
        Self::new()
    }
}

impl ProfileFn for GaussianTail {
    fn jet(&self, y: f64) -> Result<Jet4> {
        even(y, |t| {
            let j = Jet4::variable(t);
            let [p1, p3, p5] = self.p;
            if t <= 1.0 {
                let u = j * j;
                let fp = j * ((u * p5 + p3) * u + p1);
                let f = t * t * (p1 / 2.0 + t * t * (p3 / 4.0 + t * t * p5 / 6.0));
                Ok(Jet4::antiderivative(f, &fp))
            } else {
                let fp = Jet4::constant(1.0) - (-(j * j)).exp();
                let half_sqrt_pi = 0.5 * PI.sqrt();
                let f = self.f_at_one + (t - 1.0) - half_sqrt_pi * (libm::erf(t) - libm::erf(1.0));
                Ok(Jet4::antiderivative(f, &fp))
            }
        })
    }
    fn ln_f2(&self, y: f64) -> f64 {
        let t = y.abs();
        if t <= 1.0 {
            return self.jet(t).map(|j| j.derivative(2).ln()).unwrap_or(f64::NAN);
        }
        (2.0 * t).ln() - t * t
    }
    fn analytic_order(&self) -> u8 {
        // f'''' jumps at |t| = 1.
        3
    }
    fn f_prime_limit(&self) -> Option<f64> {
        Some(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fd4(p: &MetricProfile, y: f64, h: f64) -> (f64, f64) {
        let f2 = |y: f64| p.f2(y).unwrap();
        let d3 = (f2(y - 2.0 * h) - 8.0 * f2(y - h) + 8.0 * f2(y + h) - f2(y + 2.0 * h)) / (12.0 * h);
        let d4 =
            (-f2(y - 2.0 * h) + 16.0 * f2(y - h) - 30.0 * f2(y) + 16.0 * f2(y + h) - f2(y + 2.0 * h)) / (12.0 * h * h);
        (d3, d4)
    }

    fn all() -> Vec<MetricProfile> {
        [
            Builtin::Lump,
            Builtin::Stenzel(3.0),
            Builtin::Quadratic,
            Builtin::CoshInduced,
            Builtin::LogCosh(1.5),
            Builtin::GaussianTail,
        ]
        .into_iter()
        .map(|b| builtin(b).unwrap())
        .collect()
    }

    #[test]
    fn lump_values_at_origin() {
        let p = builtin(Builtin::Lump).unwrap();
        let d = p.derivatives(0.0).unwrap();
        assert_relative_eq!(d[0], PI, max_relative = 1e-15);
        assert_eq!(d[1], 0.0);
        assert_relative_eq!(d[2], 2.0 * PI / 3.0, max_relative = 1e-14);
        assert_relative_eq!(p.f(1.0).unwrap(), PI / 1.0f64.tanh(), max_relative = 1e-15);
        let below = p.f(0.1 - 1e-13).unwrap();
        let direct = PI * 0.1 / 0.1f64.tanh();
        assert!((below - direct).abs() < 1e-10);
    }

    #[test]
    fn high_derivatives_match_finite_differences() {
        for p in all() {
            for y in [0.3, 1.0, 2.0, 5.0] {
                if p.label() == "gaussian-tail" && (y - 1.0f64).abs() < 0.1 {
                    continue;
                }
                let (d3, d4) = fd4(&p, y, 1e-3);
                let d = p.derivatives(y).unwrap();
                let s3 = d[3].abs().max(1e-3 * d[2].abs());
                let s4 = d[4].abs().max(1e-3 * d[2].abs());
                assert!((d[3] - d3).abs() <= 1e-5 * s3, "{} f''' at {y}: {} vs {d3}", p.label(), d[3]);
                assert!((d[4] - d4).abs() <= 1e-5 * s4, "{} f'''' at {y}: {} vs {d4}", p.label(), d[4]);
            }
        }
    }

    #[test]
    fn evenness_holds_for_builtins() {
        for p in all() {
            for y in [0.05, 0.4, 1.7, 6.0] {
                let (a, b) = (p.f(y).unwrap(), p.f(-y).unwrap());
                assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()), "{}", p.label());
                assert!((p.f1(y).unwrap() + p.f1(-y).unwrap()).abs() < 1e-12 * (1.0 + a.abs()));
            }
            assert_eq!(p.f1(0.0).unwrap(), 0.0, "{}", p.label());
        }
    }

    #[test]
    fn stenzel_solves_its_defining_equation() {
        let c = 3.0;
        let p = builtin(Builtin::Stenzel(c)).unwrap();
        for y in [0.5f64, 1.0, 2.0] {
            let fp = p.f1(y).unwrap();
            assert_relative_eq!(fp.powi(3), c * ((2.0 * y).sinh() - 2.0 * y) / 4.0, max_relative = 1e-13);
        }
        for i in 0..50 {
            let y = 0.1 + 4.9 * i as f64 / 49.0;
            let fp3 = p.jet(y).unwrap();
            let d = fp3.derivatives();
            let lhs = 3.0 * d[1] * d[1] * d[2];
            let rhs = c * y.sinh().powi(2);
            assert!((lhs - rhs).abs() <= 1e-8 * rhs, "y = {y}");
        }
        assert_relative_eq!(p.f2(0.0).unwrap(), 1.0, max_relative = 1e-14);
        // f is the integral of f'.
        let q = crate::numerics::integrate(|t| p.f1(t).unwrap(), 0.0, 3.3, 1e-13).unwrap();
        assert_relative_eq!(p.f(3.3).unwrap(), q.value, max_relative = 1e-12);
        let far = p.f(300.0).unwrap();
        assert!(far.is_finite() && far > 0.0);
        assert!(builtin(Builtin::Stenzel(0.0)).is_err());
    }

    #[test]
    fn stable_logs_agree_with_direct_values() {
        for p in all() {
            for y in [0.05, 0.7, 3.0, 12.0] {
                let d = p.derivatives(y).unwrap();
                assert!((p.ln_f2(y) - d[2].ln()).abs() < 1e-10, "{} ln f'' at {y}", p.label());
                assert!((p.ln_f1(y) - d[1].ln()).abs() < 1e-10, "{} ln f' at {y}", p.label());
            }
            assert!(p.ln_f2(200.0).is_finite(), "{}", p.label());
        }
    }

    #[test]
    fn gaussian_tail_blend_is_c2_in_fprime() {
        let g = GaussianTail::new();
        let [p1, p3, p5] = g.quintic_coefficients();
        let e = (-1.0f64).exp();
        assert_relative_eq!(p1 + p3 + p5, 1.0 - e, max_relative = 1e-14);
        assert_relative_eq!(p1 + 3.0 * p3 + 5.0 * p5, 2.0 * e, max_relative = 1e-14);
        assert_relative_eq!(6.0 * p3 + 20.0 * p5, -2.0 * e, max_relative = 1e-13);
        let p = builtin(Builtin::GaussianTail).unwrap();
        let (l, r) = (p.derivatives(1.0 - 1e-12).unwrap(), p.derivatives(1.0 + 1e-12).unwrap());
        for k in 0..4 {
            assert!((l[k] - r[k]).abs() < 1e-9, "order {k}: {} vs {}", l[k], r[k]);
        }
        assert_eq!(p.analytic_order(), 3);
    }
}
