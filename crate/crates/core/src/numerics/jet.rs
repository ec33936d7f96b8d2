//! Truncated Taylor arithmetic to order 4.
//!
//! A [`Jet4`] stores `c[k] = f^(k)(y0) / k!` for k = 0..=4. Arithmetic
//! follows the truncated Leibniz rule; elementary functions are applied by
//! composing their derivative stack at `c[0]` with the nilpotent part.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};

const FACT: [f64; 5] = [1.0, 1.0, 2.0, 6.0, 24.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet4 {
    pub c: [f64; 5],
}

impl Jet4 {
    pub fn new(c: [f64; 5]) -> Self {
        Self { c }
    }

    pub fn constant(v: f64) -> Self {
        Self { c: [v, 0.0, 0.0, 0.0, 0.0] }
    }

    /// The identity function seeded at `y`.
    pub fn variable(y: f64) -> Self {
        Self { c: [y, 1.0, 0.0, 0.0, 0.0] }
    }

    /// Build a jet from the derivative values f, f', .., f''''.
    pub fn from_derivatives(d: [f64; 5]) -> Self {
        let mut c = [0.0; 5];
        for k in 0..5 {
            c[k] = d[k] / FACT[k];
        }
        Self { c }
    }

    /// The jet of an antiderivative F with F(y0) = `value` and F' given by `fp`.
    pub fn antiderivative(value: f64, fp: &Jet4) -> Self {
        Self { c: [value, fp.c[0], fp.c[1] / 2.0, fp.c[2] / 3.0, fp.c[3] / 4.0] }
    }

    /// k-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> f64 {
        self.c[k] * FACT[k]
    }

    pub fn derivatives(&self) -> [f64; 5] {
        let mut d = [0.0; 5];
        for k in 0..5 {
            d[k] = self.derivative(k);
        }
        d
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.is_finite())
    }

    /// True when every non-constant coefficient vanishes.
    pub fn is_constant(&self) -> bool {
        self.c[1..].iter().all(|&v| v == 0.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut c = self.c;
        c.iter_mut().for_each(|v| *v *= s);
        Self { c }
    }

    /// Jet of y -> f(-y) at -y0, given the jet of f at y0.
    pub fn reflect(&self) -> Self {
        let mut c = self.c;
        c[1] = -c[1];
        c[3] = -c[3];
        Self { c }
    }

    /// Apply an outer function given its derivatives g, g', .., g'''' at `c[0]`.
    pub fn compose(&self, g: [f64; 5]) -> Self {
        let mut h = *self;
        h.c[0] = 0.0;
        let h2 = h * h;
        let h3 = h2 * h;
        let h4 = h3 * h;
        let mut out = [g[0], 0.0, 0.0, 0.0, 0.0];
        for k in 1..5 {
            out[k] = g[1] * h.c[k] + g[2] / 2.0 * h2.c[k] + g[3] / 6.0 * h3.c[k] + g[4] / 24.0 * h4.c[k];
        }
        Self { c: out }
    }

    pub fn recip(&self) -> Result<Self> {
        let x = self.c[0];
        if x == 0.0 {
            return Err(Error::JetDomain("division by a jet with zero value"));
        }
        let r = 1.0 / x;
        Ok(self.compose([r, -r * r, 2.0 * r.powi(3), -6.0 * r.powi(4), 24.0 * r.powi(5)]))
    }

    pub fn try_div(&self, rhs: &Jet4) -> Result<Self> {
        let b0 = rhs.c[0];
        if b0 == 0.0 {
            return Err(Error::JetDomain("division by a jet with zero value"));
        }
        let mut q = [0.0; 5];
        for k in 0..5 {
            let mut s = self.c[k];
            for j in 1..=k {
                s -= rhs.c[j] * q[k - j];
            }
            q[k] = s / b0;
        }
        Ok(Self { c: q })
    }

    pub fn exp(&self) -> Self {
        let e = self.c[0].exp();
        self.compose([e; 5])
    }

    pub fn ln(&self) -> Result<Self> {
        let x = self.c[0];
        if x <= 0.0 || x.is_nan() {
            return Err(Error::JetDomain("logarithm of a non-positive jet"));
        }
        let r = 1.0 / x;
        Ok(self.compose([x.ln(), r, -r * r, 2.0 * r.powi(3), -6.0 * r.powi(4)]))
    }

    /// Real power with a constant exponent; requires a positive base unless
    /// `p` is a non-negative integer.
    pub fn powf(&self, p: f64) -> Result<Self> {
        if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
            return self.powi(p as i32);
        }
        let x = self.c[0];
        if x <= 0.0 || x.is_nan() {
            return Err(Error::JetDomain("non-integer power of a non-positive jet"));
        }
        let mut g = [0.0; 5];
        let mut coef = 1.0;
        for (k, gk) in g.iter_mut().enumerate() {
            *gk = coef * x.powf(p - k as f64);
            coef *= p - k as f64;
        }
        Ok(self.compose(g))
    }

    pub fn powi(&self, n: i32) -> Result<Self> {
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let mut acc = Jet4::constant(1.0);
        let mut base = *self;
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.c[0] <= 0.0 {
            return Err(Error::JetDomain("square root of a non-positive jet"));
        }
        self.powf(0.5)
    }

    /// General power a^b = exp(b ln a).
    pub fn pow(&self, b: &Jet4) -> Result<Self> {
        if b.is_constant() {
            return self.powf(b.c[0]);
        }
        Ok((*b * self.ln()?).exp())
    }

    pub fn sinh(&self) -> Self {
        let (s, c) = (self.c[0].sinh(), self.c[0].cosh());
        self.compose([s, c, s, c, s])
    }

    pub fn cosh(&self) -> Self {
        let (s, c) = (self.c[0].sinh(), self.c[0].cosh());
        self.compose([c, s, c, s, c])
    }

    pub fn tanh(&self) -> Self {
        let x = self.c[0];
        let t = x.tanh();
        let s = 1.0 / (x.cosh() * x.cosh());
        self.compose([t, s, -2.0 * t * s, -2.0 * s * s + 4.0 * t * t * s, 16.0 * t * s * s - 8.0 * t.powi(3) * s])
    }

    pub fn coth(&self) -> Result<Self> {
        let x = self.c[0];
        if x == 0.0 {
            return Err(Error::JetDomain("coth at zero"));
        }
        let c = 1.0 / x.tanh();
        let q = 1.0 / (x.sinh() * x.sinh());
        Ok(self.compose([c, -q, 2.0 * c * q, -2.0 * q * q - 4.0 * c * c * q, 16.0 * c * q * q + 8.0 * c.powi(3) * q]))
    }

    /// y coth y composed with this jet; the removable singularity at 0 is
    /// handled by a series below |x| < 0.1.
    pub fn ycoth(&self) -> Self {
        self.compose(ycoth_derivatives(self.c[0]))
    }
}

/// Derivatives 0..=4 of u(y) = y coth y.
pub fn ycoth_derivatives(y: f64) -> [f64; 5] {
    if y.abs() < 0.1 {
        let a = ycoth_series();
        let mut d = [0.0; 5];
        // u = sum a_n y^(2n); differentiate term by term.
        for (n, &an) in a.iter().enumerate() {
            let p = 2 * n;
            for k in 0..5 {
                if p < k {
                    continue;
                }
                let mut fall = 1.0;
                for j in 0..k {
                    fall *= (p - j) as f64;
                }
                d[k] += an * fall * y.powi((p - k) as i32);
            }
        }
        return d;
    }
    let c = 1.0 / y.tanh();
    let s2 = 1.0 / (y.sinh() * y.sinh());
    let u0 = y * c;
    let u1 = c - y * s2;
    let u2 = 2.0 * s2 * (y * c - 1.0);
    let b = -2.0 * y * c * c + 3.0 * c - y * s2;
    let u3 = 2.0 * s2 * b;
    let bp = -2.0 * c * c + 6.0 * y * c * s2 - 4.0 * s2;
    let u4 = 2.0 * s2 * (-2.0 * c * b + bp);
    [u0, u1, u2, u3, u4]
}

/// Taylor coefficients of y coth y in powers of y^2.
fn ycoth_series() -> &'static [f64; 12] {
    static S: OnceLock<[f64; 12]> = OnceLock::new();
    S.get_or_init(|| {
        // y coth y = cosh y / (sinh y / y): divide the two even series.
        let mut a = [0.0; 12];
        let mut b = [0.0; 12];
        let mut f = 1.0;
        for n in 0..12 {
            if n > 0 {
                f *= (2 * n - 1) as f64 * (2 * n) as f64;
            }
            a[n] = 1.0 / f;
            b[n] = 1.0 / (f * (2 * n + 1) as f64);
        }
        let mut c = [0.0; 12];
        for n in 0..12 {
            let mut s = a[n];
            for k in 1..=n {
                s -= b[k] * c[n - k];
            }
            c[n] = s;
        }
        c
    })
}

impl Add for Jet4 {
    type Output = Jet4;
    fn add(self, rhs: Jet4) -> Jet4 {
        let mut c = self.c;
        for k in 0..5 {
            c[k] += rhs.c[k];
        }
        Jet4 { c }
    }
}

impl Sub for Jet4 {
    type Output = Jet4;
    fn sub(self, rhs: Jet4) -> Jet4 {
        let mut c = self.c;
        for k in 0..5 {
            c[k] -= rhs.c[k];
        }
        Jet4 { c }
    }
}

impl Mul for Jet4 {
    type Output = Jet4;
    fn mul(self, rhs: Jet4) -> Jet4 {
        let mut c = [0.0; 5];
        for i in 0..5 {
            for j in 0..5 - i {
                c[i + j] += self.c[i] * rhs.c[j];
            }
        }
        Jet4 { c }
    }
}

impl Neg for Jet4 {
    type Output = Jet4;
    fn neg(self) -> Jet4 {
        self.scale(-1.0)
    }
}

impl Add<f64> for Jet4 {
    type Output = Jet4;
    fn add(mut self, rhs: f64) -> Jet4 {
        self.c[0] += rhs;
        self
    }
}

impl Mul<f64> for Jet4 {
    type Output = Jet4;
    fn mul(self, rhs: f64) -> Jet4 {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fd_derivs(f: impl Fn(f64) -> f64, y: f64, h: f64) -> [f64; 3] {
        let d1 = (f(y - 2.0 * h) - 8.0 * f(y - h) + 8.0 * f(y + h) - f(y + 2.0 * h)) / (12.0 * h);
        let d2 = (-f(y - 2.0 * h) + 16.0 * f(y - h) - 30.0 * f(y) + 16.0 * f(y + h) - f(y + 2.0 * h)) / (12.0 * h * h);
        let d3 = (f(y + 2.0 * h) - 2.0 * f(y + h) + 2.0 * f(y - h) - f(y - 2.0 * h)) / (2.0 * h * h * h);
        [d1, d2, d3]
    }

    #[test]
    fn ycoth_second_derivative_matches_closed_form() {
        // u'' = 2 csch^2 y (y coth y - 1)
        let y: f64 = 0.7;
        let exact = 2.0 / y.sinh().powi(2) * (y / y.tanh() - 1.0);
        let j = Jet4::variable(y).ycoth();
        assert_relative_eq!(j.derivative(2), exact, max_relative = 1e-12);
        let via_ops = Jet4::variable(y) * Jet4::variable(y).coth().unwrap();
        for k in 0..5 {
            assert_relative_eq!(j.c[k], via_ops.c[k], max_relative = 1e-11, epsilon = 1e-14);
        }
    }

    #[test]
    fn ycoth_series_matches_direct_at_crossover() {
        let below = ycoth_derivatives(0.1 - 1e-15);
        let above = ycoth_derivatives(0.1 + 1e-15);
        for k in 0..5 {
            assert!((below[k] - above[k]).abs() < 1e-9 * (1.0 + above[k].abs()), "order {k}");
        }
        let s = ycoth_derivatives(0.0);
        assert_relative_eq!(s[0], 1.0);
        assert_relative_eq!(s[2], 2.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(s[4], -24.0 / 45.0, max_relative = 1e-14);
    }

    #[test]
    fn elementary_functions_match_finite_differences() {
        let y = 0.83;
        type Case = (fn(Jet4) -> Jet4, fn(f64) -> f64);
        let cases: Vec<Case> = vec![
            (|j| j.sinh() * j.cosh(), |x| x.sinh() * x.cosh()),
            (|j| j.tanh().try_div(&(j + 2.0)).unwrap(), |x| x.tanh() / (x + 2.0)),
            (|j| j.coth().unwrap().exp(), |x| (1.0 / x.tanh()).exp()),
            (|j| j.ln().unwrap().powi(3).unwrap(), |x| x.ln().powi(3)),
            (|j| j.sqrt().unwrap() * j.powf(1.7).unwrap(), |x| x.sqrt() * x.powf(1.7)),
            (|j| j.pow(&j).unwrap(), |x| x.powf(x)),
        ];
        for (jf, f) in cases {
            let j = jf(Jet4::variable(y));
            let fd = fd_derivs(f, y, 1e-3);
            assert_relative_eq!(j.value(), f(y), max_relative = 1e-14);
            assert_relative_eq!(j.derivative(1), fd[0], max_relative = 1e-8);
            assert_relative_eq!(j.derivative(2), fd[1], max_relative = 1e-6);
            assert_relative_eq!(j.derivative(3), fd[2], max_relative = 1e-4);
        }
    }

    #[test]
    fn fourth_derivative_of_known_functions() {
        let y: f64 = 0.4;
        let j = Jet4::variable(y);
        assert_relative_eq!(j.exp().derivative(4), y.exp(), max_relative = 1e-14);
        assert_relative_eq!(j.ln().unwrap().derivative(4), -6.0 / y.powi(4), max_relative = 1e-13);
        assert_relative_eq!(j.powi(5).unwrap().derivative(4), 120.0 * y, max_relative = 1e-13);
        // (tanh)'''' = 16 t s^2 - 8 t^3 s
        let t = y.tanh();
        let s = 1.0 - t * t;
        assert_relative_eq!(j.tanh().derivative(4), 16.0 * t * s * s - 8.0 * t.powi(3) * s, max_relative = 1e-12);
    }

    #[test]
    fn domain_errors_are_reported() {
        assert!(Jet4::constant(0.0).recip().is_err());
        assert!(Jet4::variable(1.0).try_div(&Jet4::variable(0.0)).is_err());
        assert!(Jet4::variable(-1.0).ln().is_err());
        assert!(Jet4::variable(0.0).sqrt().is_err());
        assert!(Jet4::variable(0.0).coth().is_err());
        assert!(Jet4::variable(-2.0).powf(0.5).is_err());
        assert!(Jet4::variable(-2.0).powf(2.0).is_ok());
    }
}
