//! Dense 2×2 complex matrices, identified with (z1, z2, z3, z4) row-major.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type C64 = Complex64;

pub const fn c(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2C(pub [C64; 4]);

impl Mat2C {
    pub const fn new(z1: C64, z2: C64, z3: C64, z4: C64) -> Self {
        Self([z1, z2, z3, z4])
    }

    pub fn from_real(a: f64, b: f64, cc: f64, d: f64) -> Self {
        Self([c(a, 0.0), c(b, 0.0), c(cc, 0.0), c(d, 0.0)])
    }

    pub const fn identity() -> Self {
        Self([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
    }

    pub const fn zero() -> Self {
        Self([c(0.0, 0.0); 4])
    }

    pub fn diag(a: C64, d: C64) -> Self {
        Self([a, c(0.0, 0.0), c(0.0, 0.0), d])
    }

    /// Entry (i, j) with zero-based indices.
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.0[2 * i + j]
    }

    pub fn det(&self) -> C64 {
        let [a, b, cc, d] = self.0;
        a * d - b * cc
    }

    pub fn trace(&self) -> C64 {
        self.0[0] + self.0[3]
    }

    pub fn adjoint(&self) -> Self {
        let [a, b, cc, d] = self.0;
        Self([a.conj(), cc.conj(), b.conj(), d.conj()])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    /// Inverse of an invertible matrix.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() == 0.0 {
            return None;
        }
        let [a, b, cc, d] = self.0;
        Some(Self([d / det, -b / det, -cc / det, a / det]))
    }

    pub fn max_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Σ |z_k|², i.e. tr(m†m).
    pub fn frob_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).max_norm()
    }

    /// Matrix exponential via A = (tr/2) I + A0 with A0² = −det(A0) I.
    pub fn expm(&self) -> Self {
        let half_tr = self.trace() * 0.5;
        let a0 = *self - Mat2C::identity().scale(half_tr);
        let s = (-a0.det()).sqrt();
        let (ch, sh_over_s) = if s.norm() < 1e-4 {
            let s2 = s * s;
            (
                1.0 + s2 / 2.0 + s2 * s2 / 24.0 + s2 * s2 * s2 / 720.0,
                1.0 + s2 / 6.0 + s2 * s2 / 120.0 + s2 * s2 * s2 / 5040.0,
            )
        } else {
            (s.cosh(), s.sinh() / s)
        };
        (Mat2C::identity().scale(ch) + a0.scale(sh_over_s)).scale(half_tr.exp())
    }
}

impl Add for Mat2C {
    type Output = Mat2C;
    fn add(self, r: Mat2C) -> Mat2C {
        Mat2C([self.0[0] + r.0[0], self.0[1] + r.0[1], self.0[2] + r.0[2], self.0[3] + r.0[3]])
    }
}

impl Sub for Mat2C {
    type Output = Mat2C;
    fn sub(self, r: Mat2C) -> Mat2C {
        Mat2C([self.0[0] - r.0[0], self.0[1] - r.0[1], self.0[2] - r.0[2], self.0[3] - r.0[3]])
    }
}

impl Neg for Mat2C {
    type Output = Mat2C;
    fn neg(self) -> Mat2C {
        Mat2C(self.0.map(|z| -z))
    }
}

impl Mul for Mat2C {
    type Output = Mat2C;
    fn mul(self, r: Mat2C) -> Mat2C {
        let [a, b, cc, d] = self.0;
        let [e, f, g, h] = r.0;
        Mat2C([a * e + b * g, a * f + b * h, cc * e + d * g, cc * f + d * h])
    }
}

impl Serialize for Mat2C {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.0.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat2C {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(d)?;
        if pairs.len() != 4 {
            return Err(serde::de::Error::invalid_length(pairs.len(), &"four [re, im] pairs"));
        }
        Ok(Mat2C([
            c(pairs[0][0], pairs[0][1]),
            c(pairs[1][0], pairs[1][1]),
            c(pairs[2][0], pairs[2][1]),
            c(pairs[3][0], pairs[3][1]),
        ]))
    }
}

/// Pauli matrices τ1, τ2, τ3.
pub fn pauli() -> [Mat2C; 3] {
    let o = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [Mat2C::new(o, one, one, o), Mat2C::new(o, -i, i, o), Mat2C::new(one, o, o, -one)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_row_major_pairs() {
        let m = Mat2C::new(c(1.0, 2.0), c(3.0, 0.0), c(0.0, -1.0), c(0.5, 0.5));
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[1.0,2.0],[3.0,0.0],[0.0,-1.0],[0.5,0.5]]");
        let back: Mat2C = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<Mat2C>("[[1,2]]").is_err());
    }

    #[test]
    fn expm_matches_series() {
        let a = Mat2C::new(c(0.3, 0.1), c(-0.7, 0.2), c(0.4, -0.5), c(0.1, 0.9));
        let mut term = Mat2C::identity();
        let mut sum = Mat2C::identity();
        for k in 1..40 {
            term = (term * a).scale(c(1.0 / k as f64, 0.0));
            sum = sum + term;
        }
        assert!(a.expm().dist(&sum) < 1e-13);
        let small = a.scale(c(1e-6, 0.0));
        let approx = Mat2C::identity() + small + (small * small).scale(c(0.5, 0.0));
        assert!(small.expm().dist(&approx) < 1e-15);
    }

    #[test]
    fn pauli_algebra() {
        let [t1, t2, t3] = pauli();
        assert!((t1 * t2).dist(&t3.scale(c(0.0, 1.0))) < 1e-15);
        for t in [t1, t2, t3] {
            assert!((t * t).dist(&Mat2C::identity()) < 1e-15);
            assert_eq!(t.adjoint(), t);
        }
    }
}
