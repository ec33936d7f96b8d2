//! Sparse complex polynomials in (z1, z2, z3, z4) and arithmetic modulo
//! D = z1z4 − z2z3 − 1.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Exponent = [u32; 4];

/// Polynomial with no stored zero coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly4 {
    terms: BTreeMap<Exponent, Complex64>,
}

fn total(e: &Exponent) -> u32 {
    e.iter().sum()
}

impl Poly4 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial([0; 4], c)
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn monomial(e: Exponent, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// z_k for k ∈ 1..=4.
    pub fn var(k: usize) -> Self {
        assert!((1..=4).contains(&k), "variable index {k} out of range");
        let mut e = [0; 4];
        e[k - 1] = 1;
        Self::monomial(e, Complex64::new(1.0, 0.0))
    }

    /// z1z4 − z2z3 − 1.
    pub fn ideal_generator() -> Self {
        Self::quadric() - Self::one()
    }

    /// w = z1z4 − z2z3.
    pub fn quadric() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let mut p = Self::monomial([1, 0, 0, 1], one);
        p.add_term([0, 1, 1, 0], -one);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Complex64)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exponent, c: Complex64) {
        let entry = self.terms.entry(e).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &Exponent) -> Complex64 {
        self.terms.get(e).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Terms in lex-descending order (z1 > z2 > z3 > z4).
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Complex64)> {
        self.terms.iter().rev()
    }

    /// Total degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(total).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(total);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self { terms: self.terms.iter().filter(|(e, _)| total(e) == d).map(|(e, c)| (*e, *c)).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c * s)))
    }

    /// ∂/∂z_k, k ∈ 1..=4.
    pub fn partial(&self, k: usize) -> Self {
        let i = k - 1;
        Self::from_terms(self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
            let mut f = *e;
            f[i] -= 1;
            (f, c * e[i] as f64)
        }))
    }

    pub fn eval(&self, z: &[Complex64; 4]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = *c;
                for k in 0..4 {
                    if e[k] > 0 {
                        v *= z[k].powu(e[k]);
                    }
                }
                v
            })
            .sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drop coefficients below `tol` in absolute value.
    pub fn prune(&self, tol: f64) -> Self {
        Self { terms: self.terms.iter().filter(|(_, c)| c.norm() > tol).map(|(e, c)| (*e, *c)).collect() }
    }

    fn lex_leading(&self) -> Option<(Exponent, Complex64)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, *c))
    }
}

impl std::ops::Add for Poly4 {
    type Output = Poly4;
    fn add(mut self, r: Poly4) -> Poly4 {
        for (e, c) in r.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl std::ops::Sub for Poly4 {
    type Output = Poly4;
    fn sub(mut self, r: Poly4) -> Poly4 {
        for (e, c) in r.terms {
            self.add_term(e, -c);
        }
        self
    }
}

impl std::ops::Mul for &Poly4 {
    type Output = Poly4;
    fn mul(self, r: &Poly4) -> Poly4 {
        let mut out = Poly4::zero();
        for (e, c) in &self.terms {
            for (f, d) in &r.terms {
                out.add_term([e[0] + f[0], e[1] + f[1], e[2] + f[2], e[3] + f[3]], c * d);
            }
        }
        out
    }
}

impl std::ops::Mul for Poly4 {
    type Output = Poly4;
    fn mul(self, r: Poly4) -> Poly4 {
        &self * &r
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64).round()
}

/// Normal form modulo D: every z1^a z4^b with k = min(a, b) > 0 is rewritten
/// with (z1z4)^k → (z2z3 + 1)^k. No monomial of the result contains both z1
/// and z4.
pub fn reduce_mod_ideal(p: &Poly4) -> Poly4 {
    let mut out = Poly4::zero();
    for (e, c) in &p.terms {
        let k = e[0].min(e[3]);
        if k == 0 {
            out.add_term(*e, *c);
            continue;
        }
        for j in 0..=k {
            out.add_term([e[0] - k, e[1] + j, e[2] + j, e[3] - k], c * binomial(k, j));
        }
    }
    out
}

/// Division of a homogeneous polynomial by w = z1z4 − z2z3 (lex order,
/// leading term z1z4). Returns the quotient when the remainder vanishes.
pub fn is_quadric_divisible(p: &Poly4) -> Result<(bool, Option<Poly4>)> {
    if !p.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let tol = 1e-13 * p.max_abs_coeff().max(1e-300);
    let w = Poly4::quadric();
    let mut rest = p.clone();
    let mut quotient = Poly4::zero();
    let mut remainder = Poly4::zero();
    while let Some((e, c)) = rest.lex_leading() {
        if c.norm() <= tol {
            rest.terms.remove(&e);
            continue;
        }
        if e[0] >= 1 && e[3] >= 1 {
            let q = Poly4::monomial([e[0] - 1, e[1], e[2], e[3] - 1], c);
            rest = rest - &q * &w;
            // The leading term cancels exactly; guard against rounding.
            rest.terms.remove(&e);
            quotient.add_term([e[0] - 1, e[1], e[2], e[3] - 1], c);
        } else {
            rest.terms.remove(&e);
            remainder.add_term(e, c);
        }
    }
    if remainder.is_zero() {
        Ok((true, Some(quotient)))
    } else {
        Ok((false, None))
    }
}

/// All monomials of total degree d, lex-descending.
pub fn monomials_of_degree(d: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            for c in (0..=d - a - b).rev() {
                out.push([a, b, c, d - a - b - c]);
            }
        }
    }
    out
}

/// Rank of p ↦ reduce_mod_ideal(p) on polynomials of degree ≤ m, computed by
/// Gaussian elimination on the monomial coordinates.
pub fn reduction_rank(m: u32) -> usize {
    let domain: Vec<Exponent> = (0..=m).flat_map(monomials_of_degree).collect();
    let index: BTreeMap<Exponent, usize> = domain.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut rows: Vec<Vec<f64>> = domain
        .iter()
        .map(|e| {
            let mut row = vec![0.0; domain.len()];
            for (f, c) in reduce_mod_ideal(&Poly4::monomial(*e, Complex64::new(1.0, 0.0))).terms() {
                row[index[f]] = c.re;
            }
            row
        })
        .collect();
    let cols = domain.len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows.len()).max_by(|&i, &j| rows[i][col].abs().total_cmp(&rows[j][col].abs())) else {
            break;
        };
        if rows[piv][col].abs() < 1e-9 {
            continue;
        }
        rows.swap(rank, piv);
        for i in rank + 1..rows.len() {
            let f = rows[i][col] / rows[rank][col];
            if f != 0.0 {
                for k in col..cols {
                    rows[i][k] -= f * rows[rank][k];
                }
            }
        }
        rank += 1;
    }
    rank
}

fn fmt_real(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v}")
}

fn fmt_coeff(c: &Complex64) -> String {
    let im = if c.im == 0.0 { 0.0 } else { c.im };
    let sign = if im.is_sign_negative() { "-" } else { "+" };
    format!("{}{}{}i", fmt_real(c.re), sign, fmt_real(im.abs()))
}

/// Canonical text: `re+im i * z1^a z2^b ...` joined by ` + `, lex-descending;
/// exponents of 1 are written bare and zero exponents omitted; `0` for zero.
impl fmt::Display for Poly4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", fmt_coeff(c))?;
            let vars: Vec<String> = (0..4)
                .filter(|&k| e[k] > 0)
                .map(|k| if e[k] == 1 { format!("z{}", k + 1) } else { format!("z{}^{}", k + 1, e[k]) })
                .collect();
            if !vars.is_empty() {
                write!(f, " * {}", vars.join(" "))?;
            }
        }
        Ok(())
    }
}

fn parse_coeff(s: &str, offset: usize) -> Result<Complex64> {
    let err = |m: &str| Error::Syntax { offset, message: format!("{m} in coefficient {s:?}") };
    let body = s.strip_suffix('i').ok_or_else(|| err("missing trailing i"))?;
    // The sign separating re and im is the last + or − not following an exponent marker.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(|| err("missing imaginary part"))?;
    let re = body[..split].parse::<f64>().map_err(|_| err("bad real part"))?;
    let im = body[split..].parse::<f64>().map_err(|_| err("bad imaginary part"))?;
    Ok(Complex64::new(re, im))
}

impl FromStr for Poly4 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Poly4::zero());
        }
        let mut out = Poly4::zero();
        let mut offset = 0;
        for term in s.split(" + ") {
            let (coeff, vars) = match term.split_once(" * ") {
                Some((c, v)) => (c, Some(v)),
                None => (term, None),
            };
            let c = parse_coeff(coeff.trim(), offset)?;
            let mut e = [0u32; 4];
            for v in vars.into_iter().flat_map(|v| v.split_whitespace()) {
                let (name, pow) = match v.split_once('^') {
                    Some((n, p)) => (
                        n,
                        p.parse::<u32>()
                            .map_err(|_| Error::Syntax { offset, message: format!("bad exponent in {v:?}") })?,
                    ),
                    None => (v, 1),
                };
                let k = match name {
                    "z1" => 0,
                    "z2" => 1,
                    "z3" => 2,
                    "z4" => 3,
                    _ => return Err(Error::UnknownIdentifier { name: name.to_string(), offset }),
                };
                e[k] += pow;
            }
            out.add_term(e, c);
            offset += term.len() + 3;
        }
        Ok(out)
    }
}

impl Serialize for Poly4 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn parse(s: &str) -> Poly4 {
        s.parse().unwrap()
    }

    #[test]
    fn reduction_examples() {
        let z14 = Poly4::monomial([1, 0, 0, 1], c(1.0));
        assert_eq!(reduce_mod_ideal(&z14), Poly4::monomial([0, 1, 1, 0], c(1.0)) + Poly4::one());
        let d = Poly4::ideal_generator();
        let member = &d * &(Poly4::var(1) + Poly4::var(2).scale(c(7.0)));
        assert!(reduce_mod_ideal(&member).is_zero());
        let sq = reduce_mod_ideal(&(&z14 * &z14));
        let z23 = Poly4::monomial([0, 1, 1, 0], c(1.0)) + Poly4::one();
        assert_eq!(sq, &z23 * &z23);
    }

    #[test]
    fn division_examples() {
        let w = Poly4::quadric();
        assert_eq!(is_quadric_divisible(&w).unwrap(), (true, Some(Poly4::one())));
        assert_eq!(is_quadric_divisible(&Poly4::monomial([2, 0, 0, 0], c(1.0))).unwrap(), (false, None));
        let q = Poly4::var(1) + Poly4::var(3);
        assert_eq!(is_quadric_divisible(&(&w * &q)).unwrap(), (true, Some(q)));
        assert_eq!(is_quadric_divisible(&(Poly4::var(1) + Poly4::one())), Err(Error::NotHomogeneous));
    }

    #[test]
    fn canonical_text() {
        let p = Poly4::monomial([2, 0, 0, 1], Complex64::new(1.5, -2.0)) + Poly4::var(3) + Poly4::one();
        assert_eq!(p.to_string(), "1.5-2i * z1^2 z4 + 1+0i * z3 + 1+0i");
        assert_eq!(parse(&p.to_string()), p);
        assert_eq!(Poly4::zero().to_string(), "0");
        assert_eq!(parse("1e-3+2.5e2i * z2^3"), Poly4::monomial([0, 3, 0, 0], Complex64::new(1e-3, 250.0)));
        assert!(matches!("1+0i * z5".parse::<Poly4>(), Err(Error::UnknownIdentifier { .. })));
        assert!(matches!("1+0 * z1".parse::<Poly4>(), Err(Error::Syntax { .. })));
    }

    #[test]
    fn quotient_rank_matches_the_count() {
        let binom = |n: u32, k: u32| binomial(n, k) as usize;
        for m in 2..=5 {
            assert_eq!(reduction_rank(m), binom(m + 4, 4) - binom(m + 2, 4), "m = {m}");
        }
    }

    fn small_poly() -> impl Strategy<Value = Poly4> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..3, 0u32..3), -3i32..=3, -3i32..=3), 0..6).prop_map(|v| {
            Poly4::from_terms(
                v.into_iter().map(|((a, b, cc, d), re, im)| ([a, b, cc, d], Complex64::new(re as f64, im as f64))),
            )
        })
    }

    proptest! {
        #[test]
        fn reduction_is_an_idempotent_algebra_map(p in small_poly(), q in small_poly()) {
            let rp = reduce_mod_ideal(&p);
            prop_assert_eq!(reduce_mod_ideal(&rp), rp.clone());
            prop_assert!(rp.terms().all(|(e, _)| e[0] == 0 || e[3] == 0));
            let lhs = reduce_mod_ideal(&(&p * &q));
            let rhs = reduce_mod_ideal(&(&rp * &reduce_mod_ideal(&q)));
            prop_assert!((lhs - rhs).max_abs_coeff() < 1e-9);
        }

        #[test]
        fn text_round_trip(p in small_poly()) {
            prop_assert_eq!(p.to_string().parse::<Poly4>().unwrap(), p);
        }

        #[test]
        fn difference_lies_in_the_ideal(p in small_poly(), pt in prop::array::uniform3(-2.0f64..2.0)) {
            // Evaluate on the quadric: z4 = (1 + z2 z3)/z1 with z1 away from 0.
            let z1 = Complex64::new(pt[0].abs() + 0.5, 0.3);
            let (z2, z3) = (Complex64::new(pt[1], 0.1), Complex64::new(pt[2], -0.2));
            let z = [z1, z2, z3, (Complex64::new(1.0, 0.0) + z2 * z3) / z1];
            let a = p.eval(&z);
            let b = reduce_mod_ideal(&p).eval(&z);
            prop_assert!((a - b).norm() <= 1e-9 * (1.0 + a.norm()));
        }
    }
}
