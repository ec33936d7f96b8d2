//! Holomorphic quantization: degree cutoff m(f, ħ), the tail constant k(f),
//! dim H_poly and the semiclassical ratio.

pub mod inner;
pub mod operator;
pub mod poly;

use std::f64::consts::PI;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::global_geom::total_volume;
use crate::numerics::improper::local_slopes;
use crate::numerics::{
    classify_improper_log_refined, tail_fit, ConvergenceVerdict, Extended, DEFAULT_DELTA, DEFAULT_WINDOW,
};
use crate::profiles::{ln_cosh, MetricProfile};

pub use inner::{default_r_cut, gram_hermiticity, monte_carlo_inner_product, GramCheck, InnerProduct};
pub use operator::{action_field, basis_h_poly, dim_formula, membership_check, quantum_operator, MembershipCheck};
pub use poly::{is_quadric_divisible, monomials_of_degree, reduce_mod_ideal, reduction_rank, Poly4};

/// Upper end of the doubling scan when no closed-form centre is available.
pub const DEFAULT_DEGREE_CAP: u32 = 512;

fn check_hbar(hbar: f64) -> Result<()> {
    if !(hbar > 0.0) || !hbar.is_finite() {
        return Err(Error::InvalidParameter(format!("ħ must be positive and finite, got {hbar}")));
    }
    Ok(())
}

/// ln[(cosh y)^l e^{−f/2ħ} · 3f'²f''].
pub fn degree_log_integrand(p: &MetricProfile, hbar: f64, l: f64, y: f64) -> f64 {
    let f = p.f(y).unwrap_or(f64::NAN);
    l * ln_cosh(y) - f / (2.0 * hbar) + 3f64.ln() + 2.0 * p.ln_f1(y) + p.ln_f2(y)
}

/// Tail window for degree l: the default one, pushed out past the point where
/// the weight's decay rate f'/2ħ is twice the growth rate l of (cosh y)^l.
fn degree_window(p: &MetricProfile, hbar: f64, l: u32) -> (f64, f64) {
    let mut y = 1.0;
    while y <= 65536.0 {
        match p.f1(y) {
            Ok(v) if v / (2.0 * hbar) > 2.0 * l as f64 => {
                let y0 = DEFAULT_WINDOW.0.max(2.0 * y);
                return (y0, 2.0 * y0);
            }
            Ok(v) if v.is_finite() => y *= 2.0,
            _ => break,
        }
    }
    DEFAULT_WINDOW
}

/// Whether ∫_0^∞ (cosh y)^l e^{−f/2ħ} d(f'³) converges.
pub fn degree_integrable(p: &MetricProfile, hbar: f64, l: u32) -> Result<ConvergenceVerdict> {
    check_hbar(hbar)?;
    classify_improper_log_refined(
        |y| degree_log_integrand(p, hbar, l as f64, y),
        0.0,
        degree_window(p, hbar, l),
        DEFAULT_DELTA,
        1e-8,
    )
}

/// k(f): the exponential decay rate of d(f'³)/dy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KValue {
    Value(f64),
    Infinite,
    /// f' is unbounded.
    NotApplicable,
    Undetermined,
}

impl KValue {
    pub fn value(&self) -> Option<f64> {
        match self {
            KValue::Value(v) => Some(*v),
            _ => None,
        }
    }
}

impl Serialize for KValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            KValue::Value(v) => s.serialize_f64(*v),
            KValue::Infinite => s.serialize_str("+inf"),
            KValue::NotApplicable => s.serialize_str("not_applicable"),
            KValue::Undetermined => s.serialize_str("undetermined"),
        }
    }
}

/// −(tail slope of ln 3f'²f'') from a fit over the classifier window. A poor
/// fit with slopes falling by more than 10% across the window means faster
/// than exponential decay (k = +∞); any other unstable slope is Undetermined.
pub fn k_of(p: &MetricProfile) -> Result<KValue> {
    if total_volume(p)?.is_infinite() {
        return Ok(KValue::NotApplicable);
    }
    let log_fn = |y: f64| 3f64.ln() + 2.0 * p.ln_f1(y) + p.ln_f2(y);
    let slopes = match local_slopes(&log_fn, DEFAULT_WINDOW, 31) {
        Ok(s) => s,
        // Underflow of f'' inside the window: decay is faster than any exponential.
        Err(Error::NonFinite { .. }) => return Ok(KValue::Infinite),
        Err(e) => return Err(e),
    };
    let fit = tail_fit(&log_fn, DEFAULT_WINDOW)?;
    if fit.rms <= 1e-3 {
        return Ok(KValue::Value((-fit.sigma).max(0.0)));
    }
    let (first, last) = (slopes[0], slopes[slopes.len() - 1]);
    let lo = slopes.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = slopes.iter().sum::<f64>() / slopes.len() as f64;
    let spread = (hi - lo) / mean.abs().max(1e-12);
    if spread > 0.1 && last < first {
        Ok(KValue::Infinite)
    } else if spread > 0.1 {
        Ok(KValue::Undetermined)
    } else {
        Ok(KValue::Value((-mean).max(0.0)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cutoff {
    Finite(u32),
    Infinite,
    Undetermined,
    /// Not even constants are integrable.
    Empty,
}

impl Serialize for Cutoff {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cutoff::Finite(m) => s.serialize_u32(*m),
            Cutoff::Infinite => s.serialize_str("+inf"),
            Cutoff::Undetermined => s.serialize_str("undetermined"),
            Cutoff::Empty => s.serialize_str("empty"),
        }
    }
}

/// A dimension that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Count {
    Finite(u64),
    Infinite,
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Count::Finite(n) => s.serialize_u64(*n),
            Count::Infinite => s.serialize_str("+inf"),
        }
    }
}

/// dim H_poly = (m+1)(m+2)(2m+3)/6.
pub fn dim_h_poly(m: Cutoff) -> Option<Count> {
    match m {
        Cutoff::Finite(m) => Some(Count::Finite(dim_formula(m as u64))),
        Cutoff::Infinite => Some(Count::Infinite),
        Cutoff::Empty => Some(Count::Finite(0)),
        Cutoff::Undetermined => None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CutoffResult {
    pub m: Cutoff,
    pub k: KValue,
    pub omega: Extended,
    /// (D/2ħ + k − 1, D/2ħ + k) with D = (3Ω)^{1/3}/π.
    pub bounds: Option<(f64, f64)>,
    pub per_degree: Vec<(u32, ConvergenceVerdict)>,
}

struct Scan<'a> {
    p: &'a MetricProfile,
    hbar: f64,
    seen: std::collections::BTreeMap<u32, ConvergenceVerdict>,
}

impl Scan<'_> {
    fn at(&mut self, l: u32) -> Result<ConvergenceVerdict> {
        if let Some(v) = self.seen.get(&l) {
            return Ok(*v);
        }
        let v = degree_integrable(self.p, self.hbar, l)?;
        self.seen.insert(l, v);
        Ok(v)
    }
}

/// The largest l with a convergent weight integral.
pub fn max_degree_m(p: &MetricProfile, hbar: f64) -> Result<CutoffResult> {
    check_hbar(hbar)?;
    let omega = total_volume(p)?;
    let k = k_of(p)?;
    let mut scan = Scan { p, hbar, seen: Default::default() };
    let mut bounds = None;
    let m = match (omega, k) {
        (Extended::Finite(_), KValue::Infinite) => Cutoff::Infinite,
        (Extended::Finite(om), KValue::Value(kv)) => {
            let d = (3.0 * om).cbrt() / PI;
            let c = d / (2.0 * hbar) + kv;
            bounds = Some((c - 1.0, c));
            windowed(&mut scan, c)?
        }
        _ => doubling(&mut scan, DEFAULT_DEGREE_CAP)?,
    };
    Ok(CutoffResult { m, k, omega, bounds, per_degree: scan.seen.into_iter().collect() })
}

/// Scan ⌊c⌋−2 ..= ⌈c⌉+2, widening until the crossover is bracketed.
fn windowed(scan: &mut Scan, c: f64) -> Result<Cutoff> {
    let mut lo = (c.floor() - 2.0).max(0.0) as u32;
    let mut hi = (c.ceil() + 2.0).max(0.0) as u32;
    for l in lo..=hi {
        scan.at(l)?;
    }
    while !scan.at(lo)?.is_convergent() {
        if lo == 0 {
            return Ok(Cutoff::Empty);
        }
        lo -= 1;
    }
    let limit = hi + 16;
    while scan.at(hi)?.is_convergent() {
        if hi == limit {
            return Ok(Cutoff::Undetermined);
        }
        hi += 1;
    }
    crossover(scan, lo, hi)
}

/// Given convergence at lo and not at hi, locate the last convergent degree.
fn crossover(scan: &mut Scan, lo: u32, hi: u32) -> Result<Cutoff> {
    let mut first_bad = None;
    for l in lo..=hi {
        let v = scan.at(l)?;
        match (first_bad, v.is_convergent()) {
            (None, false) => first_bad = Some(l),
            (Some(_), true) => return Ok(Cutoff::Undetermined),
            _ => {}
        }
    }
    let bad = first_bad.expect("hi is not convergent");
    if scan.at(bad)?.is_borderline() {
        return Ok(Cutoff::Undetermined);
    }
    Ok(Cutoff::Finite(bad - 1))
}

/// l = 0, 1, 2, 4, …, cap, then bisection on the first failure.
fn doubling(scan: &mut Scan, cap: u32) -> Result<Cutoff> {
    if !scan.at(0)?.is_convergent() {
        return Ok(if scan.at(0)?.is_borderline() { Cutoff::Undetermined } else { Cutoff::Empty });
    }
    let mut good = 0;
    let mut l = 1;
    loop {
        if !scan.at(l)?.is_convergent() {
            break;
        }
        good = l;
        if l >= cap {
            return Ok(Cutoff::Infinite);
        }
        l = (2 * l).min(cap);
    }
    let mut bad = l;
    while bad - good > 1 {
        let mid = good + (bad - good) / 2;
        if scan.at(mid)?.is_convergent() {
            good = mid;
        } else {
            bad = mid;
        }
    }
    if scan.at(bad)?.is_borderline() {
        return Ok(Cutoff::Undetermined);
    }
    Ok(Cutoff::Finite(good))
}

/// dim H_poly · (2πħ)³ / Ω.
pub fn ratio_from(m: u32, hbar: f64, omega: f64) -> f64 {
    dim_formula(m as u64) as f64 * (2.0 * PI * hbar).powi(3) / omega
}

pub fn semiclassical_ratio(p: &MetricProfile, hbar: f64) -> Result<f64> {
    let r = max_degree_m(p, hbar)?;
    match (r.m, r.omega) {
        (Cutoff::Finite(m), Extended::Finite(om)) => Ok(ratio_from(m, hbar, om)),
        _ => Err(Error::NotApplicable(format!("ratio needs finite m and Ω (m = {:?}, Ω = {})", r.m, r.omega))),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QuantizationReport {
    pub label: String,
    pub hbar: f64,
    pub m: Cutoff,
    pub k: KValue,
    pub dim_h_poly: Option<Count>,
    pub omega: Extended,
    pub semiclassical_ratio: Option<f64>,
    pub per_degree: Vec<(u32, ConvergenceVerdict)>,
    pub bounds: Option<(f64, f64)>,
}

pub fn quantization_report(p: &MetricProfile, hbar: f64) -> Result<QuantizationReport> {
    let r = max_degree_m(p, hbar)?;
    let ratio = match (r.m, r.omega) {
        (Cutoff::Finite(m), Extended::Finite(om)) => Some(ratio_from(m, hbar, om)),
        _ => None,
    };
    Ok(QuantizationReport {
        label: p.label().to_string(),
        hbar,
        m: r.m,
        k: r.k,
        dim_h_poly: dim_h_poly(r.m),
        omega: r.omega,
        semiclassical_ratio: ratio,
        per_degree: r.per_degree,
        bounds: r.bounds,
    })
}
