//! Tail classification of improper integrals on [a, ∞).
//!
//! The classifier works on `ln fn` so that integrands such as
//! (cosh y)^l e^{-f/2ħ} never have to be formed directly.

use serde::{Deserialize, Serialize};

use super::quadrature::{integrate, integrate_semi_infinite_scaled};
use crate::error::{Error, Result};

pub const DEFAULT_WINDOW: (f64, f64) = (30.0, 60.0);
pub const DEFAULT_DELTA: f64 = 0.05;
const SLOPE_GRID: usize = 31;
const FIT_GRID: usize = 61;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvergenceVerdict {
    Convergent { value: f64, error: f64 },
    Divergent { tail_exponent: f64 },
    Borderline { tail_exponent: f64 },
}

impl ConvergenceVerdict {
    pub fn is_convergent(&self) -> bool {
        matches!(self, Self::Convergent { .. })
    }
    pub fn is_divergent(&self) -> bool {
        matches!(self, Self::Divergent { .. })
    }
    pub fn is_borderline(&self) -> bool {
        matches!(self, Self::Borderline { .. })
    }
}

/// Least-squares fit ln fn(y) ≈ σ y + p ln y + c + q / y over a window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub sigma: f64,
    pub power: f64,
    pub rms: f64,
}

/// Mean central-difference slope of `log_fn` on a uniform grid over `window`.
pub fn tail_slope<L: Fn(f64) -> f64>(log_fn: &L, window: (f64, f64)) -> Result<f64> {
    let slopes = local_slopes(log_fn, window, SLOPE_GRID)?;
    Ok(slopes.iter().sum::<f64>() / slopes.len() as f64)
}

/// Central-difference slopes of `log_fn` at `n` uniform points of `window`.
pub fn local_slopes<L: Fn(f64) -> f64>(log_fn: &L, window: (f64, f64), n: usize) -> Result<Vec<f64>> {
    let (y0, y1) = window;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let y = y0 + (y1 - y0) * i as f64 / (n - 1) as f64;
        let h = 1e-3 * y.abs().max(1.0);
        let (lp, lm) = (log_fn(y + h), log_fn(y - h));
        if !(lp.is_finite() && lm.is_finite()) {
            return Err(Error::NonFinite { at: y });
        }
        out.push((lp - lm) / (2.0 * h));
    }
    Ok(out)
}

/// Fit the four-term tail model to `log_fn` on `window`.
pub fn tail_fit<L: Fn(f64) -> f64>(log_fn: &L, window: (f64, f64)) -> Result<TailFit> {
    let (y0, y1) = window;
    let mut rows = Vec::with_capacity(FIT_GRID);
    let mut rhs = Vec::with_capacity(FIT_GRID);
    for i in 0..FIT_GRID {
        let y = y0 + (y1 - y0) * i as f64 / (FIT_GRID - 1) as f64;
        let v = log_fn(y);
        if !v.is_finite() {
            return Err(Error::NonFinite { at: y });
        }
        rows.push([y, y.ln(), 1.0, 1.0 / y]);
        rhs.push(v);
    }
    // Column scaling keeps the normal equations reasonably conditioned.
    let mut scale = [0.0f64; 4];
    for r in &rows {
        for k in 0..4 {
            scale[k] = scale[k].max(r[k].abs());
        }
    }
    let mut ata = [[0.0f64; 4]; 4];
    let mut atb = [0.0f64; 4];
    for (r, &b) in rows.iter().zip(&rhs) {
        let rs: Vec<f64> = (0..4).map(|k| r[k] / scale[k]).collect();
        for i in 0..4 {
            atb[i] += rs[i] * b;
            for j in 0..4 {
                ata[i][j] += rs[i] * rs[j];
            }
        }
    }
    let sol = solve4(ata, atb).ok_or_else(|| Error::Undetermined("singular tail fit".into()))?;
    let coef: Vec<f64> = (0..4).map(|k| sol[k] / scale[k]).collect();
    let mut ss = 0.0;
    for (r, &b) in rows.iter().zip(&rhs) {
        let model: f64 = (0..4).map(|k| coef[k] * r[k]).sum();
        ss += (model - b).powi(2);
    }
    Ok(TailFit { sigma: coef[0], power: coef[1], rms: (ss / FIT_GRID as f64).sqrt() })
}

fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..4 {
            let m = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= m * a[col][k];
            }
            b[row] -= m * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let mut s = b[row];
        for k in row + 1..4 {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

/// Decide a borderline tail from its fitted exponential rate and power.
///
/// Returns `Some(true)` for a divergent tail, `Some(false)` for a convergent
/// one, `None` when the fit is too poor or the power sits too close to −1.
pub fn resolve_tail(fit: &TailFit) -> Option<bool> {
    const SIGMA_ZERO: f64 = 1e-3;
    if !(fit.rms <= 1e-3) {
        return None;
    }
    if fit.sigma > SIGMA_ZERO {
        return Some(true);
    }
    if fit.sigma < -SIGMA_ZERO {
        return Some(false);
    }
    if fit.power > -0.75 {
        Some(true)
    } else if fit.power < -1.25 {
        Some(false)
    } else {
        None
    }
}

/// Classify ∫_a^∞ fn from its tail slope; see [`classify_improper_log`].
pub fn classify_improper<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    window: (f64, f64),
    delta: f64,
    tol: f64,
) -> Result<ConvergenceVerdict> {
    classify_improper_log(|y| f(y).ln(), a, window, delta, tol)
}

/// Classify ∫_a^∞ exp(log_fn): Divergent if the mean tail slope exceeds
/// `delta`, Convergent (with value) if it is below `-delta`, otherwise
/// Borderline.
pub fn classify_improper_log<L: Fn(f64) -> f64>(
    log_fn: L,
    a: f64,
    window: (f64, f64),
    delta: f64,
    tol: f64,
) -> Result<ConvergenceVerdict> {
    check_args(window, delta, tol)?;
    let sigma = tail_slope(&log_fn, window)?;
    if sigma > delta {
        return Ok(ConvergenceVerdict::Divergent { tail_exponent: sigma });
    }
    if sigma < -delta {
        return integrate_log(&log_fn, a, window, sigma, tol);
    }
    Ok(ConvergenceVerdict::Borderline { tail_exponent: sigma })
}

/// As [`classify_improper_log`], but a Borderline slope is passed through
/// [`tail_fit`] and [`resolve_tail`]; it stays Borderline only when that
/// refinement is inconclusive.
pub fn classify_improper_log_refined<L: Fn(f64) -> f64>(
    log_fn: L,
    a: f64,
    window: (f64, f64),
    delta: f64,
    tol: f64,
) -> Result<ConvergenceVerdict> {
    let raw = classify_improper_log(&log_fn, a, window, delta, tol)?;
    let ConvergenceVerdict::Borderline { tail_exponent } = raw else {
        return Ok(raw);
    };
    let fit = tail_fit(&log_fn, window)?;
    match resolve_tail(&fit) {
        Some(true) => Ok(ConvergenceVerdict::Divergent { tail_exponent }),
        Some(false) => match integrate_log(&log_fn, a, window, fit.sigma.min(-1e-3), tol) {
            Ok(v) => Ok(v),
            Err(_) => Ok(raw),
        },
        None => Ok(raw),
    }
}

fn check_args(window: (f64, f64), delta: f64, tol: f64) -> Result<()> {
    if !(window.0 < window.1) || !(delta > 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "classifier needs Y0 < Y1, delta > 0, tol > 0 (got {window:?}, {delta}, {tol})"
        )));
    }
    Ok(())
}

/// Integrate exp(log_fn) over [a, ∞) after shifting by its maximum.
fn integrate_log<L: Fn(f64) -> f64>(
    log_fn: &L,
    a: f64,
    window: (f64, f64),
    sigma: f64,
    tol: f64,
) -> Result<ConvergenceVerdict> {
    let hi = window.1.max(a + 1.0);
    let mut shift = f64::NEG_INFINITY;
    for i in 0..=400 {
        let y = a + (hi - a) * i as f64 / 400.0;
        let v = log_fn(y);
        if v.is_finite() {
            shift = shift.max(v);
        }
    }
    if !shift.is_finite() {
        return Err(Error::NonFinite { at: a });
    }
    let g = |y: f64| {
        let v = log_fn(y);
        if v == f64::NEG_INFINITY {
            0.0
        } else {
            (v - shift).exp()
        }
    };
    // Integrate the bulk directly and map only the tail, which keeps the
    // substitution from compressing interior structure.
    let bulk = integrate(&g, a, hi, tol)?;
    let s = (1.0 / sigma.abs()).clamp(0.05, 1e3);
    let tail = integrate_semi_infinite_scaled(&g, hi, s, tol)?;
    let scaled = bulk.value + tail.value;
    let err = bulk.error_estimate + tail.error_estimate;
    let factor = shift.exp();
    Ok(ConvergenceVerdict::Convergent { value: scaled * factor, error: err * factor })
}
