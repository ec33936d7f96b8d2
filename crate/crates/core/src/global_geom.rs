//! Global invariants: level-set distances, completeness, volumes, the
//! scalar-curvature integral and a Monte-Carlo volume estimate.

use std::f64::consts::PI;
use std::io::Write;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::curvature::{g_derivatives, ricci_components, DiagonalPoint, SMALL_Y};
use crate::error::{Error, Result};
use crate::montecarlo::{sharded, McEstimate};
use crate::numerics::{
    classify_improper_log_refined, integrate, ConvergenceVerdict, Extended, DEFAULT_DELTA, DEFAULT_WINDOW,
};
use crate::profiles::MetricProfile;
use crate::sl2c::{chi, haar_sample, y_of};

const QUAD_TOL: f64 = 1e-12;

/// D(a, b) = (1/√2) ∫_a^b √f''.
pub fn geodesic_distance(p: &MetricProfile, a: f64, b: f64) -> Result<f64> {
    if !(0.0 <= a && a <= b) {
        return Err(Error::InvalidParameter(format!("need 0 ≤ a ≤ b, got a = {a}, b = {b}")));
    }
    if a == b {
        return Ok(0.0);
    }
    let bad = std::sync::atomic::AtomicBool::new(false);
    let r = integrate(
        |y| match p.f2(y) {
            Ok(v) if v > 0.0 => v.sqrt(),
            _ => {
                bad.store(true, std::sync::atomic::Ordering::Relaxed);
                f64::NAN
            }
        },
        a,
        b,
        QUAD_TOL,
    );
    if bad.load(std::sync::atomic::Ordering::Relaxed) {
        return Err(Error::InadmissibleProfile(format!("f'' ≤ 0 somewhere in [{a}, {b}]")));
    }
    Ok(r?.value / 2f64.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completeness {
    Complete,
    Incomplete,
    Borderline,
}

/// Serialized as `true`, `false` or `"borderline"`.
impl Serialize for Completeness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Completeness::Complete => s.serialize_bool(true),
            Completeness::Incomplete => s.serialize_bool(false),
            Completeness::Borderline => s.serialize_str("borderline"),
        }
    }
}

fn distance_verdict(p: &MetricProfile) -> Result<ConvergenceVerdict> {
    classify_improper_log_refined(|y| 0.5 * p.ln_f2(y), 0.0, DEFAULT_WINDOW, DEFAULT_DELTA, 1e-10)
}

/// Complete iff D(0, ∞) = ∞.
pub fn is_complete(p: &MetricProfile) -> Completeness {
    match distance_verdict(p) {
        Ok(ConvergenceVerdict::Divergent { .. }) => Completeness::Complete,
        Ok(ConvergenceVerdict::Convergent { .. }) => Completeness::Incomplete,
        _ => Completeness::Borderline,
    }
}

/// D(0, ∞).
pub fn distance_to_infinity(p: &MetricProfile) -> Result<Extended> {
    match distance_verdict(p)? {
        ConvergenceVerdict::Divergent { .. } => Ok(Extended::Infinite),
        ConvergenceVerdict::Convergent { value, .. } => Ok(Extended::Finite(value / 2f64.sqrt())),
        ConvergenceVerdict::Borderline { tail_exponent } => {
            Err(Error::LimitUndetermined(format!("tail of √f'' is borderline (slope {tail_exponent:.3e})")))
        }
    }
}

/// vol(M_r) = (π f'(r))³/3.
pub fn volume_mr(p: &MetricProfile, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be ≥ 0, got {r}")));
    }
    Ok((PI * p.f1(r)?).powi(3) / 3.0)
}

/// vol(M): from the declared limit of f' when available, otherwise from f'
/// on the doubling grid 2^0 … 2^12.
pub fn total_volume(p: &MetricProfile) -> Result<Extended> {
    if let Some(lim) = p.f_prime_limit() {
        return Ok(Extended::Finite((PI * lim).powi(3) / 3.0));
    }
    let mut prev: Option<f64> = None;
    for k in 0..=12 {
        let v = match p.f1(2f64.powi(k)) {
            Ok(v) if v.is_finite() => v,
            // f'' > 0 makes f' increasing; overflow means it is unbounded.
            _ if prev.is_some() => return Ok(Extended::Infinite),
            _ => return Err(Error::LimitUndetermined("f' is not finite on the doubling grid".into())),
        };
        if let Some(u) = prev {
            if v < u * (1.0 - 1e-12) {
                return Err(Error::LimitUndetermined(format!("f' decreases between 2^{} and 2^{k}", k - 1)));
            }
            if k == 12 {
                return Ok(if v > u * (1.0 + 1e-8) {
                    Extended::Infinite
                } else {
                    Extended::Finite((PI * v).powi(3) / 3.0)
                });
            }
        }
        prev = Some(v);
    }
    unreachable!()
}

/// (π³/3) ∫_0^r h(y)·3f'(y)²f''(y) dy.
pub fn integrate_invariant<H: Fn(f64) -> f64>(p: &MetricProfile, h: H, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be ≥ 0, got {r}")));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let q = integrate(
        |y| match p.derivatives(y) {
            Ok(d) => h(y) * 3.0 * d[1] * d[1] * d[2],
            Err(_) => f64::NAN,
        },
        0.0,
        r,
        QUAD_TOL,
    )?;
    Ok(PI.powi(3) / 3.0 * q.value)
}

/// ∫_{M_r} s = 2π³ f'(r)² g'(r), g = ln(sinh²y/(f''f'²)).
pub fn scalar_curvature_integral(p: &MetricProfile, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be ≥ 0, got {r}")));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let g1 = if r >= SMALL_Y {
        g_derivatives(p, r)?.0
    } else {
        ricci_components(p, &DiagonalPoint::from_y(r))?.h22 * r.sinh()
    };
    Ok(2.0 * PI.powi(3) * p.f1(r)?.powi(2) * g1)
}

/// μ̂(λ) = √(1+λ²)/8 · (f'/sinh y)² f''(y) at the point with invariant y.
pub fn volume_density(p: &MetricProfile, lambda_sq: f64, y: f64) -> Result<f64> {
    let r = p.fprime_over_sinh(y)?;
    Ok((1.0 + lambda_sq).sqrt() / 8.0 * r * r * p.f2(y)?)
}

/// Uniform point in the ball of radius l in R³.
pub fn uniform_in_ball<R: Rng + ?Sized>(rng: &mut R, l: f64) -> [f64; 3] {
    let rad = l * rng.gen::<f64>().cbrt();
    let ct = 1.0 - 2.0 * rng.gen::<f64>();
    let st = (1.0 - ct * ct).max(0.0).sqrt();
    let ph = 2.0 * PI * rng.gen::<f64>();
    [rad * st * ph.cos(), rad * st * ph.sin(), rad * ct]
}

/// vol(M_r) ≈ 16π² · vol(B_l) · mean μ̂ with (U, λ) uniform on SU(2) × B_l,
/// l = sinh(r/2); y is read off the matrix χ(U, λ).
pub fn monte_carlo_volume(p: &MetricProfile, r: f64, n: usize, seed: u64) -> Result<McEstimate> {
    if n < 1000 {
        return Err(Error::InvalidParameter(format!("need at least 10³ samples, got {n}")));
    }
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be ≥ 0, got {r}")));
    }
    if r == 0.0 {
        return Ok(McEstimate { estimate: 0.0, stderr: 0.0, n });
    }
    p.f2(r)?;
    let l = (0.5 * r).sinh();
    let scale = 16.0 * PI * PI * 4.0 * PI * l.powi(3) / 3.0;
    let m = sharded(n, seed, 1, |rng, out| {
        let u = haar_sample(rng);
        let lam = uniform_in_ball(rng, l);
        let l2 = lam.iter().map(|v| v * v).sum::<f64>();
        let y = y_of(&chi(&u, lam));
        out[0] = scale * volume_density(p, l2, y).unwrap_or(f64::NAN);
    });
    let est = m.estimate(0);
    if !est.estimate.is_finite() {
        return Err(Error::NonFinite { at: r });
    }
    Ok(est)
}

#[derive(Debug, Clone, Serialize)]
pub struct GeometryReport {
    pub label: String,
    pub total_volume: Extended,
    pub complete: Completeness,
    #[serde(rename = "D_0_inf")]
    pub d_0_inf: Option<Extended>,
    pub volume_curve: Vec<(f64, f64)>,
    pub curvature_integral_curve: Vec<(f64, f64)>,
}

/// Curves on n+1 equally spaced radii in [0, r_max].
pub fn geometry_report(p: &MetricProfile, r_max: f64, n: usize) -> Result<GeometryReport> {
    let n = n.max(1);
    let mut volume_curve = Vec::with_capacity(n + 1);
    let mut curvature_integral_curve = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let r = r_max * i as f64 / n as f64;
        volume_curve.push((r, volume_mr(p, r)?));
        curvature_integral_curve.push((r, scalar_curvature_integral(p, r)?));
    }
    Ok(GeometryReport {
        label: p.label().to_string(),
        total_volume: total_volume(p)?,
        complete: is_complete(p),
        d_0_inf: distance_to_infinity(p).ok(),
        volume_curve,
        curvature_integral_curve,
    })
}

pub fn write_geometry_csv<W: Write>(mut w: W, report: &GeometryReport) -> std::io::Result<()> {
    writeln!(w, "r,vol,s_integral")?;
    for (v, s) in report.volume_curve.iter().zip(&report.curvature_integral_curve) {
        writeln!(w, "{},{},{}", v.0, v.1, s.1)?;
    }
    Ok(())
}
