use serde::Serialize;

use super::MetricProfile;

/// Outcome of the Kähler admissibility check on a uniform grid.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub label: String,
    pub y_max: f64,
    pub n_grid: usize,
    /// min f' over the grid points in (0, y_max].
    pub min_f1: f64,
    pub argmin_f1: f64,
    /// min f'' over the grid points in [0, y_max].
    pub min_f2: f64,
    pub argmin_f2: f64,
    /// max |f(y) − f(−y)| / (1 + |f(y)|) over the grid.
    pub evenness_residual: f64,
    pub admissible: bool,
    pub even: bool,
    pub failures: Vec<String>,
}

impl ValidationReport {
    /// Admissible and even: usable as a metric profile.
    pub fn usable(&self) -> bool {
        self.admissible && self.even
    }
}

pub const EVENNESS_TOL: f64 = 1e-10;

pub fn validate_kahler(p: &MetricProfile, y_max: f64, n_grid: usize) -> ValidationReport {
    let mut r = ValidationReport {
        label: p.label().to_string(),
        y_max,
        n_grid,
        min_f1: f64::INFINITY,
        argmin_f1: f64::NAN,
        min_f2: f64::INFINITY,
        argmin_f2: f64::NAN,
        evenness_residual: 0.0,
        admissible: false,
        even: false,
        failures: Vec::new(),
    };
    if !(y_max > 0.0) || n_grid < 16 {
        r.failures.push(format!("need y_max > 0 and n_grid >= 16 (got {y_max}, {n_grid})"));
        return r;
    }
    for i in 0..=n_grid {
        let y = y_max * i as f64 / n_grid as f64;
        let (d, dm) = match (p.derivatives(y), p.derivatives(-y)) {
            (Ok(d), Ok(dm)) => (d, dm),
            (Err(e), _) | (_, Err(e)) => {
                r.failures.push(format!("evaluation failed at y = {y}: {e}"));
                continue;
            }
        };
        if d.iter().chain(dm.iter()).any(|v| !v.is_finite()) {
            r.failures.push(format!("non-finite derivative at y = {y}"));
            continue;
        }
        let res = (d[0] - dm[0]).abs() / (1.0 + d[0].abs());
        r.evenness_residual = r.evenness_residual.max(res);
        if i > 0 && d[1] < r.min_f1 {
            r.min_f1 = d[1];
            r.argmin_f1 = y;
        }
        if d[2] < r.min_f2 {
            r.min_f2 = d[2];
            r.argmin_f2 = y;
        }
    }
    r.even = r.evenness_residual <= EVENNESS_TOL;
    if !r.even {
        r.failures.push(format!("profile is not even: residual {:e}", r.evenness_residual));
    }
    if !(r.min_f1 > 0.0) {
        r.failures.push(format!("f' = {} <= 0 at y = {} (needs f' > 0 on (0, y_max])", r.min_f1, r.argmin_f1));
    }
    if !(r.min_f2 > 0.0) {
        r.failures.push(format!("f'' = {} <= 0 at y = {} (needs f'' > 0 on [0, y_max])", r.min_f2, r.argmin_f2));
    }
    r.admissible = r.min_f1 > 0.0
        && r.min_f2 > 0.0
        && r.failures.iter().all(|f| !f.starts_with("evaluation") && !f.starts_with("non-finite"));
    r
}
