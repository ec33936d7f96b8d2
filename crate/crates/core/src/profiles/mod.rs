//! Radial potential profiles f(y) defining invariant Kähler metrics.

mod builtins;
mod expr;
mod validate;

use std::fmt;
use std::sync::Arc;

pub(crate) use builtins::ln_cosh;
pub use builtins::{builtin, Builtin, CoshInduced, GaussianTail, LogCosh, Lump, Quadratic, Stenzel};
pub use expr::{parse_profile, BinOp, Func, ProfileExpr};
pub use validate::{validate_kahler, ValidationReport};

use crate::error::{Error, Result};
use crate::numerics::Jet4;

/// Below this |y| the ratio f'(y)/sinh y comes from its Taylor expansion.
pub const RATIO_CROSSOVER: f64 = 1e-3;

/// Source of a profile's Taylor data. Implementations should be even in y.
pub trait ProfileFn: Send + Sync + fmt::Debug {
    /// f and its first four derivatives at `y`.
    fn jet(&self, y: f64) -> Result<Jet4>;

    /// ln f'(y) for y > 0; overridden where a direct formula loses accuracy.
    fn ln_f1(&self, y: f64) -> f64 {
        self.jet(y).map(|j| j.derivative(1).ln()).unwrap_or(f64::NAN)
    }

    /// ln f''(y).
    fn ln_f2(&self, y: f64) -> f64 {
        self.jet(y).map(|j| j.derivative(2).ln()).unwrap_or(f64::NAN)
    }

    /// Highest derivative order supplied by closed formulas rather than AD.
    fn analytic_order(&self) -> u8 {
        4
    }

    /// lim f'(y) as y → ∞ when known in closed form.
    fn f_prime_limit(&self) -> Option<f64> {
        None
    }
}

/// An immutable, shareable radial profile, optionally scaled by a > 0.
#[derive(Clone)]
pub struct MetricProfile {
    label: String,
    source: Arc<dyn ProfileFn>,
    scale: f64,
}

impl fmt::Debug for MetricProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricProfile").field("label", &self.label).field("scale", &self.scale).finish()
    }
}

impl MetricProfile {
    pub fn new(label: impl Into<String>, source: impl ProfileFn + 'static) -> Self {
        Self { label: label.into(), source: Arc::new(source), scale: 1.0 }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The profile a·f.
    pub fn scaled(&self, a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale factor must be positive, got {a}")));
        }
        Ok(Self { label: format!("{a}*({})", self.label), source: Arc::clone(&self.source), scale: self.scale * a })
    }

    pub fn analytic_order(&self) -> u8 {
        self.source.analytic_order()
    }

    pub fn f_prime_limit(&self) -> Option<f64> {
        self.source.f_prime_limit().map(|d| d * self.scale)
    }

    pub fn jet(&self, y: f64) -> Result<Jet4> {
        let j = self.source.jet(y)?;
        if !j.is_finite() {
            return Err(Error::NonFinite { at: y });
        }
        Ok(j.scale(self.scale))
    }

    /// f^(order)(y) for order 0..=4.
    pub fn eval(&self, y: f64, order: usize) -> Result<f64> {
        if order > 4 {
            return Err(Error::DerivativeUnavailable(order));
        }
        Ok(self.jet(y)?.derivative(order))
    }

    /// [f, f', f'', f''', f''''] at y.
    pub fn derivatives(&self, y: f64) -> Result<[f64; 5]> {
        Ok(self.jet(y)?.derivatives())
    }

    pub fn f(&self, y: f64) -> Result<f64> {
        self.eval(y, 0)
    }

    pub fn f1(&self, y: f64) -> Result<f64> {
        self.eval(y, 1)
    }

    pub fn f2(&self, y: f64) -> Result<f64> {
        self.eval(y, 2)
    }

    pub fn ln_f1(&self, y: f64) -> f64 {
        self.source.ln_f1(y) + self.scale.ln()
    }

    pub fn ln_f2(&self, y: f64) -> f64 {
        self.source.ln_f2(y) + self.scale.ln()
    }

    /// f'(y)/sinh y, continuous through y = 0 where it equals f''(0).
    pub fn fprime_over_sinh(&self, y: f64) -> Result<f64> {
        let y = y.abs();
        if y >= RATIO_CROSSOVER {
            return Ok(self.f1(y)? / y.sinh());
        }
        let d = self.derivatives(0.0)?;
        Ok(d[2] + (d[4] - d[2]) * y * y / 6.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_is_continuous_at_the_crossover() {
        for p in [builtin(Builtin::Lump), builtin(Builtin::Stenzel(3.0)), builtin(Builtin::CoshInduced)] {
            let p = p.unwrap();
            let below = p.fprime_over_sinh(RATIO_CROSSOVER * (1.0 - 1e-12)).unwrap();
            let above = p.fprime_over_sinh(RATIO_CROSSOVER).unwrap();
            assert!((below - above).abs() < 1e-9 * above.abs(), "{}: {below} vs {above}", p.label());
            let at0 = p.fprime_over_sinh(0.0).unwrap();
            assert!((at0 - p.f2(0.0).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn scaling_multiplies_everything() {
        let p = builtin(Builtin::Lump).unwrap();
        let q = p.scaled(2.5).unwrap();
        let (a, b) = (p.derivatives(1.3).unwrap(), q.derivatives(1.3).unwrap());
        for k in 0..5 {
            assert!((b[k] - 2.5 * a[k]).abs() <= 1e-15 * b[k].abs().max(1.0));
        }
        assert!((q.ln_f2(7.0) - p.ln_f2(7.0) - 2.5f64.ln()).abs() < 1e-14);
        assert_eq!(q.f_prime_limit(), Some(2.5 * std::f64::consts::PI));
        assert!(p.scaled(0.0).is_err());
        assert!(matches!(p.eval(1.0, 5), Err(Error::DerivativeUnavailable(5))));
    }
}

/// Built-in names accepted by [`resolve_profile`], with their parameter syntax.
pub const BUILTIN_SPECS: [&str; 6] = ["lump", "quadratic", "cosh", "stenzel:c=<c>", "logcosh:a=<a>", "gaussian-tail"];

fn param(spec: &str, key: &str) -> Result<f64> {
    let Some(rest) = spec.split_once(':').map(|(_, r)| r) else {
        return Ok(1.0);
    };
    let value = rest
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| Error::InvalidParameter(format!("expected `{key}=<value>` in {spec:?}")))?;
    expr::parse_profile(value)?.eval_constant()
}

/// A built-in name or a profile expression in y.
pub fn resolve_profile(spec: &str) -> Result<MetricProfile> {
    let spec = spec.trim();
    let head = spec.split(':').next().unwrap_or("");
    match head {
        "lump" => builtin(Builtin::Lump),
        "quadratic" => builtin(Builtin::Quadratic),
        "cosh" if !spec.contains('(') => builtin(Builtin::CoshInduced),
        "stenzel" => builtin(Builtin::Stenzel(param(spec, "c")?)),
        "logcosh" => builtin(Builtin::LogCosh(param(spec, "a")?)),
        "gaussian-tail" => builtin(Builtin::GaussianTail),
        _ => Ok(expr::parse_profile(spec)?.into_profile(spec)),
    }
}

#[cfg(test)]
mod resolve_tests {
    use super::*;

    #[test]
    fn names_and_expressions() {
        assert_eq!(resolve_profile("lump").unwrap().label(), "lump");
        assert_eq!(resolve_profile("stenzel:c=3").unwrap().label(), "stenzel:c=3");
        assert_eq!(
            resolve_profile("logcosh:a=pi/2").unwrap().label(),
            format!("logcosh:a={}", std::f64::consts::FRAC_PI_2)
        );
        let e = resolve_profile("cosh(y)").unwrap();
        assert!((e.f(1.0).unwrap() - 1f64.cosh()).abs() < 1e-15);
        assert!(resolve_profile("stenzel:k=3").is_err());
        assert!(matches!(resolve_profile("y^"), Err(Error::Syntax { .. })));
    }
}
