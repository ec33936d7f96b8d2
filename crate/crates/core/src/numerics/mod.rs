//! Numerical kernels: jets, quadrature, tail classification, complex Hessians.

pub mod hessian;
pub mod improper;
pub mod jet;
pub mod quadrature;

pub use hessian::{central_hessian_complex, default_step, Mat3C};
pub use improper::{
    classify_improper, classify_improper_log, classify_improper_log_refined, resolve_tail, tail_fit, tail_slope,
    ConvergenceVerdict, TailFit, DEFAULT_DELTA, DEFAULT_WINDOW,
};
pub use jet::Jet4;
pub use quadrature::{
    gauss_legendre, integrate, integrate_semi_infinite, integrate_semi_infinite_scaled, QuadratureResult,
};

/// An extended non-negative real: finite or +∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn finite(&self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(*v),
            Extended::Infinite => None,
        }
    }
    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }
}

impl std::fmt::Display for Extended {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => write!(f, "+inf"),
        }
    }
}

impl serde::Serialize for Extended {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(v) => s.serialize_f64(*v),
            Extended::Infinite => s.serialize_str("+inf"),
        }
    }
}

impl<'de> serde::Deserialize<'de> for Extended {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Extended::Finite(v)),
            Raw::Text(t) if t == "+inf" => Ok(Extended::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("expected number or \"+inf\", got {t}"))),
        }
    }
}
