use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value at abscissa {at}")]
    NonFinite { at: f64 },
    #[error("adaptive subdivision budget of {panels} panels exhausted (error estimate {error:e})")]
    NoConvergence { panels: usize, error: f64 },
    #[error("finite-difference step {h:e} too small for point of norm {norm:e}")]
    StepTooSmall { h: f64, norm: f64 },
    #[error("jet domain error: {0}")]
    JetDomain(&'static str),
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("inadmissible profile: {0}")]
    InadmissibleProfile(String),
    #[error("derivative of order {0} unavailable")]
    DerivativeUnavailable(usize),
    #[error("chart domain: |z1| = {0:e} is below 1e-15")]
    ChartDomain(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("(a, u) = ({a}, {u_abs}) lies outside the image of beta (needs a >= |u|)")]
    OutsideImage { a: f64, u_abs: f64 },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("limit undetermined: {0}")]
    LimitUndetermined(String),
    #[error("undetermined: {0}")]
    Undetermined(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("matrix is not in the group: {0}")]
    NotInGroup(String),
}

pub type Result<T> = std::result::Result<T, Error>;
