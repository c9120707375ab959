use thiserror::Error;

use crate::C64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("truncation budget of {0} terms exceeded")]
    Budget(usize),
    #[error("terms do not decay within {0} terms")]
    NonDecaying(usize),
    #[error("pole: {0}")]
    Pole(String),
    #[error("divergent series: {0}")]
    Divergent(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("resonance at n = {0}")]
    Resonance(usize),
    #[error("not a characteristic root: residual {0:e}")]
    NotARoot(f64),
    #[error("zero boundary polynomial")]
    ZeroPolynomial,
    #[error("root finder did not converge (residual {0:e})")]
    RootFinding(f64),
    #[error("balance violated: relative defect {0:e}")]
    Balance(f64),
    #[error("parameters not generic: {0}")]
    Genericity(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("points outside the domain: {0:?}")]
    OutOfDomain(Vec<C64>),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, QError>;
