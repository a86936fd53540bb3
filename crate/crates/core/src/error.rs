use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),
    #[error("moment of degree {degree} diverges for n = {n} (need n > degree + 1)")]
    DivergentMoment { n: u64, degree: usize },
    #[error("function `{0}` is unbounded and not a polynomial")]
    UnboundedFunction(String),
    #[error("unsupported sequence: {0}")]
    UnsupportedSequence(String),
    #[error("sequence pair violates 2 a0(n) - a1(n) = 1: {0}")]
    SequenceRelation(String),
    #[error("function `{0}` has no registered derivative of order {1}")]
    MissingDerivatives(String, usize),
    #[error("convergence fit is undefined: error at position {0} is not positive")]
    ZeroError(usize),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("parse error at `{0}`")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
