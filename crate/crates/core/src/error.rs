use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not symmetric (relative asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive definite (pivot {pivot:.3e} at index {index})")]
    NotSpd { index: usize, pivot: f64 },

    #[error("eigenvalue iteration did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid bracket [{lo}, {hi}]")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("point outside generator domain: {0}")]
    DomainViolation(String),

    #[error("generator is not convex: mu = {mu} must exceed alpha * |B|^2 = {bound}")]
    ConvexityViolation { mu: f64, bound: f64 },

    #[error("strategy mismatch: {0}")]
    StrategyMismatch(String),

    #[error("subproblem failure: {0}")]
    SubproblemFailure(String),
}
