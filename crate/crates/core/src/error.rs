use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("point is off the sphere: |p| = {norm}, expected radius {radius}")]
    OffSphere { norm: f64, radius: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument `{field}`: {reason}")]
    InvalidArgument { field: &'static str, reason: String },

    #[error("zero-norm field")]
    ZeroNorm,

    #[error("non-finite integrand at node {node}")]
    NonFinite { node: usize },

    #[error("mass matrix not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("quadrature rule too coarse: {0}")]
    RuleTooCoarse(String),

    #[error("unsupported dimension n = {n}; use monte_carlo_rule")]
    UnsupportedDimension { n: usize },

    #[error("exact mode required: {0}")]
    ExactModeRequired(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("Ricci hypothesis not met: margin {margin:e} below (n-1)k^2")]
    RicciHypothesis { margin: f64 },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, reason: impl Into<String>) -> Self {
        Error::Parse {
            line,
            reason: reason.into(),
        }
    }

    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            field,
            reason: reason.into(),
        }
    }
}
