use thiserror::Error;

pub type Result<V> = std::result::Result<V, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected} modes, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate coefficient: {0}")]
    DegenerateCoefficient(String),

    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    #[error("pair {pair} does not commute (delta = {delta:e})")]
    NotCommuting { pair: String, delta: f64 },

    #[error("coverage gap: no pair tests bipartition(s) {}", .missing.join(", "))]
    CoverageGap { missing: Vec<String> },

    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    NumericFailure { estimate: f64, error_bound: f64 },

    #[error("no feasible candidate in the searched family")]
    NoCandidate,

    #[error("{0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
