use thiserror::Error;

/// Errors raised by the symbol algebra, operators and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Invalid arguments supplied by the caller.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    /// Polynomial factorization failed (wrong zero order or non-positive cofactor).
    #[error("factorization error: {0}")]
    Factorization(String),

    /// A quantity that must hold by construction was violated.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("dense materialization of {requested} unknowns exceeds cap {cap}")]
    DenseCap { requested: usize, cap: usize },

    /// Dense Cholesky met a non-positive pivot.
    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    /// Symbol-level setup failed at a given hierarchy level.
    #[error("level {level}: {source}")]
    AtLevel {
        level: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn at_level(self, level: usize) -> Self {
        match self {
            e @ Error::AtLevel { .. } => e,
            e => Error::AtLevel {
                level,
                source: Box::new(e),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
