use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("block size mismatch: ({left1}, {left2}) vs ({right1}, {right2})")]
    SizeMismatch {
        left1: usize,
        left2: usize,
        right1: usize,
        right2: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("element is not skew-Hermitian (defect {0:e})")]
    NotSkewHermitian(f64),

    #[error("element lies outside the span of the combined basis (residual {0:e})")]
    OutsideSpan(f64),

    #[error("metric Gram matrix is singular")]
    SingularMetric,

    #[error(
        "omega(X, IY) is not symmetric (defect {0:e}); form and structure conventions disagree"
    )]
    AsymmetricMetric(f64),

    #[error("bivector is not unit (norm {0})")]
    NotUnit(f64),

    #[error("bivector is not decomposable (Plücker residual {0:e})")]
    NotDecomposable(f64),

    #[error("invalid search options: {0}")]
    InvalidOptions(String),
}

pub type Result<T> = std::result::Result<T, Error>;
