use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("axis {axis} out of range for dimension {dim} (axes are 1-based)")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("transposition needs two distinct axes, got ({0}, {0})")]
    SameAxis(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature rule does not match parameters: {0}")]
    RuleMismatch(String),

    #[error("simplex rule failed moment validation: multi-index {alpha:?}, relative error {rel_err:e}")]
    MomentValidation { alpha: Vec<u32>, rel_err: f64 },

    #[error("non-finite integrand value at node {0}")]
    NonFinite(usize),

    #[error("h-harmonic nullspace has dimension {got}, expected {expected}")]
    NullspaceDimension { expected: usize, got: usize },

    #[error("Gram matrix is not positive definite (sphere quadrature order too low?)")]
    GramNotPositiveDefinite,

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cancelled")]
    Cancelled,
}

pub type Result<T> = std::result::Result<T, Error>;
