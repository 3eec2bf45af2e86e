use thiserror::Error;

/// Errors raised by the quaternionic linear algebra routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: String, got: String },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("operator is not normal (defect {defect:.3e})")]
    NotNormal { defect: f64 },

    #[error("operator is not positive")]
    NotPositive,

    #[error("complex matrix lacks the symplectic symmetry (defect {defect:.3e})")]
    Structure { defect: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("operator is zero")]
    ZeroOperator,

    #[error("vector is not a unit vector (norm {norm})")]
    NonUnit { norm: f64 },

    #[error("parse error at entry {index}: {message}")]
    Parse { index: usize, message: String },

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
