use thiserror::Error;

use crate::op::Variance;

/// Largest number of coefficients a single dense operation may hold.
pub const MAX_ENTRIES: usize = 65_536;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperadError {
    #[error("composition index {index} out of range for an operation of degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("variance mismatch: {left:?} vs {right:?}")]
    VarianceMismatch { left: Variance, right: Variance },
    #[error("operation of dimension {dim} and degree {degree} exceeds the {MAX_ENTRIES}-entry cap")]
    SizeCap { dim: usize, degree: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("result degree {0} is negative")]
    DegreeUnderflow(i64),
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("expected degree {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("multiplication is not associative (norm of micro-associator = {norm})")]
    NotAssociative { norm: String },
    #[error("non-finite value encountered at t = {t}")]
    NonFinite { t: f64 },
    #[error("degree {degree} needs an explicit initial operation")]
    MissingInitialData { degree: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = OperadError> = std::result::Result<T, E>;
