use alloc::string::String;

use crate::expr::{DomainError, ParseError};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GeomError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("domain error: {0}")]
    Domain(#[from] DomainError),
    #[error("dimension mismatch in {what}: expected {expected}x{expected}, found {found}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        found: String,
    },
    #[error("invalid manifold: {0}")]
    InvalidManifold(String),
    #[error("degenerate metric (|det| = {det:e})")]
    DegenerateMetric { det: f64 },
    #[error("negative discriminant p^2+4q = {0}")]
    NegativeDiscriminant(f64),
    #[error("discriminant p^2+4q vanishes")]
    ZeroDiscriminant,
    #[error("discriminant p^2+4q = {0} must be negative")]
    WrongDiscriminant(f64),
    #[error("structure is not Norden (|J^2+I| = {square_err:e}, symmetry defect {symmetry_err:e})")]
    NotNorden { square_err: f64, symmetry_err: f64 },
}

pub type Result<T, E = GeomError> = core::result::Result<T, E>;
