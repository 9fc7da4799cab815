use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported base field size q = {0} (supported: 2, 3, 5)")]
    UnsupportedPrime(u32),
    #[error("extension degree m = {0} out of range 1..=32")]
    UnsupportedDegree(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not belong to the field GF({q}^{m})")]
    NotInField { q: u32, m: usize },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("rank {u} out of range 0..={max}")]
    RankOutOfRange { u: usize, max: usize },
    #[error("enumeration guard exceeded: {what} needs {needed} objects, limit is {limit}")]
    GuardExceeded {
        what: &'static str,
        needed: String,
        limit: String,
    },
    #[error("vectors are not linearly independent over the base field")]
    NotIndependent,
    #[error("subspaces are not complementary")]
    NotComplementary,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("simulation invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
