use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed number: {0:?}")]
    MalformedNumber(String),

    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("compound order {order} out of range for dimension {n}")]
    OrderOutOfRange { order: usize, n: usize },

    #[error("dimension {dim} exceeds the exhaustive-scan cap of {cap}")]
    FeasibilityExceeded { dim: usize, cap: usize },

    #[error("matrix is not totally nonnegative: {0}")]
    NotTn(String),

    #[error("matrix is not invertible totally nonnegative: {0}")]
    NotItn(String),

    #[error("oscillatory criteria disagree: {0}")]
    MethodDisagreement(String),

    #[error("factor product cannot be brought into canonical order: {0}")]
    NotNormalizable(String),

    #[error("malformed factorization: {0}")]
    MalformedFactorization(String),

    #[error("networks have different track counts ({0} vs {1})")]
    TrackMismatch(usize, usize),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("matrix is not oscillatory: {0}")]
    NotOscillatory(String),

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("invalid psi pattern: {0}")]
    InvalidPsiPattern(String),

    #[error("no exponent prediction available: {0}")]
    Unpredictable(String),

    #[error("family members carry different class tags: {0}")]
    ClassMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
