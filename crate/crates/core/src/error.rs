use thiserror::Error;

/// Errors raised by the kernel and the detector.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable-count mismatch: {0} vs {1}")]
    VarCountMismatch(usize, usize),
    #[error("variable index {var} out of range 1..={nvars}")]
    VarOutOfRange { var: usize, nvars: usize },
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("degree {degree} out of range for dimension {n}")]
    DegreeOutOfRange { degree: usize, n: usize },
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("invalid multi-index: {0}")]
    InvalidMultiIndex(String),
    #[error("chart round-trip violation: {0}")]
    ChartRoundTrip(String),
    #[error("chart is not centred at the origin")]
    ChartNotCentred,
    #[error("coefficient vanishes at the base point")]
    VanishingAtBase,
    #[error("form is not closed")]
    NotClosed,
    #[error("zero input")]
    ZeroInput,
    #[error("empty point list")]
    EmptyPoints,
    #[error("degree {degree} excluded: {reason}")]
    ExcludedDegree { degree: usize, reason: String },
    #[error("retry budget exhausted: {0}")]
    RetryExhausted(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
