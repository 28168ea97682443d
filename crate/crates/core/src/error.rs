use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported; the field order must be odd")]
    EvenCharacteristic,
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("size {size} exceeds the configured cap {cap}")]
    SizeCapExceeded { size: u128, cap: u64 },
    #[error("element code {code} out of range for a field of order {q}")]
    CodeOutOfRange { code: u64, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("numerical residual {residual:e} exceeds tolerance {tolerance:e} ({context})")]
    ResidualTooLarge { residual: f64, tolerance: f64, context: String },
    #[error("backend `{backend}` is not supported for this field: {reason}")]
    BackendUnsupported { backend: &'static str, reason: String },
    #[error("integer overflow while computing {0}")]
    IntegerOverflow(&'static str),
    #[error("operation requires a nonempty point set")]
    EmptySet,
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("set spec parse error at position {position}: {message}")]
    SpecParse { position: usize, message: String },
    #[error("requested {requested} points but the space only has {available}")]
    SizeExceedsSpace { requested: u64, available: u64 },
    #[error("point-set file {}: line {line}: {message}", path.display())]
    FileFormat { path: PathBuf, line: usize, message: String },
    #[error("i/o error on {}: {message}", path.display())]
    Io { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn spec_parse(position: usize, message: impl Into<String>) -> Self {
        Error::SpecParse { position, message: message.into() }
    }
}
