use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed quantum numbers, e.g. a projection incompatible with its spin.
    #[error("domain error: {0}")]
    Domain(String),
    /// Request outside the range where results are trusted.
    #[error("accuracy guard: {0}")]
    Accuracy(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {dim} exceeds the exact-engine limit {limit}")]
    DimensionLimit { dim: usize, limit: usize },
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("invalid density operator: {0}")]
    InvalidState(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("label {0:?} is coupled into a composite factor; uncouple before tracing")]
    CoupledLabel(String),
    #[error("operands live on different spaces: {0}")]
    SpaceMismatch(String),
    #[error("conditioning on an event of probability {0:e}")]
    NullEvent(f64),
    #[error("spectrum is not commensurate with period {period}: {detail}")]
    Incommensurate { period: f64, detail: String },
    #[error("numerical drift {0:e} exceeds tolerance")]
    Drift(f64),
    #[error("malformed coupling tree: {0}")]
    Tree(String),
    #[error("invalid spin network: {0}")]
    Network(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
