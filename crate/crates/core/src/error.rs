use thiserror::Error;

pub type Result<T> = std::result::Result<T, QsphError>;

#[derive(Debug, Error)]
pub enum QsphError {
    #[error("invalid domain [{a}, {b}]: left endpoint must be below right endpoint")]
    InvalidDomain { a: f64, b: f64 },

    #[error("a discretisation needs at least one particle")]
    NoParticles,

    #[error("partition edges must be finite and strictly increasing")]
    InvalidEdges,

    #[error("need at least 2 sample points, got {0}")]
    TooFewPoints(usize),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("cannot normalise an all-zero vector")]
    ZeroVector,

    #[error("vector of length zero")]
    EmptyVector,

    #[error("state norm {norm} is not 1 (defect exceeds renormalisation tolerance)")]
    NotNormalized { norm: f64 },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("register length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("register length {register} cannot hold {required} particles")]
    RegisterTooSmall { register: usize, required: usize },

    #[error("swap-test state is degenerate (Re<x|y> = {overlap}); eigenvectors are undefined")]
    DegenerateSwapState { overlap: f64 },

    #[error("RMS error of an empty row set")]
    EmptyRows,

    #[error("config error in `{field}`: {reason}")]
    Config { field: &'static str, reason: String },

    #[error("non-finite value produced at x = {x}")]
    NonFinite { x: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("malformed CSV: {0}")]
    MalformedCsv(String),
}

impl QsphError {
    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        QsphError::Config {
            field,
            reason: reason.into(),
        }
    }
}
