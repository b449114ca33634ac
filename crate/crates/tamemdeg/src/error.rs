use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("parse error at position {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("singular matrix")]
    SingularMatrix,

    #[error("unknown gallery entry `{0}`")]
    UnknownGallery(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("gcd({d1}, {d2}) = {gcd} is not 1")]
    NotCoprime { d1: u64, d2: u64, gcd: u64 },

    #[error("not a Keller map: {0}")]
    NotKeller(String),

    #[error("peeling stuck at step {step}: {reason}")]
    PeelStuck { step: usize, reason: String },

    #[error("inconsistent length {length} for multidegree ({d1}, {d2}): {clause}")]
    InconsistentLength {
        d1: u64,
        d2: u64,
        length: usize,
        clause: String,
    },

    #[error("witness verification failed: expected {expected:?}, composed map has {found:?}")]
    VerificationFailed {
        expected: Vec<u64>,
        found: Vec<String>,
    },

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
