use thiserror::Error;

/// Errors reported by the algorithms and parsers in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range for side of size {len}")]
    OutOfRange { index: usize, len: usize },

    #[error("malformed matrix: {0}")]
    Parse(String),

    #[error("not a tree pattern: {0}")]
    NotATree(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("parade too short: need length ({required}, {required}), have ({have_neg}, {have_pos})")]
    ParadeTooShort {
        required: u64,
        have_neg: usize,
        have_pos: usize,
    },

    #[error("pattern too large for host: {0}")]
    PatternTooLarge(String),

    #[error("certificate broken at {0}")]
    CertificateBroken(String),

    #[error("instance too large for exact oracle: {0}")]
    TooLarge(String),

    #[error("no admissible sample after {0} seeds")]
    RetriesExhausted(u32),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
