use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("expected {expected} bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("prefix domain of {domain} entries exceeds codeword length {codeword_len}")]
    DomainExceedsCodeword { domain: usize, codeword_len: usize },

    #[error("mark density {0} is degenerate (must lie strictly between 0 and 1)")]
    DegenerateDensity(f64),

    #[error("region {start}..{end} does not fit in {len} bits")]
    OutOfRange { start: usize, end: usize, len: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }
}
