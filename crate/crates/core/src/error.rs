use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid step function: {0}")]
    InvalidStep(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("unsupported norm request: {0}")]
    NonNormable(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid sampled function: {0}")]
    InvalidSample(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid interval family: {0}")]
    InvalidFamily(String),
    #[error("hypotheses violated: {0}")]
    Hypotheses(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
