use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("offset delta must exceed -1, got {0}")]
    InvalidDelta(f64),
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("order statistic count k={k} outside [1, {max}]")]
    KOutOfRange { k: usize, max: usize },
    #[error("degree k must be at least {min}, got {k}")]
    InvalidDegree { k: u64, min: u64 },
    #[error("sample must be sorted in descending order (violated at index {0})")]
    NotSorted(usize),
    #[error("sample values must be finite and positive (index {0})")]
    NonPositive(usize),
    #[error("degenerate tail: the top {0} order statistics are tied")]
    DegenerateTail(usize),
    #[error("no scannable threshold with k >= {k_min} in a sample of size {n}")]
    NoThreshold { k_min: usize, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && delta > -1.0 {
        Ok(())
    } else {
        Err(Error::InvalidDelta(delta))
    }
}
