use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("overflow: {0} exceeds the 64-bit range")]
    Overflow(String),

    #[error("invalid base: {0}")]
    InvalidBase(String),

    #[error("invalid digit word: {0}")]
    InvalidWord(String),

    #[error("transducer has no path: {0}")]
    NoPath(String),

    #[error("invalid probability sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid b-sequence: b({index}) = {value} must be positive and finite")]
    InvalidB { index: usize, value: f64 },

    #[error("budget exceeded: {requested} states requested, limit is {limit}")]
    BudgetExceeded { requested: u64, limit: u64 },

    #[error("infimum of the probability sequence is 0; supply an explicit escape radius")]
    ZeroDelta,

    #[error("invalid escape configuration: {0}")]
    InvalidEscape(String),

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("invalid seed values: {0}")]
    InvalidSeed(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
