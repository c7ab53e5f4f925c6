use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("partial quotient must be >= 1, got {0}")]
    InvalidDigit(String),

    #[error("word must be non-empty")]
    EmptyWord,

    #[error("value {0} is outside the open interval (0, 1)")]
    OutOfUnitInterval(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at position {position}: expected {expected}, found {found}")]
    Parse {
        position: usize,
        expected: String,
        found: String,
    },

    #[error("psi({n}) is not defined: {reason}")]
    Domain { n: u64, reason: String },

    #[error("table index {n} out of range (table has {len} entries)")]
    TableIndex { n: u64, len: usize },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("bracket failure: {0}")]
    Bracket(String),

    #[error("not equivalent to a non-decreasing function; the limit set is empty")]
    NotEquivalent,

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
