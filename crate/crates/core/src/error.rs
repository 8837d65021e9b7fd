use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed grid: {0}")]
    MalformedGrid(String),

    /// Row/column indices are 1-based, as printed to users.
    #[error("{line} {index} repeats symbol {symbol}")]
    NotLatin {
        line: LineKind,
        index: usize,
        symbol: u32,
    },

    #[error("{what} {requested} exceeds the configured bound {limit}")]
    BoundExceeded {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("value unavailable: {0}")]
    Unavailable(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKind {
    Row,
    Column,
}

impl std::fmt::Display for LineKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LineKind::Row => "row",
            LineKind::Column => "column",
        })
    }
}
