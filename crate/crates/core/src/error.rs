use thiserror::Error;

/// Errors raised by vector operations, metrics and table handling.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right} coordinates")]
    LengthMismatch { left: usize, right: usize },

    #[error("vector has zero coordinates")]
    ZeroLength,

    #[error("invalid symbol {symbol:?} at coordinate {position}")]
    InvalidSymbol { symbol: char, position: usize },

    #[error("vector is not compacted (a 0 precedes a 1)")]
    NotCompacted,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: row has {found} coordinates, table has {expected}")]
    WidthMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("table has no rows")]
    EmptyTable,

    #[error("line {line}: duplicate row label {label:?}")]
    DuplicateLabel { line: usize, label: String },

    #[error("query mode mismatch: {0}")]
    ModeMismatch(&'static str),

    #[error("k must be at least 1")]
    ZeroRank,

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::LengthMismatch { left, right })
    }
}
