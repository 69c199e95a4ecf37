use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two polynomials built over different variable contexts were combined.
    #[error("variable context mismatch")]
    ContextMismatch,
    /// A coefficient computation left the `i64` range. Exact arithmetic is
    /// required everywhere, so this aborts the operation instead of wrapping.
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    /// A sequence that must consist of distinct entries contained a repeat.
    #[error("duplicate entries in sequence")]
    DuplicateEntries,
    #[error("invalid disposition: {0}")]
    InvalidDisposition(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("invalid cycle decomposition: {0}")]
    InvalidCycles(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    /// A parameter violated a documented precondition (for example `n = 0`).
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
