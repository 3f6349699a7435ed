//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All error conditions produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Underlying file could not be read or written.
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Malformed CSV input; `row` is the 1-based data row index.
    #[error("parse error at row {row}: {message}")]
    Parse { row: u64, message: String },

    /// Input has zero data rows and the caller did not allow that.
    #[error("empty input: {0}")]
    EmptyInput(String),

    /// An operation that requires categorical data hit a continuous column.
    #[error("column '{0}' is continuous; discretize it first or exclude it")]
    ContinuousColumn(String),

    /// A column selection is out of range, duplicated, or otherwise unusable.
    #[error("invalid selection: {0}")]
    InvalidSelection(String),

    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Fewer analyzable columns than the operation needs.
    #[error("too few columns: need {needed}, got {got}")]
    TooFewColumns { needed: usize, got: usize },

    /// Two partitions built from different tables were combined.
    #[error("mismatched tables: '{left}' vs '{right}'")]
    MismatchedTable { left: String, right: String },

    /// Two dependency sets were mined under different configurations.
    #[error("config mismatch: {0}")]
    ConfigMismatch(String),

    /// Real and synthetic tables do not expose the same categorical columns.
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
