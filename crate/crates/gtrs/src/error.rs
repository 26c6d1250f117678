use thiserror::Error;

use crate::pencil::AssumptionFailure;

/// Errors surfaced by problem construction, file parsing, and parameter
/// validation, plus assumption failure, which carries its diagnostics as
/// a typed payload so intermediate stages can propagate it unchanged.
/// Iteration caps are statuses on the solution, not errors.
#[derive(Debug, Error)]
pub enum GtrsError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    AssumptionFailed(AssumptionFailure),

    #[error("dimension mismatch: {context} (expected {expected}, found {found})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("cannot read '{path}': {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
