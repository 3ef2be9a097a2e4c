//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by ingestion, simulation, estimation and fitting.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input line (edge list, trace or event file).
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    /// A parameter is outside its valid range or inconsistent with the input.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The input does not contain enough information for the operation.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A numeric procedure failed (degenerate system, divergent quantity).
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Serialization failure when writing or reading structured output.
    #[error("serialization: {0}")]
    Serialization(#[from] serde_json::Error),
}
