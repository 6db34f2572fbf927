use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("reserved separator byte '#' found in {context}")]
    ReservedByte { context: String },

    #[error("empty genome collection")]
    EmptyCollection,

    #[error("interval [{start}, {end}] cannot be projected: {msg}")]
    Projection { start: usize, end: usize, msg: String },

    #[error("alignment script for {genome}: {msg}")]
    Script { genome: String, msg: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("index {index} out of bounds (1..={len})")]
    Bounds { index: usize, len: usize },

    #[error("malformed structure: {0}")]
    Structure(String),

    #[error("validation failed for genome {genome}: {msg}")]
    Validation { genome: String, msg: String },

    #[error("index format error in section '{section}': {msg}")]
    Format { section: String, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn format(section: &str, msg: impl Into<String>) -> Self {
        Error::Format {
            section: section.to_string(),
            msg: msg.into(),
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
