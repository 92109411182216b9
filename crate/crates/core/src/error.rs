use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the optimizer, the benchmark harness and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point {point:?} lies outside the domain (coordinate {index})")]
    Domain { point: Vec<f64>, index: usize },

    #[error("black box returned a non-finite value on {channel} at {point:?}")]
    Evaluation { channel: Channel, point: Vec<f64> },

    #[error("samples {first} and {second} share a point but carry different values")]
    DegeneratePair { first: usize, second: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("oracle failed: {0}")]
    Oracle(String),

    #[error("unsupported schema version {found} (supported: {supported})")]
    VersionedFormat { found: u32, supported: u32 },

    #[error("corrupt file at `{field}`: {reason}")]
    CorruptFile { field: String, reason: String },

    #[error("i/o error on {path:?}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("runtime check failed: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which black box a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Objective,
    Constraint(usize),
}

impl std::fmt::Display for Channel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Channel::Objective => write!(f, "objective"),
            Channel::Constraint(s) => write!(f, "constraint {s}"),
        }
    }
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn corrupt(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::CorruptFile {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
