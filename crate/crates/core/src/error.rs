//! Error types shared across the pipeline.

use std::path::PathBuf;

/// Failures while compiling a log format template.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("format template is empty")]
    Empty,

    #[error("unknown capture group {0}")]
    UnknownCaptureGroup(String),

    #[error("format template has no {{X.X.X.X}} slot")]
    MissingIpSlot,

    #[error("capture group {0} appears more than once")]
    DuplicateSlot(String),

    #[error("format template needs both a date slot and a {{HH:MM:SS}} slot")]
    MissingTimestamp,
}

/// Failures while reading a `key = value` configuration file.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },

    #[error("key `{key}`: {reason}")]
    InvalidValue { key: String, reason: String },

    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
}

/// Top-level error for library entry points that touch the filesystem.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Format(#[from] FormatError),

    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to encode {path}: {reason}")]
    Image { path: PathBuf, reason: String },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
