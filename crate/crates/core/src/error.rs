use std::path::PathBuf;

use thiserror::Error;

/// Errors produced across the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid pair: both sides are {0:?}")]
    InvalidPair(String),

    #[error("cell has no dependency (both degrees are zero)")]
    NoDependency,

    #[error("invalid path {0:?}: no segments after normalization")]
    InvalidPath(String),

    #[error("invalid cell display {0:?}")]
    InvalidCellDisplay(String),

    #[error("invalid name: empty string")]
    InvalidName,

    #[error("ingest failed for {source_path:?}: {message}")]
    Ingest { source_path: String, message: String },

    #[error("unknown revision {revision:?}: {message}")]
    Revision { revision: String, message: String },

    #[error("no services discovered (empty system)")]
    EmptySystem,

    #[error("failed to load IR from {path}: {message}")]
    IrLoad { path: PathBuf, message: String },

    #[error("IR validation failed at {context}: {message}")]
    IrValidation { context: String, message: String },

    #[error("matrices cover different service sets and cannot be merged")]
    InvalidMerge,

    #[error("cannot diff matrices of different kinds ({left} vs {right})")]
    InvalidDiff { left: String, right: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
