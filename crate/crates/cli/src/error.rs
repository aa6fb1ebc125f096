use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("line {line}: {found} fields, expected {expected}")]
    RaggedRow { line: u64, expected: usize, found: usize },
    #[error("file has no data rows")]
    EmptyFile,
    #[error("duplicate column name {0:?}")]
    DuplicateColumn(String),
    #[error("unknown output format {0:?} (expected json, dot or tsv-trace)")]
    UnknownFormat(String),
    #[error("edge list line {line}: {message}")]
    EdgeList { line: usize, message: String },
    #[error(transparent)]
    Engine(#[from] decomposable::Error),
    #[error("manifest serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for internal inconsistencies, 1 for everything caused by input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Engine(decomposable::Error::InternalInconsistency(_))
            | Self::Engine(decomposable::Error::SeparatorNotPresent(_)) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
