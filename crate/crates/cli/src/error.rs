use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config {path} ({field}): {message}")]
    ConfigInvalid { path: String, field: String, message: String },
    #[error("{0}: {1}")]
    Io(PathBuf, #[source] std::io::Error),
    #[error("writing {0}: {1}")]
    Csv(PathBuf, #[source] csv::Error),
    #[error("{check}: {source}")]
    Compute {
        check: &'static str,
        #[source]
        source: hhi_forge_core::Error,
    },
}

impl CliError {
    /// Process exit status: `2` for configuration problems, `3` for
    /// computation and I/O failures. A completed run with failing checks
    /// exits with `1`.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigInvalid { .. } => 2,
            _ => 3,
        }
    }
}
