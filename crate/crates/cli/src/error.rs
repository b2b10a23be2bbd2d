use std::path::Path;

use thiserror::Error;

/// Unusable input: unreadable, malformed or inconsistent documents. Mapped
/// to exit code 2.
#[derive(Debug, Error)]
#[error("{path}: {message}")]
pub struct CliError {
    pub path: String,
    pub message: String,
}

impl CliError {
    pub fn input(path: &Path, message: impl Into<String>) -> Self {
        CliError { path: path.display().to_string(), message: message.into() }
    }

    pub fn bare(message: impl Into<String>) -> Self {
        CliError { path: "<arguments>".into(), message: message.into() }
    }
}
