use std::path::{Path, PathBuf};

use serde::Serialize;

/// Failure of a subcommand. `Input` errors are the caller's fault and exit
/// with code 2; everything else exits with 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}{message}", location(path))]
    Input { path: Option<PathBuf>, message: String },
    #[error("{}{message}", location(path))]
    Internal { path: Option<PathBuf>, message: String },
}

fn location(path: &Option<PathBuf>) -> String {
    path.as_ref().map(|p| format!("{}: ", p.display())).unwrap_or_default()
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    kind: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
    exit_code: u8,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError::Input {
            path: None,
            message: message.into(),
        }
    }

    pub fn input_at(path: &Path, message: impl Into<String>) -> Self {
        CliError::Input {
            path: Some(path.to_path_buf()),
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError::Internal {
            path: None,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        match err.kind() {
            std::io::ErrorKind::NotFound | std::io::ErrorKind::InvalidData | std::io::ErrorKind::PermissionDenied => {
                Self::input_at(path, err.to_string())
            }
            _ => CliError::Internal {
                path: Some(path.to_path_buf()),
                message: err.to_string(),
            },
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input { .. } => 2,
            CliError::Internal { .. } => 1,
        }
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        let (kind, path, message) = match self {
            CliError::Input { path, message } => ("input", path, message),
            CliError::Internal { path, message } => ("internal", path, message),
        };
        serde_json::to_string(&ErrorReport {
            error: message,
            kind,
            path: path.as_ref().map(|p| p.display().to_string()),
            exit_code: self.exit_code(),
        })
        .unwrap_or_else(|_| format!("{{\"error\":{message:?}}}"))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
