use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Help or version text was requested.
    #[error("{0}")]
    Help(String),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {message}")]
    Schema { path: PathBuf, message: String },

    #[error("cylindrical surface: the director is stationary at u = {u}")]
    Cylindrical { u: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(ruled::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help(_) => 0,
            CliError::Usage(_) | CliError::Schema { .. } | CliError::Core(_) => 1,
            CliError::Cylindrical { .. } => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<ruled::Error> for CliError {
    fn from(e: ruled::Error) -> Self {
        match e {
            ruled::Error::CylindricalDirector { u } => CliError::Cylindrical { u },
            other => CliError::Core(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
