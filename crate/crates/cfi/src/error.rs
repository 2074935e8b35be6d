use std::fmt;
use std::io;
use std::path::PathBuf;

use cfi_core::{CfError, ProbError};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const ERROR: i32 = 1;
    /// The run completed but printed values disagree with computed ones.
    pub const MISMATCH: i32 = 2;
    pub const USAGE: i32 = 64;
    pub const BAD_PARAMETER: i32 = 65;
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    /// Invalid scheme or run parameters.
    Parameter(String),
    Io {
        path: PathBuf,
        source: io::Error,
    },
    /// A file does not parse.
    Format {
        what: &'static str,
        detail: String,
    },
    Core(CfError),
    /// A run finished but a check failed.
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => exit::USAGE,
            Self::Parameter(_) | Self::Core(CfError::Parameter(_)) => exit::BAD_PARAMETER,
            _ => exit::ERROR,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(what: &'static str, detail: impl fmt::Display) -> Self {
        Self::Format {
            what,
            detail: detail.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(msg) => write!(f, "usage: {msg}"),
            Self::Parameter(msg) => write!(f, "invalid parameter: {msg}"),
            Self::Io { path, source } => write!(f, "{}: {source}", path.display()),
            Self::Format { what, detail } => write!(f, "malformed {what}: {detail}"),
            Self::Core(e) => write!(f, "{e}"),
            Self::Check(msg) => write!(f, "check failed: {msg}"),
        }
    }
}

impl std::error::Error for CliError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Self::Io { source, .. } => Some(source),
            Self::Core(e) => Some(e),
            _ => None,
        }
    }
}

impl From<CfError> for CliError {
    fn from(e: CfError) -> Self {
        Self::Core(e)
    }
}

impl From<ProbError> for CliError {
    fn from(e: ProbError) -> Self {
        match e {
            ProbError::Domain(msg) => Self::Parameter(msg),
            other => Self::Core(other.into()),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
