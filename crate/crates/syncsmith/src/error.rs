use std::path::PathBuf;

/// Exit status of every subcommand.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const NEGATIVE: i32 = 1;
    pub const VIOLATION: i32 = 2;
    pub const USAGE: i32 = 64;
    pub const IO: i32 = 66;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] syncsmith_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{context}: {message}")]
    Format { context: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(context: impl Into<String>, message: impl ToString) -> Self {
        Self::Format {
            context: context.into(),
            message: message.to_string(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::Usage(message.into())
    }

    pub fn exit_code(&self) -> i32 {
        use syncsmith_core::Error as E;
        match self {
            Self::Io { .. } => exit::IO,
            Self::Format { .. } | Self::Usage(_) => exit::USAGE,
            Self::Core(E::PredictionMismatch { .. } | E::TheoremViolation(_)) => exit::VIOLATION,
            Self::Core(_) => exit::USAGE,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
