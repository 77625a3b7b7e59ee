use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] mstl::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {msg}")]
    Parse { path: String, msg: String },
    #[error("{0}")]
    Usage(String),
    /// The run finished but a gating check failed; the report is written.
    #[error("validation failed: {0}")]
    Rejected(String),
    /// The run finished outside a requested accuracy.
    #[error("accuracy target missed: {0}")]
    Accuracy(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Core(_) => 3,
            CliError::Usage(_) | CliError::Rejected(_) => 2,
            CliError::Accuracy(_) => 3,
            CliError::Io { .. } | CliError::Parse { .. } => 4,
        }
    }

    pub fn parse(path: &std::path::Path, msg: impl Into<String>) -> Self {
        CliError::Parse { path: path.display().to_string(), msg: msg.into() }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
