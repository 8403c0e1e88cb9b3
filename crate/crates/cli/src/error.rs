use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] hardy_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 3 for a resource cap, 2 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(hardy_core::Error::TermCap { .. }) => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}
