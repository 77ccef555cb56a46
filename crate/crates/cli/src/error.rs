use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Domain(#[from] opuc_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("run {run}: {source}")]
    InRun { run: String, source: Box<CliError> },
}

impl CliError {
    /// Name printed on stderr ahead of the message.
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Config(_) => "ConfigError",
            CliError::Domain(e) => e.name(),
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => "IoError",
            CliError::InRun { source, .. } => source.name(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
