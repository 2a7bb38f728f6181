use hybrid_tls::ErrorKind;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("no solution path: {0}")]
    Domain(String),

    #[error(transparent)]
    Sim(#[from] hybrid_tls::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("invalid JSON config: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit code: 2 config, 3 domain or branch, 4 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) | CliError::Json(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Sim(e) => match e.kind() {
                ErrorKind::Config => 2,
                ErrorKind::Domain => 3,
                ErrorKind::Numerical => 4,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
