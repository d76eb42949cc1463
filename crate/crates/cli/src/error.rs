use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, bad input text, or an instance over the documented limits.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] switchcost::Error),
    /// A checked property failed on a real run.
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for usage and parse errors, 1 for everything detected at run time.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Lib(_) => 2,
            CliError::Invariant(_) | CliError::Io(_) | CliError::Json(_) => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
