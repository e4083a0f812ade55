use std::fmt::Display;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("check failed: {0}")]
    Property(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn invalid(msg: impl Display) -> Self {
        Self::Invalid(msg.to_string())
    }

    /// 0 success, 1 invalid input, 2 failed check.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Property(_) => 2,
            CliError::Invalid(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<dynstore_core::Error> for CliError {
    fn from(e: dynstore_core::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
