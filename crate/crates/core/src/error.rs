use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown node id {0}")]
    UnknownNode(usize),
    #[error("invalid selection: {0}")]
    InvalidSelection(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("work limit exceeded: {0}")]
    TooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;
