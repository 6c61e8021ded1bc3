use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Semantic(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Semantic(_) => 3,
            Error::Cap(_) => 4,
        }
    }
}

pub(crate) fn semantic<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Semantic(msg.into()))
}
