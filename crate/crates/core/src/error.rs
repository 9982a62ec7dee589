use thiserror::Error;

/// Errors raised anywhere in the engine.
///
/// The variants map onto the command-line exit codes: `Input`, `Parse`,
/// `Resource` and `Io` are input problems (exit 2); the rest are
/// verification outcomes (exit 1).
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("correspondence violation: {0}")]
    Violation(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Input(_) | Error::Parse { .. } | Error::Resource(_) | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
