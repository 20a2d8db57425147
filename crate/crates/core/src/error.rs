use thiserror::Error;

/// Errors raised by constructors and checkers.
///
/// `Precondition` is kept distinct from an inequality failure: a checker that
/// returns `Ok` with `pass == false` found a violation, while a checker that
/// returns `Err(Precondition)` refused to evaluate the inequality at all.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {message}")]
    Precondition {
        message: String,
        witness: Option<String>,
    },

    #[error("size limit exceeded: {what} needs {requested}, limit is {limit}")]
    Size {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition {
            message: msg.into(),
            witness: None,
        }
    }

    pub(crate) fn precondition_with(msg: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::Precondition {
            message: msg.into(),
            witness: Some(witness.into()),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
