use thiserror::Error;

use crate::Elem;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent input data.
    #[error("input error: {0}")]
    Input(String),
    /// An operation was called outside its domain.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An exhaustive computation would exceed a configured bound.
    #[error("resource bound exceeded: {what} needs {size}, limit is {limit}")]
    Resource {
        what: String,
        size: usize,
        limit: usize,
    },
    /// A property that must hold by a theorem failed on a concrete instance.
    #[error("theorem violation in {check}: witness {witness:?}")]
    Violation { check: String, witness: Vec<Elem> },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn violation(check: impl Into<String>, witness: Vec<Elem>) -> Self {
        Error::Violation {
            check: check.into(),
            witness,
        }
    }

    pub fn is_violation(&self) -> bool {
        matches!(self, Error::Violation { .. })
    }
}
