use thiserror::Error;

use crate::maps::PlanarVec;

/// Errors raised by the estimators and map evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A map specification could not be turned into a lift.
    #[error("invalid map specification: {0}")]
    InvalidSpec(String),

    /// An orbit reached a non-finite coordinate.
    #[error("orbit from ({}, {}) became non-finite at step {step}", start.x, start.y)]
    Iteration { start: PlanarVec, step: u64 },

    /// Thread pool construction or output serialization failed.
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
