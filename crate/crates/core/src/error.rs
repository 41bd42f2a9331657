//! Crate-wide error type.

use std::fmt;

/// Errors produced by configuration validation, numerical consistency
/// checks, and I/O.
#[derive(Debug)]
pub enum Error {
    /// Invalid parameter or malformed configuration input.
    Config(String),
    /// A quantity violated an analytic guarantee by more than floating-point
    /// noise (e.g. a variance radicand far below zero).
    Numerical(String),
    /// Underlying I/O failure.
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::Numerical(msg) => write!(f, "numerical inconsistency: {msg}"),
            Error::Io(err) => write!(f, "i/o error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
