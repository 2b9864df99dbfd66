use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of bounds (len {len})")]
    OutOfBounds { index: u64, len: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Bad user input: unsorted keys, forbidden bytes and the like.
    #[error("invalid input: {0}")]
    Input(String),

    /// Malformed serialized data.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub(crate) fn check_bounds(index: u64, len: u64) -> Result<()> {
        if index < len {
            Ok(())
        } else {
            Err(Error::OutOfBounds { index, len })
        }
    }
}
