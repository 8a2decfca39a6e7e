use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    /// Malformed or truncated image data. `offset` is the byte position in
    /// the input where decoding stopped.
    #[error("format error at byte {offset}: {message}")]
    Format { offset: usize, message: String },

    #[error("unsupported format: {0}")]
    Unsupported(String),

    #[error("empty histogram: all counts are zero")]
    EmptyHistogram,

    #[error("degenerate histogram: all pixels share one gray level, no separating threshold exists")]
    DegenerateHistogram,

    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn format(offset: usize, message: impl Into<String>) -> Self {
        Error::Format {
            offset,
            message: message.into(),
        }
    }

    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }
}
