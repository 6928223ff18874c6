use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain of the requested function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("malformed record on line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("duplicate document id {0}")]
    DuplicateId(u64),

    #[error("corpus contains no documents")]
    EmptyCorpus,

    /// A scheme name or other textual parameter could not be parsed.
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("unsupported index file: {0}")]
    IndexFormat(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
