use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read instance: {0}")]
    Io(#[from] std::io::Error),

    /// The matrix block ended before `n * n` entries were read.
    #[error("truncated instance: expected {expected} matrix entries, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("malformed instance: {0}")]
    Format(String),

    #[error("{0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// A worker task panicked; the whole batch is discarded.
    #[error("intensification task {slot} failed: {cause}")]
    WorkerFailed { slot: usize, cause: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
