use thiserror::Error;

/// Errors produced anywhere in the classification pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("vertices {0} and {1} are not connected")]
    Unreachable(usize, usize),

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("unknown {kind} `{name}` (known: {known})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
