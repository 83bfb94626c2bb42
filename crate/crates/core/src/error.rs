use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// One message per violated parameter bound.
    #[error("invalid parameters: {}", .0.join("; "))]
    InvalidParams(Vec<String>),

    #[error("invalid interval [{lo}, {hi}): lo must be < hi")]
    EmptyInterval { lo: i64, hi: i64 },

    #[error("self-edge {{{0}, {0}}} is not an edge")]
    SelfEdge(i64),

    #[error("coupling distance must be at least 1")]
    ZeroDistance,

    #[error("{what} [{lo}, {hi}) is not contained in the sampled box [{box_lo}, {box_hi})")]
    OutsideBox {
        what: &'static str,
        lo: i64,
        hi: i64,
        box_lo: i64,
        box_hi: i64,
    },

    #[error("too few samples: {got} (need at least {min})")]
    TooFewSamples { got: usize, min: usize },

    #[error("{0}")]
    Precondition(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
