use std::path::PathBuf;

/// Errors raised anywhere in the parsing pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A malformed line in one of the text formats (tagset, lexicon, rules, corpus, model, config).
    #[error("{what} line {line}: {msg}")]
    Format {
        what: &'static str,
        line: usize,
        msg: String,
    },

    #[error("unknown tag `{0}`")]
    UnknownTag(String),

    #[error("sequence of length {len} is too short for {mode} encoding")]
    SequenceTooShort { len: usize, mode: &'static str },

    #[error("tag id {id} out of range for {m} symbols")]
    TagOutOfRange { id: usize, m: usize },

    #[error("vector index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("candidate generation exceeded the cap of {cap} strings")]
    TooManyCandidates { cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("empty input: {0}")]
    Empty(&'static str),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(what: &'static str, line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            what,
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
