use thiserror::Error;

/// Errors surfaced by parsing, validation and the solver drivers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("instance too large: n={n} exceeds limit {limit}")]
    SizeLimit { n: usize, limit: usize },

    #[error("graph is complete: it has no vertex cut")]
    CompleteGraph,

    #[error("no candidate vertex: {0}")]
    NoCandidate(String),

    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
