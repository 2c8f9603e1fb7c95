use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed textual input (forest keys, words, z-indices, numbers).
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// Input outside an operation's domain (e.g. a word not ending in y
    /// handed to R_y^{-1}, a non-admissible word handed to Z).
    #[error("domain error: {0}")]
    Domain(String),

    /// Ragged matrices or mismatched truncation orders.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A theorem-level guarantee failed at runtime. Never expected; if it
    /// fires, the input exposed a real defect and processing must stop.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
