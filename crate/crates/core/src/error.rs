use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The edge triple does not form a connected 2- or 3-node pattern.
    #[error("cannot classify edge triple: {0}")]
    Classification(String),

    #[error("motif counter overflowed u64")]
    Overflow,

    /// Counters violated an isomorphism invariant while merging.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}
