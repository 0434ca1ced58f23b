use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A caller violated an operation's precondition (shape, dimension, parent).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unsupported field: {0} (odd prime 3 <= p <= 251 required)")]
    UnsupportedField(u64),

    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },

    /// The hypothesis of a theorem-level check does not hold for the given input.
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn cap(what: &'static str, size: impl Into<u128>, cap: impl Into<u128>) -> Self {
        Error::CapExceeded { what, size: size.into(), cap: cap.into() }
    }
}
