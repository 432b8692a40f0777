//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside an operation's domain (wrong signature, wrong basis, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Malformed textual input; `pos` is a byte offset.
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    /// A linear form used to pick positive roots vanishes on a root.
    #[error("linear form vanishes on the root {root}")]
    Wall { root: String },
    /// A glue element with non-zero quadratic value.
    #[error("class {element} is not isotropic: q = {q}")]
    NotIsotropic { element: String, q: String },
    /// An internal identity that must hold failed; indicates a bug.
    #[error("consistency error: {0}")]
    Consistency(String),
    /// A bounded search ran out of budget before finishing.
    #[error("search budget exhausted")]
    Budget,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
