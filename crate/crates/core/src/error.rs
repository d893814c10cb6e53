//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A truncation specification violates one of its invariants.
    #[error("invalid truncation spec: {0}")]
    InvalidSpec(String),
    /// An element or subgroup was used with a group it does not belong to.
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    /// A configured enumeration or search cap was exceeded.
    #[error("budget exceeded: {what} is {size}, cap is {cap}")]
    Budget {
        /// What was being counted.
        what: String,
        /// The size that was reached or requested.
        size: usize,
        /// The configured cap.
        cap: usize,
    },
    /// A fusion generator is not an automorphism (or isomorphism) of its subgroup.
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    /// An operation was called outside its documented precondition.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// Serialized data could not be interpreted.
    #[error("malformed data: {0}")]
    Malformed(String),
    /// A catalog name did not resolve.
    #[error("unknown catalog entry: {0}")]
    UnknownEntry(String),
    /// JSON (de)serialization failure.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
