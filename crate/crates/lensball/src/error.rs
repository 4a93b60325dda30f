use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input pair violates a domain precondition (coprimality, ordering, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A continued-fraction string cannot be evaluated (division by zero
    /// while nesting).
    #[error("non-admissible string: division by zero at coefficient index {0}")]
    NonAdmissible(usize),

    /// A planar-diagram code failed a structural check.
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),

    /// The exact bracket is capped to keep state enumeration bounded.
    #[error("too large for exact bracket: {crossings} crossings exceeds cap {cap}")]
    BracketCap { crossings: usize, cap: usize },

    /// A band's attachment or routing data cannot be realized.
    #[error("unrealizable band: {0}")]
    UnrealizableBand(String),

    /// Enumeration depth above the configured bound.
    #[error("depth overflow: requested {requested}, bound {bound}")]
    DepthOverflow { requested: usize, bound: usize },

    /// A verification step found a mismatch.
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
