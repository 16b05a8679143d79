use thiserror::Error;

/// Errors produced by every computation path in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the operation's domain (vertex out of range, u = v, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The spec itself is malformed.
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    /// The graph is disconnected, so resistances and hitting times are infinite.
    #[error("graph is disconnected (n = {n})")]
    Disconnected { n: usize },

    /// The request is well formed but outside what the chosen method covers.
    #[error("unsupported case: {0}")]
    Unsupported(String),

    /// An exact computation that must produce an integer (or rational) did not.
    #[error("integrality check failed: {0}")]
    NotIntegral(String),

    /// A brute-force routine refused an instance that is too large to enumerate.
    #[error("instance too large: {0}")]
    TooLarge(String),

    /// Too many random walks ran into the step cap.
    #[error("{truncated} of {walks} walks exceeded max_steps = {max_steps}")]
    Truncated {
        truncated: usize,
        walks: usize,
        max_steps: u64,
    },

    /// A linear system that should be nonsingular was singular.
    #[error("singular system: {0}")]
    Singular(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
