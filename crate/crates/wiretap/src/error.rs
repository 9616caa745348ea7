//! Error type for the wiretap coding layer.

use thiserror::Error;

/// Errors raised by wiretap encoding, bounding, and comparison routines.
#[derive(Debug, Error)]
pub enum WiretapError {
    /// Forwarded lattice-level failure (enumeration caps surface here).
    #[error(transparent)]
    Lattice(#[from] latticeforge_core::LatticeError),

    /// Forwarded space-time code failure.
    #[error(transparent)]
    Stc(#[from] latticeforge_stc::StcError),

    /// An input had the wrong dimensions for the operation.
    #[error("{context}: expected dimension {expected}, got {got}")]
    Dimension {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// An argument was outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An identity that must hold by construction failed at runtime.
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, WiretapError>;
