//! Error type shared by the space-time code constructions.

use thiserror::Error;

/// Errors raised by algebra and code construction routines.
#[derive(Debug, Error)]
pub enum StcError {
    /// Forwarded lattice-level failure.
    #[error(transparent)]
    Lattice(#[from] latticeforge_core::LatticeError),

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

    /// The operation is defined, but not for this shape of input.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The code is degenerate for the requested quantity.
    #[error("degenerate code: {0}")]
    Degenerate(String),

    /// An internal identity that must hold by construction failed.
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, StcError>;
