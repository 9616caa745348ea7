//! Error type shared by the channel simulation layer.

use thiserror::Error;

/// Errors from channel sampling, transmission, and decoding.
#[derive(Debug, Error)]
pub enum ChannelError {
    /// Forwarded lattice-level failure.
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

    /// The decoding problem is degenerate as posed.
    #[error("degenerate problem: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, ChannelError>;
