//! Error type shared across the compute-and-forward crate.

use latticeforge_core::LatticeError;
use thiserror::Error;

/// Errors raised by rate computation, coefficient selection, and decoding.
#[derive(Debug, Error)]
pub enum CfError {
    /// Forwarded lattice-layer failure.
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    /// A vector or matrix had the wrong shape for the operation.
    #[error("{context}: expected {expected}, got {got}")]
    Dimension {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    /// An argument violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),
    /// An enumeration or codebook product exceeded its cap.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// An internal consistency check failed.
    #[error("inconsistent state: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, CfError>;
