use thiserror::Error;

/// Errors surfaced by lattice construction, enumeration, and coding routines.
#[derive(Debug, Error)]
pub enum LatticeError {
    /// Basis columns are linearly dependent (or numerically indistinguishable from it).
    #[error("basis is singular: |det| = {det:.3e} below tolerance")]
    SingularBasis { det: f64 },

    /// The Gram matrix failed its Cholesky factorization, i.e. it is not positive definite.
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,

    /// An enumeration visited more points than the configured cap.
    #[error("enumeration exceeded cap of {cap} points (radius {radius:.6})")]
    Capacity { cap: u64, radius: f64 },

    /// Dimension mismatch between interacting objects.
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    Dimension {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// A sublattice transform must be integral with nonzero determinant.
    #[error("sublattice transform is singular over the integers")]
    SingularSublattice,

    /// Invalid argument outside structural dimension checks.
    #[error("invalid argument: {0}")]
    Domain(String),

    /// A computation that must resolve exactly (e.g. coset census) failed to.
    #[error("{0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, LatticeError>;
