//! Lattice primitives: bases and Gram data, exact integer linear algebra,
//! LLL preconditioning, sphere enumeration, a catalog of named lattices,
//! theta series with the flatness factor, and nested lattice codes.
//!
//! Everything downstream (space-time codes, channel simulation, the CLI)
//! builds on the types here. Conventions used throughout:
//! basis vectors are matrix *columns*, "norm" means squared Euclidean
//! length, and randomized routines take explicit seeds.

pub mod catalog;
pub mod enumerate;
pub mod error;
pub mod intmat;
pub mod lattice;
pub mod lll;
pub mod nested;
pub mod theta;

pub use catalog::CatalogLattice;
pub use enumerate::{
    closest_vector, enumerate_by_norm, is_well_rounded, successive_minima, ClosestPoint,
    Enumerator, LatticePoint, MinimaProfile, VisitFlow,
};
pub use error::{LatticeError, Result};
pub use lattice::{IntegerSublattice, Lattice, LatticeJson};
pub use nested::{normalized_second_moment, volume_to_noise_ratio, Estimate, NestedCodePair};
pub use theta::{
    flatness_factor, jacobi_theta, lattice_gaussian_sum, theta_approximation, theta_closed_form,
    theta_series_coefficients, theta_truncated, JacobiTheta, ThetaApproxResult, ThetaSeries,
    ThetaTruncation,
};
