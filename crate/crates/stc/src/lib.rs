//! Space-time block codes built from cyclic algebras: the left-regular
//! representation, the Alamouti and Golden codes, block-diagonal and
//! iterated assembly, determinant criteria, and fast-decodability analysis
//! through anticommutator partitions and R-matrix zero patterns.
//!
//! Number fields are handled numerically: elements live in a coordinate
//! representation and the Galois action is a supplied matrix, so every
//! claim here is checked by direct computation rather than symbolically.

pub mod algebra;
pub mod code;
pub mod error;
pub mod fd;
pub mod iota;

pub use algebra::{
    algebra_mul, golden_algebra, left_regular_rep, quaternion_algebra, CyclicAlgebraSpec,
    FieldDescriptor, FieldElement,
};
pub use code::{
    alamouti_code, block_diagonal_construct, golden_code, iterated_construct, min_determinant,
    natural_order_discriminant, normalized_density, CodeExport, Scan, SpaceTimeCodeSpec,
};
pub use error::{Result, StcError};
pub use fd::{hr_group_partition, r_matrix_pattern, FDClass, FDReport, RMatrixReport, HR_TOL, R_TOL};
pub use iota::{iota, iota_columns, iota_vec};
