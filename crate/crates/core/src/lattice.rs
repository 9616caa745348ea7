//! Full-rank real lattices given by a generator matrix whose columns are the basis.

use crate::error::{LatticeError, Result};
use crate::intmat;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Relative spectral tolerance used when deciding that a basis is singular.
const SINGULAR_TOL: f64 = 1e-12;

/// A full-rank lattice in R^n: all integer combinations of the basis columns.
#[derive(Debug, Clone)]
pub struct Lattice {
    basis: DMatrix<f64>,
    gram: DMatrix<f64>,
    volume: f64,
}

impl Lattice {
    /// Builds a lattice from a square generator matrix (columns = basis vectors).
    pub fn from_basis(basis: DMatrix<f64>) -> Result<Self> {
        let n = basis.nrows();
        if n == 0 || basis.ncols() != n {
            return Err(LatticeError::Dimension {
                context: "generator matrix must be square and nonempty",
                expected: n.max(1),
                got: basis.ncols(),
            });
        }
        let gram = basis.transpose() * &basis;
        // Scale-aware singularity check on the spectrum, so heavily sheared
        // bases (e.g. Hermite-form generators) still pass while genuinely
        // rank-deficient ones fail.
        let sv = basis.clone().svd(false, false).singular_values;
        let smax = sv.max();
        let smin = sv.min();
        let volume: f64 = sv.iter().product();
        if !(smin > SINGULAR_TOL * smax.max(f64::MIN_POSITIVE)) {
            return Err(LatticeError::SingularBasis { det: volume });
        }
        Ok(Self {
            basis,
            volume,
            gram,
        })
    }

    /// Dimension n of the ambient space (and of the lattice).
    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// The generator matrix; columns are the basis vectors.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Gram matrix  B^T B  of the basis.
    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// Fundamental volume  sqrt(det Gram).
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// The lattice vector with the given integer coordinates.
    pub fn vector(&self, coords: &[i64]) -> DVector<f64> {
        let z = DVector::from_iterator(coords.len(), coords.iter().map(|&c| c as f64));
        &self.basis * z
    }

    /// Real-valued coordinates of an arbitrary point in this basis.
    pub fn coords_of(&self, point: &DVector<f64>) -> Result<DVector<f64>> {
        if point.len() != self.dim() {
            return Err(LatticeError::Dimension {
                context: "point dimension",
                expected: self.dim(),
                got: point.len(),
            });
        }
        self.basis
            .clone()
            .lu()
            .solve(point)
            .ok_or(LatticeError::SingularBasis { det: 0.0 })
    }

    /// The lattice scaled by `c`, i.e. with basis `c * B`.
    pub fn scale(&self, c: f64) -> Result<Self> {
        if c == 0.0 || !c.is_finite() {
            return Err(LatticeError::Domain(format!("invalid scale factor {c}")));
        }
        Self::from_basis(&self.basis * c)
    }

    /// Integer sublattice with basis  B * G  for an integer transform G.
    ///
    /// The index of the sublattice is |det G|.
    pub fn sublattice(&self, transform: &[Vec<i64>]) -> Result<IntegerSublattice> {
        let n = self.dim();
        if transform.len() != n || transform.iter().any(|r| r.len() != n) {
            return Err(LatticeError::Dimension {
                context: "sublattice transform shape",
                expected: n,
                got: transform.len(),
            });
        }
        let as_i128: Vec<Vec<i128>> = transform
            .iter()
            .map(|r| r.iter().map(|&v| v as i128).collect())
            .collect();
        let det = intmat::det_i128(&as_i128);
        if det == 0 {
            return Err(LatticeError::SingularSublattice);
        }
        let g = DMatrix::from_fn(n, n, |i, j| transform[i][j] as f64);
        let child = Lattice::from_basis(&self.basis * g)?;
        Ok(IntegerSublattice {
            parent: self.clone(),
            transform: transform.to_vec(),
            index: det.unsigned_abs() as u128 as u64,
            child,
        })
    }

    /// Serializable snapshot (row-major basis).
    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            n: self.dim(),
            basis: self
                .basis
                .row_iter()
                .flat_map(|r| r.iter().copied().collect::<Vec<_>>())
                .collect(),
        }
    }

    /// Rebuilds a lattice from its serialized form.
    pub fn from_json(json: &LatticeJson) -> Result<Self> {
        if json.basis.len() != json.n * json.n {
            return Err(LatticeError::Dimension {
                context: "serialized basis length",
                expected: json.n * json.n,
                got: json.basis.len(),
            });
        }
        Ok(Self::from_basis(DMatrix::from_row_slice(
            json.n,
            json.n,
            &json.basis,
        ))?)
    }
}

/// JSON form of a lattice: dimension plus the row-major generator matrix.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LatticeJson {
    pub n: usize,
    pub basis: Vec<f64>,
}

/// A sublattice  B*G  of a parent lattice, with G integral and nonsingular.
#[derive(Debug, Clone)]
pub struct IntegerSublattice {
    parent: Lattice,
    transform: Vec<Vec<i64>>,
    index: u64,
    child: Lattice,
}

impl IntegerSublattice {
    pub fn parent(&self) -> &Lattice {
        &self.parent
    }

    pub fn child(&self) -> &Lattice {
        &self.child
    }

    pub fn transform(&self) -> &[Vec<i64>] {
        &self.transform
    }

    /// Group index  [parent : child] = |det G|.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// Parent-basis coordinates of a child lattice point given in child coordinates.
    pub fn child_coords_to_parent(&self, coords: &[i64]) -> Vec<i64> {
        let n = self.transform.len();
        (0..n)
            .map(|i| (0..n).map(|j| self.transform[i][j] * coords[j]).sum())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volume_of_scaled_z2() {
        let lat = Lattice::from_basis(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0])).unwrap();
        assert!((lat.volume() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn singular_basis_is_rejected() {
        let res = Lattice::from_basis(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]));
        assert!(matches!(res, Err(LatticeError::SingularBasis { .. })));
    }

    #[test]
    fn sublattice_index_is_det() {
        let lat = Lattice::from_basis(DMatrix::identity(2, 2)).unwrap();
        let sub = lat.sublattice(&[vec![2, 1], vec![0, 3]]).unwrap();
        assert_eq!(sub.index(), 6);
        assert!((sub.child().volume() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let lat = Lattice::from_basis(DMatrix::from_row_slice(
            2,
            2,
            &[1.0, 0.5, 0.0, 0.75f64.sqrt()],
        ))
        .unwrap();
        let json = lat.to_json();
        let text = serde_json::to_string(&json).unwrap();
        let back: LatticeJson = serde_json::from_str(&text).unwrap();
        assert_eq!(json, back);
        let lat2 = Lattice::from_json(&back).unwrap();
        assert_eq!(lat.basis(), lat2.basis());
    }
}
