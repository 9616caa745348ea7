//! Named lattice constructions with known invariants.
//!
//! Each [`CatalogLattice`] carries exact reference data (minimum, kissing
//! number, volume) alongside a concrete basis, so numerical routines can be
//! checked against ground truth. Bases follow the column convention of
//! [`Lattice`]: one basis vector per column.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{LatticeError, Result};
use crate::intmat;
use crate::lattice::Lattice;

/// Right half of a systematic generator matrix for the extended binary
/// Golay code, so the full generator is `[I | GOLAY_B]`. Rows 1..=11 of the
/// inner block are circulant with support on the quadratic residues mod 11
/// together with 0.
const GOLAY_B: [[i128; 12]; 12] = [
    [0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 0, 1, 1, 1, 0, 0, 0, 1, 0],
    [1, 0, 1, 1, 0, 1, 1, 1, 0, 0, 0, 1],
    [1, 1, 0, 1, 1, 0, 1, 1, 1, 0, 0, 0],
    [1, 0, 1, 0, 1, 1, 0, 1, 1, 1, 0, 0],
    [1, 0, 0, 1, 0, 1, 1, 0, 1, 1, 1, 0],
    [1, 0, 0, 0, 1, 0, 1, 1, 0, 1, 1, 1],
    [1, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1, 1],
    [1, 1, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1],
    [1, 1, 1, 1, 0, 0, 0, 1, 0, 1, 1, 0],
    [1, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1, 1],
    [1, 1, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1],
];

/// Generator matrix rows of the extended binary Golay code (12 x 24, systematic).
pub fn golay_generator() -> Vec<[u8; 24]> {
    let mut rows = Vec::with_capacity(12);
    for i in 0..12 {
        let mut row = [0u8; 24];
        row[i] = 1;
        for j in 0..12 {
            row[12 + j] = GOLAY_B[i][j] as u8;
        }
        rows.push(row);
    }
    rows
}

/// A lattice from the built-in catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogLattice {
    /// The cubic lattice `Z^n`.
    Zn(usize),
    /// The checkerboard lattice `D_n`, `n >= 3`.
    Dn(usize),
    /// The hexagonal lattice, normalized to minimum 1.
    A2,
    /// The Gosset lattice `E8` in its even-coordinate-system form.
    E8,
    /// The Coxeter-Todd lattice `K12` built from the hexacode over `Z[w]`.
    K12,
    /// The Leech lattice, normalized to volume 1.
    Leech24,
}

impl CatalogLattice {
    /// Ambient (and lattice) dimension.
    pub fn dim(&self) -> usize {
        match self {
            CatalogLattice::Zn(n) => *n,
            CatalogLattice::Dn(n) => *n,
            CatalogLattice::A2 => 2,
            CatalogLattice::E8 => 8,
            CatalogLattice::K12 => 12,
            CatalogLattice::Leech24 => 24,
        }
    }

    /// Squared length of the shortest nonzero vectors.
    pub fn minimum(&self) -> f64 {
        match self {
            CatalogLattice::Zn(_) => 1.0,
            CatalogLattice::Dn(_) => 2.0,
            CatalogLattice::A2 => 1.0,
            CatalogLattice::E8 => 2.0,
            CatalogLattice::K12 => 4.0,
            CatalogLattice::Leech24 => 4.0,
        }
    }

    /// Number of shortest nonzero vectors.
    pub fn kissing_number(&self) -> u64 {
        match self {
            CatalogLattice::Zn(n) => 2 * *n as u64,
            CatalogLattice::Dn(n) => 2 * (*n as u64) * (*n as u64 - 1),
            CatalogLattice::A2 => 6,
            CatalogLattice::E8 => 240,
            CatalogLattice::K12 => 756,
            CatalogLattice::Leech24 => 196_560,
        }
    }

    /// Covolume (absolute determinant of a basis).
    pub fn volume(&self) -> f64 {
        match self {
            CatalogLattice::Zn(_) => 1.0,
            CatalogLattice::Dn(_) => 2.0,
            CatalogLattice::A2 => 0.75f64.sqrt(),
            CatalogLattice::E8 => 1.0,
            CatalogLattice::K12 => 27.0,
            CatalogLattice::Leech24 => 1.0,
        }
    }

    /// Builds a concrete basis realization of the lattice.
    pub fn build(&self) -> Result<Lattice> {
        let basis = match self {
            CatalogLattice::Zn(n) => {
                if *n == 0 {
                    return Err(LatticeError::Domain("Z^n needs n >= 1".into()));
                }
                DMatrix::identity(*n, *n)
            }
            CatalogLattice::Dn(n) => {
                if *n < 3 {
                    return Err(LatticeError::Domain("D_n needs n >= 3".into()));
                }
                let n = *n;
                let mut b = DMatrix::zeros(n, n);
                b[(0, 0)] = 1.0;
                b[(1, 0)] = 1.0;
                for j in 1..n {
                    b[(j - 1, j)] = 1.0;
                    b[(j, j)] = -1.0;
                }
                b
            }
            CatalogLattice::A2 => {
                DMatrix::from_column_slice(2, 2, &[1.0, 0.0, 0.5, 0.75f64.sqrt()])
            }
            CatalogLattice::E8 => {
                let mut b = DMatrix::zeros(8, 8);
                for i in 0..8 {
                    b[(i, 0)] = 0.5;
                }
                b[(0, 1)] = 1.0;
                b[(1, 1)] = 1.0;
                for j in 2..8 {
                    b[(j - 2, j)] = 1.0;
                    b[(j - 1, j)] = -1.0;
                }
                b
            }
            CatalogLattice::K12 => k12_basis(),
            CatalogLattice::Leech24 => leech_basis()?,
        };
        Lattice::from_basis(basis)
    }
}

impl fmt::Display for CatalogLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogLattice::Zn(n) => write!(f, "Z{n}"),
            CatalogLattice::Dn(n) => write!(f, "D{n}"),
            CatalogLattice::A2 => write!(f, "A2"),
            CatalogLattice::E8 => write!(f, "E8"),
            CatalogLattice::K12 => write!(f, "K12"),
            CatalogLattice::Leech24 => write!(f, "Leech24"),
        }
    }
}

impl FromStr for CatalogLattice {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "a2" {
            return Ok(CatalogLattice::A2);
        }
        if t == "e8" {
            return Ok(CatalogLattice::E8);
        }
        if t == "k12" {
            return Ok(CatalogLattice::K12);
        }
        if t == "leech" || t == "leech24" {
            return Ok(CatalogLattice::Leech24);
        }
        if let Some(rest) = t.strip_prefix('z') {
            let n: usize = rest
                .parse()
                .map_err(|_| LatticeError::Domain(format!("bad lattice name: {s}")))?;
            return Ok(CatalogLattice::Zn(n));
        }
        if let Some(rest) = t.strip_prefix('d') {
            let n: usize = rest
                .parse()
                .map_err(|_| LatticeError::Domain(format!("bad lattice name: {s}")))?;
            if n < 3 {
                return Err(LatticeError::Domain("D_n needs n >= 3".into()));
            }
            return Ok(CatalogLattice::Dn(n));
        }
        Err(LatticeError::Domain(format!(
            "unknown lattice name: {s} (expected Zn, Dn, A2, E8, K12, Leech24)"
        )))
    }
}

/// Eisenstein integer a + b*w with w = exp(2*pi*i/3), stored as (a, b).
#[derive(Debug, Clone, Copy)]
struct Eis(i64, i64);

impl Eis {
    fn mul_w(self) -> Eis {
        // w * (a + b w) = -b + (a - b) w, using w^2 = -1 - w.
        Eis(-self.1, self.0 - self.1)
    }

    /// Real embedding (Re, Im) with w = (-1/2, sqrt(3)/2).
    fn embed(self) -> [f64; 2] {
        let (a, b) = (self.0 as f64, self.1 as f64);
        [a - b / 2.0, b * 0.75f64.sqrt()]
    }
}

/// K12 as the preimage of the hexacode under reduction of `Z[w]^6` mod 2.
///
/// Hexacode generators over F4 = {0, 1, w, w^2}, lifted to `Z[w]` with
/// w^2 -> 1 + w. Together with 2*e4, 2*e5, 2*e6 these form a `Z[w]`-basis of
/// the preimage; the real basis takes each generator g and w*g under the
/// coordinatewise embedding.
fn k12_basis() -> DMatrix<f64> {
    let zero = Eis(0, 0);
    let one = Eis(1, 0);
    let w = Eis(0, 1);
    let w2 = Eis(1, 1);
    let two = Eis(2, 0);
    let gens: [[Eis; 6]; 6] = [
        [one, zero, zero, one, w2, w],
        [zero, one, zero, one, w, w2],
        [zero, zero, one, one, one, one],
        [zero, zero, zero, two, zero, zero],
        [zero, zero, zero, zero, two, zero],
        [zero, zero, zero, zero, zero, two],
    ];
    let mut b = DMatrix::zeros(12, 12);
    for (j, g) in gens.iter().enumerate() {
        for (i, &z) in g.iter().enumerate() {
            let [re, im] = z.embed();
            b[(2 * i, 2 * j)] = re;
            b[(2 * i + 1, 2 * j)] = im;
            let [re, im] = z.mul_w().embed();
            b[(2 * i, 2 * j + 1)] = re;
            b[(2 * i + 1, 2 * j + 1)] = im;
        }
    }
    b
}

/// Leech lattice basis, volume 1.
///
/// Builds `sqrt(8) * Leech` over the integers from doubled Golay codewords,
/// quadrupled D24 generators, and the glue vector (-3, 1, ..., 1), reduces
/// the generating set to a basis by a column Hermite normal form, checks the
/// determinant exactly, and rescales by 1/sqrt(8).
fn leech_basis() -> Result<DMatrix<f64>> {
    let mut gens: Vec<Vec<i128>> = Vec::with_capacity(37);
    for i in 0..12 {
        let mut v = vec![0i128; 24];
        v[i] = 2;
        for j in 0..12 {
            v[12 + j] = 2 * GOLAY_B[i][j];
        }
        gens.push(v);
    }
    for i in 0..23 {
        let mut v = vec![0i128; 24];
        v[i] = 4;
        v[i + 1] = -4;
        gens.push(v);
    }
    let mut v = vec![0i128; 24];
    v[22] = 4;
    v[23] = 4;
    gens.push(v);
    let mut glue = vec![1i128; 24];
    glue[0] = -3;
    gens.push(glue);

    let hnf = intmat::column_hnf(24, &gens)
        .ok_or_else(|| LatticeError::Inconsistent("Leech generators are rank-deficient".into()))?;
    let det = intmat::det_i128(&hnf);
    if det.unsigned_abs() != 1u128 << 36 {
        return Err(LatticeError::Inconsistent(format!(
            "Leech basis determinant {det} != 2^36"
        )));
    }
    let s = 1.0 / 8.0f64.sqrt();
    let mut b = DMatrix::zeros(24, 24);
    for (j, col) in hnf.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            b[(i, j)] = x as f64 * s;
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::Enumerator;

    fn check_invariants(lat: CatalogLattice) {
        let built = lat.build().unwrap();
        assert_eq!(built.dim(), lat.dim());
        let rel = (built.volume() - lat.volume()).abs() / lat.volume();
        assert!(rel < 1e-9, "{lat}: volume {} vs {}", built.volume(), lat.volume());
    }

    #[test]
    fn volumes_match_reference() {
        for lat in [
            CatalogLattice::Zn(5),
            CatalogLattice::Dn(4),
            CatalogLattice::A2,
            CatalogLattice::E8,
            CatalogLattice::K12,
            CatalogLattice::Leech24,
        ] {
            check_invariants(lat);
        }
    }

    #[test]
    fn minima_and_kissing_up_to_e8() {
        for lat in [
            CatalogLattice::Zn(4),
            CatalogLattice::Dn(3),
            CatalogLattice::Dn(5),
            CatalogLattice::A2,
            CatalogLattice::E8,
        ] {
            let built = lat.build().unwrap();
            let en = Enumerator::new(&built).unwrap();
            let profile = en.successive_minima().unwrap();
            assert!(
                (profile.minima[0] - lat.minimum()).abs() < 1e-9,
                "{lat}: minimum {} vs {}",
                profile.minima[0],
                lat.minimum()
            );
            assert_eq!(profile.kissing, lat.kissing_number(), "{lat}: kissing");
        }
    }

    #[test]
    fn k12_minimum_and_kissing() {
        let built = CatalogLattice::K12.build().unwrap();
        let en = Enumerator::new(&built).unwrap();
        let (_, min) = en.shortest_vector().unwrap();
        assert!((min - 4.0).abs() < 1e-9, "K12 minimum {min}");
        let counts = en.shell_counts(4.0, 1.0).unwrap();
        assert_eq!(counts, vec![(0.0, 1), (4.0, 756)], "K12 shells");
    }

    #[test]
    fn leech_minimum_and_kissing() {
        let built = CatalogLattice::Leech24.build().unwrap();
        let en = Enumerator::new(&built).unwrap();
        let (_, min) = en.shortest_vector().unwrap();
        assert!((min - 4.0).abs() < 1e-9, "Leech minimum {min}");
        let counts = en.shell_counts(4.0, 1.0).unwrap();
        assert_eq!(counts, vec![(0.0, 1), (4.0, 196_560)], "Leech shells");
    }

    #[test]
    fn golay_rows_have_weight_at_least_8() {
        for row in golay_generator() {
            let w: u32 = row.iter().map(|&b| b as u32).sum();
            assert!(w >= 8 && w % 4 == 0, "row weight {w}");
        }
    }

    #[test]
    fn names_round_trip() {
        for lat in [
            CatalogLattice::Zn(16),
            CatalogLattice::Dn(7),
            CatalogLattice::A2,
            CatalogLattice::E8,
            CatalogLattice::K12,
            CatalogLattice::Leech24,
        ] {
            let name = lat.to_string();
            assert_eq!(name.parse::<CatalogLattice>().unwrap(), lat);
        }
        assert!("Q5".parse::<CatalogLattice>().is_err());
        assert!("d2".parse::<CatalogLattice>().is_err());
    }
}
