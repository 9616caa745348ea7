//! Destination-side recovery of source cosets from relayed integer
//! combinations.
//!
//! Each relay forwards a coset `lambda_m = [sum_k a_mk x_k]` in the quotient
//! group `fine / coarse`. Stacking the rows `a_m` gives an integer system
//! `A x = lambda` over that finite group. A square subsystem `A'` inverts
//! exactly when `gcd(det A', index)` is 1: then `t = (det A')^{-1} mod index`
//! exists and `x = t adj(A') lambda'` solves the system, because the group
//! exponent divides the index. A nonzero rational determinant is not enough;
//! a determinant sharing a factor with the index collapses distinct inputs.

use latticeforge_core::NestedCodePair;
use nalgebra::DVector;

use crate::error::{CfError, Result};

/// Tolerance for recognizing integer coordinates of relayed points.
const INTEGER_TOL: f64 = 1e-9;

/// Outcome of a destination solve.
#[derive(Debug, Clone)]
pub enum SolveOutcome {
    /// Per-source coset points, reduced to the coarse Voronoi cell.
    Recovered(Vec<DVector<f64>>),
    /// The coefficient matrix cannot be inverted over the coset group.
    Unsolvable { reason: String },
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Modular inverse of `a` modulo `m > 1`, assuming `gcd(a, m) = 1`.
fn mod_inverse(a: i128, m: i128) -> i128 {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m)
}

/// Determinant of the K x K integer matrix formed by the selected rows.
fn subset_det(a: &[Vec<i64>], rows: &[usize]) -> i128 {
    let sub: Vec<Vec<i128>> = rows
        .iter()
        .map(|&r| a[r].iter().map(|&v| v as i128).collect())
        .collect();
    latticeforge_core::intmat::det_i128(&sub)
}

/// Adjugate of a K x K integer matrix via cofactor minors.
fn adjugate(a: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let k = a.len();
    if k == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0i128; k]; k];
    for i in 0..k {
        for j in 0..k {
            let minor: Vec<Vec<i128>> = (0..k)
                .filter(|&r| r != i)
                .map(|r| {
                    (0..k)
                        .filter(|&c| c != j)
                        .map(|c| a[r][c])
                        .collect::<Vec<_>>()
                })
                .collect();
            let cof = latticeforge_core::intmat::det_i128(&minor);
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = sign * cof;
        }
    }
    adj
}

/// Lexicographically first size-K row subset with nonzero determinant.
fn first_invertible_subset(a: &[Vec<i64>], k: usize) -> Option<Vec<usize>> {
    let m = a.len();
    let mut sel: Vec<usize> = (0..k).collect();
    loop {
        if subset_det(a, &sel) != 0 {
            return Some(sel);
        }
        // Advance the combination odometer.
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if sel[i] < m - (k - i) {
                sel[i] += 1;
                for j in i + 1..k {
                    sel[j] = sel[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Integer fine-basis coordinates of a relayed point.
fn integer_coords(pair: &NestedCodePair, lambda: &DVector<f64>) -> Result<Vec<i128>> {
    let coords = pair.fine().coords_of(lambda)?;
    let mut out = Vec::with_capacity(coords.len());
    for &c in coords.iter() {
        if (c - c.round()).abs() > INTEGER_TOL * (1.0 + c.abs()) {
            return Err(CfError::Domain(
                "relayed combination is not a point of the fine lattice".into(),
            ));
        }
        out.push(c.round() as i128);
    }
    Ok(out)
}

/// Canonical i64 coordinates of the coset of `coords`, via the pair's residue map.
fn residue_coords(pair: &NestedCodePair, coords: &[i128]) -> Result<Vec<i64>> {
    let as_i64: Vec<i64> = coords
        .iter()
        .map(|&c| i64::try_from(c))
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CfError::Domain("destination solve overflowed i64 coordinates".into()))?;
    Ok(pair
        .residue(&as_i64)
        .into_iter()
        .map(|c| c as i64)
        .collect())
}

/// Recover the per-source cosets from relayed combinations `lambdas` with
/// coefficient rows `a` (one row per relay, `M >= K`).
///
/// Returns [`SolveOutcome::Unsolvable`] when no K rows are independent, when
/// every independent subsystem's determinant shares a factor with the coset
/// group order, or when the unused rows contradict the solution. Recovered
/// points are reduced by [`NestedCodePair::mod_coarse`], so feeding coset
/// leaders through an identity matrix returns them unchanged.
pub fn destination_solve(
    a: &[Vec<i64>],
    lambdas: &[DVector<f64>],
    pair: &NestedCodePair,
) -> Result<SolveOutcome> {
    let m = a.len();
    if m == 0 {
        return Err(CfError::Domain("no relay rows given".into()));
    }
    let k = a[0].len();
    if k == 0 || m < k {
        return Err(CfError::Domain(format!(
            "need at least K = {k} relay rows for K sources, got {m}"
        )));
    }
    if a.iter().any(|row| row.len() != k) {
        return Err(CfError::Domain("ragged coefficient matrix".into()));
    }
    if lambdas.len() != m {
        return Err(CfError::Dimension {
            context: "destination_solve lambdas",
            expected: m,
            got: lambdas.len(),
        });
    }
    let n = pair.fine().dim();
    for l in lambdas {
        if l.len() != n {
            return Err(CfError::Dimension {
                context: "destination_solve point",
                expected: n,
                got: l.len(),
            });
        }
    }
    let coords: Vec<Vec<i128>> = lambdas
        .iter()
        .map(|l| integer_coords(pair, l))
        .collect::<Result<_>>()?;
    let index = pair.index() as i128;

    let Some(sel) = first_invertible_subset(a, k) else {
        return Ok(SolveOutcome::Unsolvable {
            reason: format!("no {k} of the {m} coefficient rows are linearly independent"),
        });
    };
    let det = subset_det(a, &sel);
    let g = gcd_i128(det, index);
    if g != 1 {
        return Ok(SolveOutcome::Unsolvable {
            reason: format!(
                "subsystem determinant {det} shares factor {g} with the coset group order {index}"
            ),
        });
    }
    let sub: Vec<Vec<i128>> = sel
        .iter()
        .map(|&r| a[r].iter().map(|&v| v as i128).collect())
        .collect();
    let adj = adjugate(&sub);
    let t = mod_inverse(det, index);

    // x_k = t * sum_j adj[k][j] lambda'_j, reduced to canonical residues.
    let mut source_coords: Vec<Vec<i64>> = Vec::with_capacity(k);
    for adj_row in adj.iter() {
        let mut c = vec![0i128; n];
        for (j, &row) in sel.iter().enumerate() {
            for (ci, &lc) in c.iter_mut().zip(&coords[row]) {
                *ci = ci
                    .checked_add(
                        adj_row[j]
                            .checked_mul(lc)
                            .ok_or_else(|| {
                                CfError::Domain(
                                    "destination solve overflowed i128 arithmetic".into(),
                                )
                            })?
                            .checked_mul(t)
                            .ok_or_else(|| {
                                CfError::Domain(
                                    "destination solve overflowed i128 arithmetic".into(),
                                )
                            })?,
                    )
                    .ok_or_else(|| {
                        CfError::Domain("destination solve overflowed i128 arithmetic".into())
                    })?;
            }
        }
        source_coords.push(residue_coords(pair, &c)?);
    }

    // Unused rows must agree with the solution modulo the coarse lattice.
    for (row, row_coords) in coords.iter().enumerate() {
        if sel.contains(&row) {
            continue;
        }
        let mut predicted = vec![0i128; n];
        for (src, sc) in source_coords.iter().enumerate() {
            for (pi, &ci) in predicted.iter_mut().zip(sc) {
                *pi += a[row][src] as i128 * ci as i128;
            }
        }
        let lhs = residue_coords(pair, &predicted)?;
        let rhs_i64: Vec<i64> = row_coords.iter().map(|&c| c as i64).collect();
        let rhs: Vec<i64> = pair.residue(&rhs_i64).into_iter().map(|c| c as i64).collect();
        if lhs != rhs {
            return Ok(SolveOutcome::Unsolvable {
                reason: format!("relay row {row} is inconsistent with the recovered sources"),
            });
        }
    }

    let points = source_coords
        .into_iter()
        .map(|c| pair.mod_coarse(&pair.fine().vector(&c)))
        .collect::<latticeforge_core::Result<Vec<_>>>()?;
    Ok(SolveOutcome::Recovered(points))
}
