//! LLL basis reduction, used internally to precondition enumeration.
//!
//! Reduction only changes the basis, never the lattice: the integer transform
//! is returned so callers can map reduced coordinates back to the original basis.

use crate::intmat;
use nalgebra::DMatrix;

/// Gram-Schmidt data for the current basis: squared norms of b*_i and mu coefficients.
fn gram_schmidt(basis: &DMatrix<f64>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = basis.ncols();
    let mut star: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(n);
    let mut norms = vec![0.0; n];
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut v = basis.column(i).clone_owned();
        for j in 0..i {
            let m = if norms[j] > 0.0 {
                basis.column(i).dot(&star[j]) / norms[j]
            } else {
                0.0
            };
            mu[i][j] = m;
            v -= &star[j] * m;
        }
        norms[i] = v.norm_squared();
        star.push(v);
    }
    (norms, mu)
}

/// LLL-reduces the basis with parameter `delta`.
///
/// Returns the reduced basis `B * U` and the unimodular transform `U`.
pub fn lll_reduce(basis: &DMatrix<f64>, delta: f64) -> (DMatrix<f64>, Vec<Vec<i64>>) {
    let n = basis.ncols();
    let mut b = basis.clone();
    let mut u: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();

    let mut k = 1usize;
    let mut guard = 0usize;
    let max_steps = 10_000 + 400 * n * n;
    while k < n && guard < max_steps {
        guard += 1;
        let (norms, mu) = gram_schmidt(&b);
        // Size-reduce column k against earlier columns.
        let mut changed = false;
        for j in (0..k).rev() {
            let m = mu[k][j];
            if m.abs() > 0.5 {
                let q = m.round();
                let col_j = b.column(j).clone_owned();
                let mut col_k = b.column_mut(k);
                col_k -= col_j * q;
                let qi = q as i64;
                for r in 0..n {
                    u[r][k] -= qi * u[r][j];
                }
                changed = true;
            }
        }
        let (norms, mu) = if changed { gram_schmidt(&b) } else { (norms, mu) };
        let lovasz = norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1];
        if lovasz {
            k += 1;
        } else {
            b.swap_columns(k, k - 1);
            for row in u.iter_mut() {
                row.swap(k, k - 1);
            }
            k = k.max(2) - 1;
        }
    }

    debug_assert_eq!(
        {
            let ui: Vec<Vec<i128>> = u
                .iter()
                .map(|r| r.iter().map(|&v| v as i128).collect())
                .collect();
            intmat::det_i128(&ui).abs()
        },
        1
    );
    (b, u)
}
