//! Exact integer matrix routines: determinants, Hermite and Smith normal forms.
//!
//! Everything here works on `i128` at desk scale (dimensions <= 40, entries far
//! below 2^60), where the classical fraction-free algorithms cannot overflow.

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn det_i128(mat: &[Vec<i128>]) -> i128 {
    let n = mat.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = mat.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let swap = (k + 1..n).find(|&r| a[r][k] != 0);
            match swap {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn floor_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

/// Column-style Hermite normal form.
///
/// Takes `m x c` generators as columns and returns a lower-triangular basis of
/// their column span: `h[i][j]` with pivots `h[j][j] > 0`, zero above the
/// diagonal, and off-diagonal entries reduced into `[0, pivot)`.
/// Returns `None` when the columns do not span rank `m`.
pub fn column_hnf(rows: usize, cols: &[Vec<i128>]) -> Option<Vec<Vec<i128>>> {
    let mut work: Vec<Vec<i128>> = cols.to_vec();
    let mut basis: Vec<Vec<i128>> = Vec::with_capacity(rows);
    for r in 0..rows {
        // Euclidean reduction among all columns with a nonzero entry in row r.
        loop {
            let mut best: Option<usize> = None;
            for (j, col) in work.iter().enumerate() {
                if col[r] != 0 {
                    best = match best {
                        Some(b) if work[b][r].abs() <= col[r].abs() => Some(b),
                        _ => Some(j),
                    };
                }
            }
            let pivot = best?;
            let mut done = true;
            for j in 0..work.len() {
                if j != pivot && work[j][r] != 0 {
                    let q = floor_div(work[j][r], work[pivot][r]);
                    for i in 0..rows {
                        let sub = q * work[pivot][i];
                        work[j][i] -= sub;
                    }
                    if work[j][r] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                let mut col = work.swap_remove(pivot);
                if col[r] < 0 {
                    for v in col.iter_mut() {
                        *v = -*v;
                    }
                }
                basis.push(col);
                break;
            }
        }
    }
    // Reduce entries left of each pivot into [0, pivot).
    for j in (0..rows).rev() {
        for k in 0..j {
            let q = floor_div(basis[k][j], basis[j][j]);
            if q != 0 {
                for i in 0..rows {
                    let sub = q * basis[j][i];
                    basis[k][i] -= sub;
                }
            }
        }
    }
    Some(basis)
}

/// Smith normal form of an integer matrix.
///
/// Returns `(u, s, v)` with `u * a * v = s`, `u` and `v` unimodular, and `s`
/// diagonal with each invariant factor dividing the next.
pub fn smith_normal_form(a: &[Vec<i128>]) -> (Vec<Vec<i128>>, Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut s: Vec<Vec<i128>> = a.to_vec();
    let mut u = identity(m);
    let mut v = identity(n);

    let mut t = 0;
    while t < m.min(n) {
        // Find the smallest-magnitude nonzero entry in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if s[i][j] != 0 {
                    pivot = match pivot {
                        Some((pi, pj)) if s[pi][pj].abs() <= s[i][j].abs() => Some((pi, pj)),
                        _ => Some((i, j)),
                    };
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut s, &mut u, t, pi);
        swap_cols(&mut s, &mut v, t, pj);

        let mut clean = false;
        while !clean {
            clean = true;
            for i in t + 1..m {
                if s[i][t] != 0 {
                    let q = floor_div(s[i][t], s[t][t]);
                    row_sub(&mut s, &mut u, i, t, q);
                    if s[i][t] != 0 {
                        swap_rows(&mut s, &mut u, t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if s[t][j] != 0 {
                    let q = floor_div(s[t][j], s[t][t]);
                    col_sub(&mut s, &mut v, j, t, q);
                    if s[t][j] != 0 {
                        swap_cols(&mut s, &mut v, t, j);
                        clean = false;
                    }
                }
            }
        }

        // Enforce divisibility of the trailing block by the pivot.
        let mut offender = None;
        'scan: for i in t + 1..m {
            for j in t + 1..n {
                if s[i][j] % s[t][t] != 0 {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            row_sub(&mut s, &mut u, t, i, -1);
            continue;
        }

        if s[t][t] < 0 {
            for j in 0..n {
                s[t][j] = -s[t][j];
            }
            for j in 0..m {
                u[t][j] = -u[t][j];
            }
        }
        t += 1;
    }
    (u, s, v)
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

fn swap_rows(s: &mut [Vec<i128>], u: &mut [Vec<i128>], a: usize, b: usize) {
    if a != b {
        s.swap(a, b);
        u.swap(a, b);
    }
}

fn row_sub(s: &mut [Vec<i128>], u: &mut [Vec<i128>], i: usize, t: usize, q: i128) {
    if q == 0 {
        return;
    }
    let n = s[0].len();
    for j in 0..n {
        let sub = q * s[t][j];
        s[i][j] -= sub;
    }
    let m = u[0].len();
    for j in 0..m {
        let sub = q * u[t][j];
        u[i][j] -= sub;
    }
}

fn swap_cols(s: &mut [Vec<i128>], v: &mut [Vec<i128>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in s.iter_mut() {
        row.swap(a, b);
    }
    for row in v.iter_mut() {
        row.swap(a, b);
    }
}

fn col_sub(s: &mut [Vec<i128>], v: &mut [Vec<i128>], j: usize, t: usize, q: i128) {
    if q == 0 {
        return;
    }
    for row in s.iter_mut() {
        let sub = q * row[t];
        row[j] -= sub;
    }
    for row in v.iter_mut() {
        let sub = q * row[t];
        row[j] -= sub;
    }
}

/// Matrix-vector product over `i128`.
pub fn matvec(a: &[Vec<i128>], x: &[i128]) -> Vec<i128> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(r, v)| r * v).sum())
        .collect()
}

/// Canonical residue of `z` modulo the column span of a lower-triangular HNF basis.
pub fn hnf_residue(hnf: &[Vec<i128>], z: &[i128]) -> Vec<i128> {
    let n = z.len();
    let mut r = z.to_vec();
    for i in 0..n {
        let q = floor_div(r[i], hnf[i][i]);
        if q != 0 {
            for k in 0..n {
                let sub = q * hnf[i][k];
                r[k] -= sub;
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_known_determinants() {
        let a = vec![vec![2, 1], vec![1, 2]];
        assert_eq!(det_i128(&a), 3);
        let b = vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 5]];
        assert_eq!(det_i128(&b), -5);
        let c = vec![vec![1, 2], vec![2, 4]];
        assert_eq!(det_i128(&c), 0);
    }

    #[test]
    fn hnf_of_redundant_generators_is_a_basis() {
        // Columns generate 2Z x 3Z together with (1,1): full Z^2? gcd checks.
        let cols = vec![vec![2, 0], vec![0, 3], vec![2, 3]];
        let h = column_hnf(2, &cols).unwrap();
        // Lattice generated is {(a,b): a even iff ...} -- verify via determinant:
        // span{(2,0),(0,3),(2,3)} = {(x,y): 3x - ... } has index |det| = 6 / gcd structure.
        let det: i128 = h[0][0] * h[1][1];
        assert_eq!(det.abs(), 6);
        assert_eq!(h[0][1], 0);
    }

    #[test]
    fn snf_diagonal_divides() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]];
        let (u, s, v) = smith_normal_form(&a);
        // u*a*v == s
        let mut prod = vec![vec![0i128; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0;
                for k in 0..3 {
                    for l in 0..3 {
                        acc += u[i][k] * a[k][l] * v[l][j];
                    }
                }
                prod[i][j] = acc;
            }
        }
        assert_eq!(prod, s);
        assert!(s[0][0] > 0 && s[1][1] % s[0][0] == 0 && s[2][2] % s[1][1] == 0);
    }

    #[test]
    fn hnf_residue_is_canonical() {
        let h = column_hnf(2, &[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(hnf_residue(&h, &[5, -3]), vec![1, 1]);
        assert_eq!(hnf_residue(&h, &[4, 2]), vec![0, 0]);
    }
}
