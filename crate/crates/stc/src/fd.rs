//! Fast-decodability analysis: anticommutator-orthogonality partitions of a
//! code's basis and the zero pattern they force on the decoder's R matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::code::SpaceTimeCodeSpec;
use crate::error::{Result, StcError};
use crate::iota::iota;

/// Default tolerance on the anticommutator Frobenius norm.
pub const HR_TOL: f64 = 1e-10;

/// Default absolute threshold for declaring an R-matrix entry zero. Looser
/// than [`HR_TOL`] because QR accumulates rounding error.
pub const R_TOL: f64 = 1e-8;

/// Largest k handled by the exhaustive remainder-subset search; beyond this
/// the greedy max-degree heuristic takes over.
const EXHAUSTIVE_K: usize = 12;

/// Structural classification of a code's decoding partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FDClass {
    /// Basis splits into g >= 2 mutually orthogonal groups.
    GGroup(usize),
    /// After conditioning on a remainder set, the rest splits into g >= 2
    /// mutually orthogonal groups.
    ConditionallyGGroup(usize),
    /// No decomposition found; decoding is joint over all k symbols.
    NoStructure,
}

/// Decoding partition of a code basis with its complexity bookkeeping.
///
/// `groups` and `remainder` hold original basis indices and are disjoint
/// with union {0..k}. `order` lists the groups concatenated followed by the
/// remainder; `r_zero_pattern` is indexed in that order.
#[derive(Debug, Clone, Serialize)]
pub struct FDReport {
    pub label: String,
    pub k: usize,
    pub groups: Vec<Vec<usize>>,
    pub remainder: Vec<usize>,
    /// Worst-case joint-detection size: |remainder| + max group size.
    pub complexity_exponent: usize,
    pub classification: FDClass,
    pub order: Vec<usize>,
    /// Entry [p][q] (positions in `order`, p < q) is true when the
    /// partition forces R_pq = 0 for every channel.
    pub r_zero_pattern: Vec<Vec<bool>>,
}

impl FDReport {
    /// Fractional drop in the brute-force search exponent, 1 - e/k.
    pub fn reduction(&self) -> f64 {
        1.0 - self.complexity_exponent as f64 / self.k as f64
    }
}

/// Frobenius norm of the anticommutator B_i B_j^H + B_j B_i^H.
fn anticommutator_norm(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a * b.adjoint() + b * a.adjoint()).norm()
}

/// Connected components of the conflict graph restricted to `active`,
/// ordered by smallest member, members ascending.
fn components(k: usize, adj: &[Vec<bool>], active: &[bool]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; k];
    let mut comps = Vec::new();
    for start in 0..k {
        if !active[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for u in 0..k {
                if active[u] && !seen[u] && adj[v][u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

fn max_group_size(groups: &[Vec<usize>]) -> usize {
    groups.iter().map(Vec::len).max().unwrap_or(0)
}

/// Partitions the basis by pairwise anticommutator orthogonality.
///
/// Pairs whose anticommutator norm reaches `tol` conflict and must share a
/// group. Connected components of the conflict graph give a plain g-group
/// split when there are at least two; otherwise a remainder set is searched
/// for (exhaustively up to k = 12, greedily by conflict degree beyond)
/// whose removal splits the rest.
pub fn hr_group_partition(code: &SpaceTimeCodeSpec, tol: f64) -> FDReport {
    let k = code.k();
    let basis = code.basis_matrices();
    let mut adj = vec![vec![false; k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            if anticommutator_norm(&basis[i], &basis[j]) >= tol {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }

    let all = vec![true; k];
    let comps = components(k, &adj, &all);
    let (groups, remainder, classification) = if comps.len() >= 2 {
        (comps, Vec::new(), FDClass::GGroup(0))
    } else if let Some((x, split)) = conditional_split(k, &adj) {
        (split, x, FDClass::ConditionallyGGroup(0))
    } else {
        (vec![(0..k).collect()], Vec::new(), FDClass::NoStructure)
    };
    let classification = match classification {
        FDClass::GGroup(_) => FDClass::GGroup(groups.len()),
        FDClass::ConditionallyGGroup(_) => FDClass::ConditionallyGGroup(groups.len()),
        FDClass::NoStructure => FDClass::NoStructure,
    };
    let complexity_exponent = remainder.len() + max_group_size(&groups);

    let mut order: Vec<usize> = groups.iter().flatten().copied().collect();
    order.extend(&remainder);
    let zone = k - remainder.len();
    let mut group_of = vec![usize::MAX; k];
    for (g, members) in groups.iter().enumerate() {
        for &m in members {
            group_of[m] = g;
        }
    }
    let mut r_zero_pattern = vec![vec![false; k]; k];
    for p in 0..zone {
        for q in (p + 1)..zone {
            r_zero_pattern[p][q] = group_of[order[p]] != group_of[order[q]];
        }
    }

    FDReport {
        label: code.label().to_string(),
        k,
        groups,
        remainder,
        complexity_exponent,
        classification,
        order,
        r_zero_pattern,
    }
}

/// Searches for a remainder set whose removal splits the conflict graph,
/// minimizing (exponent, remainder size, index set).
fn conditional_split(k: usize, adj: &[Vec<bool>]) -> Option<(Vec<usize>, Vec<Vec<usize>>)> {
    if k <= EXHAUSTIVE_K {
        let mut best: Option<(usize, u32, u32)> = None;
        for mask in 1u32..(1 << k) {
            let removed = mask.count_ones();
            if removed as usize > k - 2 {
                continue;
            }
            let active: Vec<bool> = (0..k).map(|v| mask >> v & 1 == 0).collect();
            let comps = components(k, adj, &active);
            if comps.len() < 2 {
                continue;
            }
            let exponent = removed as usize + max_group_size(&comps);
            let key = (exponent, removed, mask);
            if best.map_or(true, |b| key < b) {
                best = Some(key);
            }
        }
        let (_, _, mask) = best?;
        let x: Vec<usize> = (0..k).filter(|&v| mask >> v & 1 == 1).collect();
        let active: Vec<bool> = (0..k).map(|v| mask >> v & 1 == 0).collect();
        Some((x, components(k, adj, &active)))
    } else {
        // Greedy: peel the vertex of highest conflict degree until the rest
        // splits. Exact only on small instances, but k > 12 bases are out of
        // exhaustive reach.
        let mut active = vec![true; k];
        let mut removed = Vec::new();
        loop {
            let live = active.iter().filter(|&&a| a).count();
            if live <= 2 {
                return None;
            }
            let victim = (0..k)
                .filter(|&v| active[v])
                .max_by_key(|&v| {
                    let deg = (0..k).filter(|&u| active[u] && adj[v][u]).count();
                    (deg, std::cmp::Reverse(v))
                })
                .expect("live vertices remain");
            active[victim] = false;
            removed.push(victim);
            let comps = components(k, adj, &active);
            if comps.len() >= 2 {
                removed.sort_unstable();
                return Some((removed, comps));
            }
        }
    }
}

/// Measured R-matrix zero pattern for one channel, with the partition it is
/// checked against.
#[derive(Debug, Clone, Serialize)]
pub struct RMatrixReport {
    pub partition: FDReport,
    /// Entry [p][q] (report order, p < q) is true when |R_pq| fell under
    /// the threshold.
    pub measured_zero_pattern: Vec<Vec<bool>>,
    /// True when every zero the partition predicts was measured.
    pub consistent: bool,
    /// Exponent recomputed from the measured pattern: remainder size plus
    /// the largest coupled component in the group zone.
    pub measured_exponent: usize,
    pub min_diagonal: f64,
}

/// Runs QR on the equivalent real channel matrix (columns ι(H·B_i) in
/// partition order) and thresholds the R entries at `tol`.
pub fn r_matrix_pattern(
    code: &SpaceTimeCodeSpec,
    h: &DMatrix<Complex64>,
    tol: f64,
) -> Result<RMatrixReport> {
    if h.norm() == 0.0 {
        return Err(StcError::Domain("channel matrix is zero".into()));
    }
    if h.ncols() != code.n_t() {
        return Err(StcError::Dimension {
            context: "channel columns vs transmit antennas",
            expected: code.n_t(),
            got: h.ncols(),
        });
    }
    let k = code.k();
    let rows = 2 * h.nrows() * code.t_len();
    if rows < k {
        return Err(StcError::Degenerate(
            "code not decodable at this receive dimension".into(),
        ));
    }
    let fd = hr_group_partition(code, HR_TOL);
    let mut b_eq = DMatrix::zeros(rows, k);
    for (col, &idx) in fd.order.iter().enumerate() {
        let faded = h * &code.basis_matrices()[idx];
        b_eq.set_column(col, &iota(&faded));
    }
    let mut r = b_eq.qr().r();
    for i in 0..k {
        if r[(i, i)] < 0.0 {
            for j in 0..k {
                r[(i, j)] = -r[(i, j)];
            }
        }
    }
    let mut min_diagonal = f64::INFINITY;
    let mut max_diagonal: f64 = 0.0;
    for i in 0..k {
        min_diagonal = min_diagonal.min(r[(i, i)].abs());
        max_diagonal = max_diagonal.max(r[(i, i)].abs());
    }
    if min_diagonal < 1e-9 * max_diagonal {
        return Err(StcError::Degenerate(
            "code not decodable at this receive dimension".into(),
        ));
    }

    let mut measured = vec![vec![false; k]; k];
    for p in 0..k {
        for q in (p + 1)..k {
            measured[p][q] = r[(p, q)].abs() < tol;
        }
    }
    let mut consistent = true;
    for p in 0..k {
        for q in (p + 1)..k {
            if fd.r_zero_pattern[p][q] && !measured[p][q] {
                consistent = false;
            }
        }
    }
    let zone = k - fd.remainder.len();
    let mut coupled = vec![vec![false; zone]; zone];
    for p in 0..zone {
        for q in (p + 1)..zone {
            if !measured[p][q] {
                coupled[p][q] = true;
                coupled[q][p] = true;
            }
        }
    }
    let zone_active = vec![true; zone];
    let zone_comps = components(zone, &coupled, &zone_active);
    let measured_exponent = fd.remainder.len() + max_group_size(&zone_comps);

    Ok(RMatrixReport {
        partition: fd,
        measured_zero_pattern: measured,
        consistent,
        measured_exponent,
        min_diagonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{alamouti_code, golden_code, iterated_construct};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn conj(z: Complex64) -> Complex64 {
        z.conj()
    }

    fn random_channel(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
        DMatrix::from_fn(rows, cols, |_, _| {
            c(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
        })
    }

    #[test]
    fn alamouti_splits_into_four_singletons() {
        let code = alamouti_code(&[-1, 0, 1]).unwrap();
        let fd = hr_group_partition(&code, HR_TOL);
        assert_eq!(fd.classification, FDClass::GGroup(4));
        assert_eq!(fd.groups, vec![vec![0], vec![1], vec![2], vec![3]]);
        assert!(fd.remainder.is_empty());
        assert_eq!(fd.complexity_exponent, 1);
        assert!((fd.reduction() - 0.75).abs() < 1e-12);
        for p in 0..4 {
            for q in (p + 1)..4 {
                assert!(fd.r_zero_pattern[p][q]);
            }
        }
    }

    #[test]
    fn unstructured_code_reports_no_reduction() {
        let basis = vec![
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]),
            DMatrix::from_element(2, 2, c(1.0, 0.0)),
        ];
        let code = SpaceTimeCodeSpec::new("unstructured", basis, &[-1, 0, 1]).unwrap();
        let fd = hr_group_partition(&code, HR_TOL);
        assert_eq!(fd.classification, FDClass::NoStructure);
        assert_eq!(fd.groups, vec![vec![0, 1, 2]]);
        assert_eq!(fd.complexity_exponent, 3);
        assert!(fd.reduction().abs() < 1e-12);
    }

    #[test]
    fn iterated_alamouti_with_quarter_twist_is_conditionally_four_group() {
        let code = alamouti_code(&[-1, 0, 1]).unwrap();
        let it = iterated_construct(&code, &conj, c(0.0, 1.0)).unwrap();
        let fd = hr_group_partition(&it, HR_TOL);
        assert_eq!(fd.classification, FDClass::ConditionallyGGroup(4));
        assert_eq!(fd.remainder, vec![0, 1, 2, 3]);
        assert_eq!(fd.groups, vec![vec![4], vec![5], vec![6], vec![7]]);
        assert_eq!(fd.complexity_exponent, 5);
        // Joint 8-symbol search drops to 5: a 37.5% exponent reduction.
        assert!((fd.reduction() - 0.375).abs() < 1e-12);
        assert_eq!(fd.order, vec![4, 5, 6, 7, 0, 1, 2, 3]);
        for p in 0..8 {
            for q in (p + 1)..8 {
                assert_eq!(fd.r_zero_pattern[p][q], p < 4 && q < 4);
            }
        }
    }

    #[test]
    fn iterated_alamouti_with_sign_twist_is_a_plain_four_group() {
        let code = alamouti_code(&[-1, 0, 1]).unwrap();
        let it = iterated_construct(&code, &conj, c(-1.0, 0.0)).unwrap();
        let fd = hr_group_partition(&it, HR_TOL);
        assert_eq!(fd.classification, FDClass::GGroup(4));
        assert_eq!(fd.groups, vec![vec![0, 6], vec![1, 7], vec![2, 4], vec![3, 5]]);
        assert!(fd.remainder.is_empty());
        assert_eq!(fd.complexity_exponent, 2);
    }

    #[test]
    fn conditional_search_prefers_the_smallest_remainder() {
        // Conflict graph is the path 0 - 1 - 2: E11 and E22 anticommute but
        // both clash with E12 + E21. Conditioning on the middle matrix is
        // the unique single-symbol split.
        let zero = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let basis = vec![
            DMatrix::from_row_slice(2, 2, &[one, zero, zero, zero]),
            DMatrix::from_row_slice(2, 2, &[zero, one, one, zero]),
            DMatrix::from_row_slice(2, 2, &[zero, zero, zero, one]),
        ];
        let code = SpaceTimeCodeSpec::new("path", basis, &[-1, 0, 1]).unwrap();
        let fd = hr_group_partition(&code, HR_TOL);
        assert_eq!(fd.classification, FDClass::ConditionallyGGroup(2));
        assert_eq!(fd.remainder, vec![1]);
        assert_eq!(fd.groups, vec![vec![0], vec![2]]);
        assert_eq!(fd.complexity_exponent, 2);
        assert_eq!(fd.order, vec![0, 2, 1]);
    }

    #[test]
    fn alamouti_r_matrix_is_diagonal_for_random_channels() {
        let code = alamouti_code(&[-1, 0, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let h = random_channel(&mut rng, 2, 2);
            let report = r_matrix_pattern(&code, &h, R_TOL).unwrap();
            assert!(report.consistent);
            assert_eq!(report.measured_exponent, 1);
            for p in 0..4 {
                for q in (p + 1)..4 {
                    assert!(report.measured_zero_pattern[p][q], "R[{p}][{q}] not zero");
                }
            }
        }
    }

    #[test]
    fn identity_basis_with_identity_channel_gives_diagonal_r() {
        let units: Vec<DMatrix<Complex64>> = (0..4)
            .map(|t| DMatrix::from_fn(2, 2, |i, j| if 2 * i + j == t { c(1.0, 0.0) } else { c(0.0, 0.0) }))
            .collect();
        let code = SpaceTimeCodeSpec::new("units", units, &[-1, 0, 1]).unwrap();
        let h = DMatrix::from_fn(2, 2, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let report = r_matrix_pattern(&code, &h, R_TOL).unwrap();
        assert!(report.consistent);
        for p in 0..4 {
            for q in (p + 1)..4 {
                assert!(report.measured_zero_pattern[p][q]);
            }
        }
        assert!((report.min_diagonal - 1.0).abs() < 1e-12);
    }

    #[test]
    fn predicted_zeros_hold_for_a_hundred_random_channels() {
        let base = alamouti_code(&[-1, 0, 1]).unwrap();
        let four_group = iterated_construct(&base, &conj, c(-1.0, 0.0)).unwrap();
        let conditional = iterated_construct(&base, &conj, c(0.0, 1.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for code in [&four_group, &conditional] {
            let fd = hr_group_partition(code, HR_TOL);
            for _ in 0..100 {
                let h = random_channel(&mut rng, 4, 4);
                let report = r_matrix_pattern(code, &h, R_TOL).unwrap();
                assert!(report.consistent, "{} pattern violated", code.label());
                assert_eq!(
                    report.measured_exponent, fd.complexity_exponent,
                    "{} exponent drifted",
                    code.label()
                );
            }
        }
    }

    #[test]
    fn starved_receive_dimension_is_flagged() {
        let code = golden_code(&[-1, 0, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_channel(&mut rng, 1, 2);
        assert!(matches!(
            r_matrix_pattern(&code, &h, R_TOL),
            Err(StcError::Degenerate(_))
        ));
    }

    #[test]
    fn zero_channel_is_rejected() {
        let code = alamouti_code(&[-1, 0, 1]).unwrap();
        let h = DMatrix::from_element(2, 2, c(0.0, 0.0));
        assert!(matches!(
            r_matrix_pattern(&code, &h, R_TOL),
            Err(StcError::Domain(_))
        ));
    }

    #[test]
    fn report_serializes_to_json() {
        let code = alamouti_code(&[-1, 1]).unwrap();
        let fd = hr_group_partition(&code, HR_TOL);
        let json = serde_json::to_string(&fd).unwrap();
        assert!(json.contains("\"GGroup\":4"));
        assert!(json.contains("\"complexity_exponent\":1"));
    }
}
