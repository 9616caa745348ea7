//! Space-time block codes: named constructions from cyclic algebras,
//! block-diagonal and iterated assembly, determinant criteria, and density
//! normalization.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{golden_algebra, left_regular_rep, quaternion_algebra};
use crate::error::{Result, StcError};
use crate::iota::iota_columns;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relative singular-value cutoff for rank decisions on ι-images.
const RANK_TOL: f64 = 1e-9;

/// Largest exhaustive determinant scan accepted before demanding sampling.
const SCAN_LIMIT: u128 = 100_000_000;

/// A linear space-time block code: k basis matrices over a finite symmetric
/// integer alphabet. Codewords are Σ sᵢ·Bᵢ with sᵢ in the alphabet.
#[derive(Debug, Clone)]
pub struct SpaceTimeCodeSpec {
    label: String,
    basis_matrices: Vec<DMatrix<Complex64>>,
    alphabet: Vec<i64>,
}

impl SpaceTimeCodeSpec {
    /// Validates shapes, alphabet symmetry, and real-linear independence of
    /// the basis matrices.
    pub fn new(
        label: impl Into<String>,
        basis_matrices: Vec<DMatrix<Complex64>>,
        alphabet: &[i64],
    ) -> Result<Self> {
        if basis_matrices.is_empty() {
            return Err(StcError::Domain("empty basis".into()));
        }
        let (rows, cols) = basis_matrices[0].shape();
        for b in &basis_matrices {
            if b.shape() != (rows, cols) {
                return Err(StcError::Dimension {
                    context: "basis matrix shape",
                    expected: rows * cols,
                    got: b.len(),
                });
            }
        }
        let k = basis_matrices.len();
        if k > 2 * rows * cols {
            return Err(StcError::Domain(format!(
                "rank {k} exceeds the real dimension {}",
                2 * rows * cols
            )));
        }
        let mut alphabet: Vec<i64> = alphabet.to_vec();
        alphabet.sort_unstable();
        alphabet.dedup();
        if alphabet.is_empty() {
            return Err(StcError::Domain("empty alphabet".into()));
        }
        if alphabet.iter().any(|&s| !alphabet.contains(&-s)) {
            return Err(StcError::Domain("alphabet is not symmetric".into()));
        }
        let gram_basis = iota_columns(&basis_matrices);
        let sv = gram_basis.svd(false, false).singular_values;
        if !(sv.min() > RANK_TOL * sv.max()) {
            return Err(StcError::Degenerate(
                "basis matrices are linearly dependent over the reals".into(),
            ));
        }
        Ok(Self {
            label: label.into(),
            basis_matrices,
            alphabet,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of real symbols per codeword.
    pub fn k(&self) -> usize {
        self.basis_matrices.len()
    }

    /// Transmit antennas (matrix rows).
    pub fn n_t(&self) -> usize {
        self.basis_matrices[0].nrows()
    }

    /// Channel uses per codeword (matrix columns).
    pub fn t_len(&self) -> usize {
        self.basis_matrices[0].ncols()
    }

    pub fn alphabet(&self) -> &[i64] {
        &self.alphabet
    }

    pub fn basis_matrices(&self) -> &[DMatrix<Complex64>] {
        &self.basis_matrices
    }

    /// Code rate in real symbols per channel use, k/T.
    pub fn rate_real_spcu(&self) -> f64 {
        self.k() as f64 / self.t_len() as f64
    }

    /// Assembles the codeword Σ sᵢ·Bᵢ.
    pub fn codeword(&self, coords: &[i64]) -> Result<DMatrix<Complex64>> {
        if coords.len() != self.k() {
            return Err(StcError::Dimension {
                context: "codeword coordinates",
                expected: self.k(),
                got: coords.len(),
            });
        }
        let mut x = DMatrix::from_element(self.n_t(), self.t_len(), ZERO);
        for (b, &s) in self.basis_matrices.iter().zip(coords) {
            if s != 0 {
                x += b * Complex64::new(s as f64, 0.0);
            }
        }
        Ok(x)
    }

    /// ι-images of the basis matrices as the columns of a real matrix.
    pub fn iota_basis(&self) -> DMatrix<f64> {
        iota_columns(&self.basis_matrices)
    }

    /// The code with every basis matrix multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c != 0.0 && c.is_finite()) {
            return Err(StcError::Domain("scale must be nonzero finite".into()));
        }
        let basis = self
            .basis_matrices
            .iter()
            .map(|b| b * Complex64::new(c, 0.0))
            .collect();
        Self::new(format!("{}*{c}", self.label), basis, &self.alphabet)
    }

    /// Serializable export with complex entries as [re, im] pairs.
    pub fn export(&self) -> CodeExport {
        CodeExport {
            label: self.label.clone(),
            n_t: self.n_t(),
            t: self.t_len(),
            k: self.k(),
            alphabet: self.alphabet.clone(),
            basis: self
                .basis_matrices
                .iter()
                .map(|b| {
                    (0..b.nrows())
                        .map(|i| (0..b.ncols()).map(|j| [b[(i, j)].re, b[(i, j)].im]).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

/// JSON shape of a code spec.
#[derive(Debug, Clone, Serialize)]
pub struct CodeExport {
    pub label: String,
    pub n_t: usize,
    pub t: usize,
    pub k: usize,
    pub alphabet: Vec<i64>,
    /// basis[i][row][col] = [re, im]
    pub basis: Vec<Vec<Vec<[f64; 2]>>>,
}

/// The Alamouti code: left-regular representation of the Hamilton
/// quaternions, k = 4 over the coordinates (a, b, c, d) of
/// x₀ = a + bi, x₁ = c + di.
pub fn alamouti_code(alphabet: &[i64]) -> Result<SpaceTimeCodeSpec> {
    let alg = quaternion_algebra();
    let one = Complex64::new(1.0, 0.0);
    let mut basis = Vec::with_capacity(4);
    for slot in 0..2 {
        for part in 0..2 {
            let mut coords = vec![vec![ZERO; 2]; 2];
            coords[slot][part] = one;
            basis.push(left_regular_rep(&alg, &coords)?);
        }
    }
    SpaceTimeCodeSpec::new("alamouti", basis, alphabet)
}

/// The Golden code: (ℚ(i,√5)/ℚ(i), σ, γ=i) with the α = 1 + i − iθ scaling
/// of the natural-order basis and a global 1/√5 normalization. k = 8 over
/// the real and imaginary parts of the four ℤ[i] symbols.
pub fn golden_code(alphabet: &[i64]) -> Result<SpaceTimeCodeSpec> {
    let alg = golden_algebra();
    let alpha = alg.element(&[Complex64::new(1.0, 1.0), Complex64::new(0.0, -1.0)])?;
    let scale = Complex64::new(1.0 / 5.0f64.sqrt(), 0.0);
    let units = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
    let mut basis = Vec::with_capacity(8);
    for slot in 0..2 {
        // Symbol pairs (a, b) multiply 1 and theta inside x_slot = alpha(s + s'theta).
        for theta_pow in 0..2 {
            for unit in units {
                let mut sym = vec![ZERO; 2];
                sym[theta_pow] = unit;
                let value = alg.field_mul(&alpha, &sym);
                let mut coords = vec![vec![ZERO; 2]; 2];
                coords[slot] = value;
                let rho = left_regular_rep(&alg, &coords)?;
                basis.push(rho * scale);
            }
        }
    }
    SpaceTimeCodeSpec::new("golden", basis, alphabet)
}

/// Entrywise application of an automorphism stand-in to a matrix.
fn map_entries(m: &DMatrix<Complex64>, tau: &dyn Fn(Complex64) -> Complex64) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| tau(m[(i, j)]))
}

/// Repeats each basis matrix along the diagonal through powers of τ:
/// B ↦ diag(B, τ(B), …, τ^{n−1}(B)). The rank k is unchanged.
pub fn block_diagonal_construct(
    code: &SpaceTimeCodeSpec,
    tau: &dyn Fn(Complex64) -> Complex64,
    n_blocks: usize,
) -> Result<SpaceTimeCodeSpec> {
    if n_blocks == 0 {
        return Err(StcError::Domain("need at least one block".into()));
    }
    // The order of tau must divide n_blocks: iterate n_blocks times on every
    // basis entry and demand a fixed point.
    for b in code.basis_matrices() {
        for &z in b.iter() {
            let mut w = z;
            for _ in 0..n_blocks {
                w = tau(w);
            }
            if (w - z).norm() > 1e-9 {
                return Err(StcError::Domain(format!(
                    "tau order does not divide {n_blocks}"
                )));
            }
        }
    }
    let (rows, cols) = (code.n_t(), code.t_len());
    let basis = code
        .basis_matrices()
        .iter()
        .map(|b| {
            let mut big = DMatrix::from_element(rows * n_blocks, cols * n_blocks, ZERO);
            let mut block = b.clone();
            for blk in 0..n_blocks {
                big.view_mut((blk * rows, blk * cols), (rows, cols))
                    .copy_from(&block);
                block = map_entries(&block, tau);
            }
            big
        })
        .collect();
    SpaceTimeCodeSpec::new(
        format!("{}-blockdiag{n_blocks}", code.label()),
        basis,
        code.alphabet(),
    )
}

/// Splits θ = ζ·θ′ with ζ ∈ {±1, ±i} and θ′ > 0.
fn split_theta(theta: Complex64) -> Result<(Complex64, f64)> {
    let magnitude = theta.norm();
    if !(magnitude > 0.0) {
        return Err(StcError::Domain("theta must be nonzero".into()));
    }
    let unit = theta / magnitude;
    for zeta in [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ] {
        if (unit - zeta).norm() < 1e-9 {
            return Ok((zeta, magnitude));
        }
    }
    Err(StcError::Domain(
        "theta must be a positive real times a fourth root of unity".into(),
    ))
}

/// Doubles a code through the twisted embedding
/// α̃(X, Y) = [[X, ζ√θ′·τ(Y)], [√θ′·Y, τ(X)]], θ = ζθ′.
///
/// The result has basis {α̃(Bᵢ, 0)} ∪ {α̃(0, Bᵢ)} and rank 2k.
pub fn iterated_construct(
    code: &SpaceTimeCodeSpec,
    tau: &dyn Fn(Complex64) -> Complex64,
    theta: Complex64,
) -> Result<SpaceTimeCodeSpec> {
    let n = code.n_t();
    if code.t_len() != n {
        return Err(StcError::Unsupported(
            "iterated construction needs square codewords".into(),
        ));
    }
    let (zeta, theta_pos) = split_theta(theta)?;
    let root = theta_pos.sqrt();
    let alpha_tilde = |x: &DMatrix<Complex64>, y: &DMatrix<Complex64>| {
        let mut big = DMatrix::from_element(2 * n, 2 * n, ZERO);
        big.view_mut((0, 0), (n, n)).copy_from(x);
        big.view_mut((0, n), (n, n))
            .copy_from(&(map_entries(y, tau) * (zeta * Complex64::new(root, 0.0))));
        big.view_mut((n, 0), (n, n))
            .copy_from(&(y * Complex64::new(root, 0.0)));
        big.view_mut((n, n), (n, n)).copy_from(&map_entries(x, tau));
        big
    };
    let zero = DMatrix::from_element(n, n, ZERO);
    let mut basis = Vec::with_capacity(2 * code.k());
    for b in code.basis_matrices() {
        basis.push(alpha_tilde(b, &zero));
    }
    for b in code.basis_matrices() {
        basis.push(alpha_tilde(&zero, b));
    }
    SpaceTimeCodeSpec::new(
        format!("{}-iterated", code.label()),
        basis,
        code.alphabet(),
    )
}

/// Scan strategy for determinant minimization.
#[derive(Debug, Clone, Copy)]
pub enum Scan {
    /// Every coordinate vector in S^k.
    Exhaustive,
    /// `n` uniform draws from S^k with a fixed seed.
    Random { n: u64, seed: u64 },
}

/// Minimum of |det(X)|² over nonzero coordinate vectors of the scan set.
pub fn min_determinant(code: &SpaceTimeCodeSpec, scan: Scan) -> Result<f64> {
    let n = code.n_t();
    if code.t_len() != n {
        return Err(StcError::Unsupported(
            "determinant criteria need square codewords".into(),
        ));
    }
    let k = code.k();
    let s = code.alphabet();
    let det2_of = |coords: &[i64]| -> Option<f64> {
        if coords.iter().all(|&c| c == 0) {
            return None;
        }
        let x = code.codeword(coords).expect("coords sized by caller");
        Some(x.determinant().norm_sqr())
    };
    let best = match scan {
        Scan::Exhaustive => {
            let total = (s.len() as u128).pow(k as u32);
            if total > SCAN_LIMIT {
                return Err(StcError::Unsupported(format!(
                    "exhaustive scan of {total} points; use a random scan"
                )));
            }
            (0..total as u64)
                .into_par_iter()
                .filter_map(|idx| {
                    let mut coords = vec![0i64; k];
                    let mut rem = idx as usize;
                    for c in coords.iter_mut() {
                        *c = s[rem % s.len()];
                        rem /= s.len();
                    }
                    det2_of(&coords)
                })
                .reduce(|| f64::INFINITY, f64::min)
        }
        Scan::Random { n: draws, seed } => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut best = f64::INFINITY;
            for _ in 0..draws {
                let coords: Vec<i64> = (0..k).map(|_| s[rng.gen_range(0..s.len())]).collect();
                if let Some(d) = det2_of(&coords) {
                    best = best.min(d);
                }
            }
            best
        }
    };
    if !best.is_finite() {
        return Err(StcError::Degenerate(
            "scan found no nonzero codeword".into(),
        ));
    }
    Ok(best)
}

/// Normalized minimum determinant δ and normalized density η of the code's
/// ι-lattice, from the exhaustive determinant scan:
/// δ = det_min / vol^{1/(2n)} and η = det_min^{2n} / vol with
/// det_min = min |det(X)| over nonzero codewords.
///
/// The pair satisfies δ² = η^{1/n}, and this identity is re-checked to 1e−9.
pub fn normalized_density(code: &SpaceTimeCodeSpec) -> Result<(f64, f64)> {
    let n = code.n_t();
    if code.t_len() != n {
        return Err(StcError::Unsupported(
            "density normalization needs square codewords".into(),
        ));
    }
    let det_min = min_determinant(code, Scan::Exhaustive)?.sqrt();
    if det_min < 1e-15 {
        return Err(StcError::Degenerate("vanishing minimum determinant".into()));
    }
    // Volume of the fundamental cell inside the span of the iota-images.
    let a = code.iota_basis();
    let gram = a.transpose() * &a;
    let vol = gram.determinant().sqrt();
    let delta = det_min / vol.powf(1.0 / (2.0 * n as f64));
    let eta = det_min.powi(2 * n as i32) / vol;
    let lhs = delta * delta;
    let rhs = eta.powf(1.0 / n as f64);
    if (lhs - rhs).abs() > 1e-9 * lhs.abs().max(1.0) {
        return Err(StcError::Inconsistent(format!(
            "density identity failed: {lhs} vs {rhs}"
        )));
    }
    Ok((delta, eta))
}

/// Discriminant of the natural order from the tower data:
/// disc(Γ/𝒪_F) = disc(L/F)ⁿ · N(γ)^{n(n−1)}.
///
/// Pure arithmetic on caller-supplied invariants; no field computation.
pub fn natural_order_discriminant(disc_lf: i128, gamma_norm: Ratio<i128>, n: u32) -> Ratio<i128> {
    Ratio::from_integer(disc_lf).pow(n as i32) * gamma_norm.pow((n * (n - 1)) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn conj(z: Complex64) -> Complex64 {
        z.conj()
    }

    #[test]
    fn alamouti_unit_coordinates_give_identity() {
        let code = alamouti_code(&[-1, 0, 1]).unwrap();
        let x = code.codeword(&[1, 0, 0, 0]).unwrap();
        assert!((x[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((x[(1, 1)] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(x[(0, 1)].norm() < 1e-12 && x[(1, 0)].norm() < 1e-12);
    }

    #[test]
    fn alamouti_codeword_shape() {
        let code = alamouti_code(&[-3, -1, 1, 3]).unwrap();
        let (a, b, cc, d) = (2.0, -1.0, 3.0, 1.0);
        let x = code.codeword(&[2, -1, 3, 1]).unwrap();
        assert!((x[(0, 0)] - c(a, b)).norm() < 1e-12);
        assert!((x[(1, 0)] - c(cc, d)).norm() < 1e-12);
        assert!((x[(0, 1)] - c(-cc, d)).norm() < 1e-12);
        assert!((x[(1, 1)] - c(a, -b)).norm() < 1e-12);
        // det = a^2 + b^2 + c^2 + d^2, real.
        let det = x.determinant();
        assert!((det - c(a * a + b * b + cc * cc + d * d, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn alamouti_is_fully_diverse_on_the_sign_alphabet() {
        let code = alamouti_code(&[-1, 1]).unwrap();
        let all: Vec<Vec<i64>> = (0..16)
            .map(|m| (0..4).map(|i| if m >> i & 1 == 1 { 1 } else { -1 }).collect())
            .collect();
        let mut min_rank = 2;
        for x in &all {
            for y in &all {
                if x == y {
                    continue;
                }
                let diff = code.codeword(x).unwrap() - code.codeword(y).unwrap();
                let sv = diff.svd(false, false).singular_values;
                let rank = sv.iter().filter(|&&v| v > 1e-9 * sv.max()).count();
                min_rank = min_rank.min(rank);
            }
        }
        assert_eq!(min_rank, 2);
    }

    #[test]
    fn alamouti_iota_gram_is_twice_identity() {
        let code = alamouti_code(&[-1, 0, 1]).unwrap();
        let a = code.iota_basis();
        let gram = a.transpose() * &a;
        let drift = (&gram - DMatrix::<f64>::identity(4, 4) * 2.0).norm();
        assert!(drift < 1e-12);
    }

    #[test]
    fn golden_zero_vector_is_the_zero_matrix() {
        let code = golden_code(&[-1, 0, 1]).unwrap();
        let x = code.codeword(&[0; 8]).unwrap();
        assert!(x.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn golden_min_determinant_is_one_fifth() {
        let code = golden_code(&[-1, 0, 1]).unwrap();
        let md = min_determinant(&code, Scan::Exhaustive).unwrap();
        assert!((md - 0.2).abs() < 1e-9, "min |det|^2 = {md}");
    }

    #[test]
    fn golden_basis_has_full_real_rank() {
        let code = golden_code(&[-1, 0, 1]).unwrap();
        let sv = code.iota_basis().svd(false, false).singular_values;
        assert_eq!(sv.iter().filter(|&&v| v > 1e-9 * sv.max()).count(), 8);
    }

    #[test]
    fn random_scan_never_beats_the_exhaustive_floor() {
        let code = golden_code(&[-1, 0, 1]).unwrap();
        let floor = min_determinant(&code, Scan::Exhaustive).unwrap();
        let sampled = min_determinant(&code, Scan::Random { n: 10_000, seed: 5 }).unwrap();
        assert!(sampled >= floor - 1e-12);
        assert!(sampled > 0.0);
    }

    #[test]
    fn determinant_scales_with_the_fourth_power() {
        let code = alamouti_code(&[-1, 0, 1]).unwrap();
        let base = min_determinant(&code, Scan::Exhaustive).unwrap();
        let scaled = min_determinant(&code.scaled(1.5).unwrap(), Scan::Exhaustive).unwrap();
        // |det(cX)|^2 = c^{2n}|det X|^2 with n = 2.
        assert!((scaled - 1.5f64.powi(4) * base).abs() < 1e-9);
    }

    #[test]
    fn alamouti_min_determinant_is_one() {
        let code = alamouti_code(&[-1, 0, 1]).unwrap();
        let md = min_determinant(&code, Scan::Exhaustive).unwrap();
        assert!((md - 1.0).abs() < 1e-12);
    }

    #[test]
    fn block_diagonal_single_block_is_unchanged() {
        // One block admits only an order-1 automorphism.
        let code = alamouti_code(&[-1, 0, 1]).unwrap();
        let same = block_diagonal_construct(&code, &|z| z, 1).unwrap();
        for (a, b) in code.basis_matrices().iter().zip(same.basis_matrices()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn block_diagonal_determinant_factors() {
        let code = alamouti_code(&[-1, 0, 1]).unwrap();
        let doubled = block_diagonal_construct(&code, &conj, 2).unwrap();
        let coords = [1, -1, 1, 1];
        let x = code.codeword(&coords).unwrap();
        let big = doubled.codeword(&coords).unwrap();
        let tau_x = DMatrix::from_fn(2, 2, |i, j| x[(i, j)].conj());
        let expect = x.determinant() * tau_x.determinant();
        assert!((big.determinant() - expect).norm() < 1e-10);
    }

    #[test]
    fn block_diagonal_checks_tau_order() {
        let code = alamouti_code(&[-1, 0, 1]).unwrap();
        // Multiplication by i has order 4, which does not divide 2.
        let twist = |z: Complex64| z * Complex64::new(0.0, 1.0);
        assert!(matches!(
            block_diagonal_construct(&code, &twist, 2),
            Err(StcError::Domain(_))
        ));
    }

    #[test]
    fn rate_bookkeeping_matches_the_full_rate_convention() {
        // Alamouti: k = 4 over T = 2 uses, rate 2 = 2 n_r for one receive
        // antenna. Block-diagonal repetition spreads the same symbols over
        // twice the uses, halving the rate.
        let code = alamouti_code(&[-1, 1]).unwrap();
        assert!((code.rate_real_spcu() - 2.0).abs() < 1e-12);
        let doubled = block_diagonal_construct(&code, &conj, 2).unwrap();
        assert!((doubled.rate_real_spcu() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn iterated_keeps_identity_in_the_corner() {
        let code = alamouti_code(&[-1, 0, 1]).unwrap();
        let it = iterated_construct(&code, &conj, c(0.0, 1.0)).unwrap();
        // First basis matrix comes from alpha_tilde(I, 0) = diag(I, conj(I)).
        let first = &it.basis_matrices()[0];
        let drift = (first - DMatrix::<Complex64>::identity(4, 4)).norm();
        assert!(drift < 1e-12);
        assert_eq!(it.k(), 8);
    }

    #[test]
    fn iterated_rank_doubles() {
        let code = alamouti_code(&[-1, 0, 1]).unwrap();
        let it = iterated_construct(&code, &conj, c(0.0, 1.0)).unwrap();
        let sv = it.iota_basis().svd(false, false).singular_values;
        assert_eq!(sv.iter().filter(|&&v| v > 1e-9 * sv.max()).count(), 8);
    }

    #[test]
    fn iterated_preserves_anticommutation() {
        let code = alamouti_code(&[-1, 0, 1]).unwrap();
        let it = iterated_construct(&code, &conj, c(0.0, 1.0)).unwrap();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let (a, b) = (&code.basis_matrices()[i], &code.basis_matrices()[j]);
                let base = (a * b.adjoint() + b * a.adjoint()).norm();
                assert!(base < 1e-12, "input pair ({i},{j}) not anticommuting");
                let (ia, ib) = (&it.basis_matrices()[i], &it.basis_matrices()[j]);
                let lifted = (ia * ib.adjoint() + ib * ia.adjoint()).norm();
                assert!(lifted < 1e-12, "lifted pair ({i},{j}) drift {lifted}");
            }
        }
    }

    #[test]
    fn iterated_rejects_a_skew_theta() {
        let code = alamouti_code(&[-1, 0, 1]).unwrap();
        assert!(matches!(
            iterated_construct(&code, &conj, c(1.0, 1.0)),
            Err(StcError::Domain(_))
        ));
    }

    #[test]
    fn alamouti_density_reference_values() {
        let code = alamouti_code(&[-1, 0, 1]).unwrap();
        let (delta, eta) = normalized_density(&code).unwrap();
        // det_min = 1, vol = sqrt(det(2 I_4)) = 4.
        assert!((delta - 1.0 / 4.0f64.powf(0.25)).abs() < 1e-12);
        assert!((eta - 0.25).abs() < 1e-12);
        assert!((delta * delta - eta.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn golden_density_is_scale_invariant() {
        // The golden iota-lattice is full (k = 2n^2), so delta is invariant
        // under scaling while eta picks up the volume factor.
        let code = golden_code(&[-1, 0, 1]).unwrap();
        let (delta, eta) = normalized_density(&code).unwrap();
        let (delta2, eta2) = normalized_density(&code.scaled(2.0).unwrap()).unwrap();
        assert!((delta - delta2).abs() < 1e-9, "{delta} vs {delta2}");
        assert!((delta * delta - eta.powf(0.5)).abs() < 1e-9);
        assert!((delta2 * delta2 - eta2.powf(0.5)).abs() < 1e-9);
    }

    #[test]
    fn discriminant_relation_arithmetic() {
        let five = Ratio::from_integer(5);
        assert_eq!(
            natural_order_discriminant(-7, five, 1),
            Ratio::from_integer(-7)
        );
        assert_eq!(
            natural_order_discriminant(-4, five, 2),
            Ratio::from_integer(400)
        );
        let d = natural_order_discriminant(-3, Ratio::from_integer(1), 3);
        assert_eq!(d, Ratio::from_integer(-27));
    }

    #[test]
    fn export_round_trips_through_json() {
        let code = alamouti_code(&[-1, 1]).unwrap();
        let json = serde_json::to_string(&code.export()).unwrap();
        assert!(json.contains("\"alamouti\""));
        assert!(json.contains("\"alphabet\":[-1,1]"));
    }

    #[test]
    fn asymmetric_alphabet_is_rejected() {
        let basis = vec![DMatrix::from_element(1, 1, c(1.0, 0.0))];
        assert!(matches!(
            SpaceTimeCodeSpec::new("bad", basis, &[0, 1]),
            Err(StcError::Domain(_))
        ));
    }

    #[test]
    fn dependent_basis_is_rejected() {
        let b = DMatrix::from_element(1, 1, c(1.0, 0.0));
        let twice = DMatrix::from_element(1, 1, c(2.0, 0.0));
        assert!(matches!(
            SpaceTimeCodeSpec::new("bad", vec![b, twice], &[-1, 0, 1]),
            Err(StcError::Degenerate(_))
        ));
    }
}
