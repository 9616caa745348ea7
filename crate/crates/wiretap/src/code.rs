//! Wiretap coset codes over the real lattice spanned by a space-time code.
//!
//! The code's basis matrices span a `k`-dimensional real subspace of the
//! `2·n_t·T`-dimensional ambient space. All lattice work happens in span
//! coordinates (an isometric copy obtained from a thin QR of the interleaved
//! basis image); `lift` maps span coordinates back to ambient vectors, and
//! matrices move in and out through the interleaving.

use std::collections::BTreeMap;

use latticeforge_core::{closest_vector, Enumerator, Lattice, LatticePoint, NestedCodePair};
use latticeforge_stc::{iota, SpaceTimeCodeSpec};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Result, WiretapError};

/// Relative rank tolerance for span extraction.
const RANK_TOL: f64 = 1e-12;
/// Relative residual above which a matrix is declared outside the code span.
const SPAN_TOL: f64 = 1e-9;
/// Tolerance for coordinates that must come out integral.
const INTEGER_TOL: f64 = 1e-6;
/// Enumeration budget for the Gaussian randomizer's candidate set.
const ENCODE_CAP: u64 = 4_000_000;

/// Inverse of the interleaving: rebuilds the `n_t x t_len` complex matrix
/// whose column-major (Re, Im) interleaved image is `v`.
pub fn un_iota(v: &DVector<f64>, n_t: usize, t_len: usize) -> Result<DMatrix<Complex64>> {
    if v.len() != 2 * n_t * t_len {
        return Err(WiretapError::Dimension {
            context: "interleaved vector length",
            expected: 2 * n_t * t_len,
            got: v.len(),
        });
    }
    Ok(DMatrix::from_fn(n_t, t_len, |i, j| {
        let base = 2 * (j * n_t + i);
        Complex64::new(v[base], v[base + 1])
    }))
}

/// Real representation of left multiplication by `h` on interleaved images:
/// `iota(h·X) = real_fading_matrix(h, t_len) · iota(X)` for every `X` with
/// `t_len` columns. The 2x2 block at `(i, l)` is `[[Re, -Im], [Im, Re]]` of
/// `h[(i, l)]`, repeated once per column via `I_T ⊗ H̄`.
pub fn real_fading_matrix(h: &DMatrix<Complex64>, t_len: usize) -> DMatrix<f64> {
    let (rows, cols) = h.shape();
    let mut hbar = DMatrix::zeros(2 * rows, 2 * cols);
    for i in 0..rows {
        for l in 0..cols {
            let z = h[(i, l)];
            hbar[(2 * i, 2 * l)] = z.re;
            hbar[(2 * i, 2 * l + 1)] = -z.im;
            hbar[(2 * i + 1, 2 * l)] = z.im;
            hbar[(2 * i + 1, 2 * l + 1)] = z.re;
        }
    }
    DMatrix::identity(t_len, t_len).kronecker(&hbar)
}

/// Thin QR of a tall generator with positive diagonal, so the R factor is a
/// canonical span basis and Q lifts span coordinates back to the ambient
/// space. Fails if the columns are (numerically) dependent.
pub(crate) fn span_qr(tall: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (rows, cols) = tall.shape();
    if rows < cols || cols == 0 {
        return Err(WiretapError::Dimension {
            context: "span generator rows",
            expected: cols.max(1),
            got: rows,
        });
    }
    let qr = tall.clone().qr();
    let mut q = qr.q();
    let mut r = qr.r();
    for j in 0..cols {
        if r[(j, j)] < 0.0 {
            for c in j..cols {
                r[(j, c)] = -r[(j, c)];
            }
            for i in 0..rows {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    let dmax = (0..cols).map(|j| r[(j, j)]).fold(0.0_f64, f64::max);
    let dmin = (0..cols).map(|j| r[(j, j)]).fold(f64::INFINITY, f64::min);
    if !(dmin > RANK_TOL * dmax) {
        return Err(WiretapError::Domain(
            "generator columns are linearly dependent over the reals".into(),
        ));
    }
    Ok((q, r))
}

/// A wiretap coset code `Λ_e ⊂ Λ_b`: the fine lattice is the span image of a
/// space-time code, the coarse lattice an integer sublattice of it, and each
/// of the `|Λ_b/Λ_e|` messages is the Voronoi-canonical leader of its coset.
///
/// Message indices follow the leaders' canonical order (norm, then
/// coordinates), which is also the order `coset_leaders` reports.
#[derive(Debug, Clone)]
pub struct WiretapCode {
    spec: SpaceTimeCodeSpec,
    lift: DMatrix<f64>,
    pair: NestedCodePair,
    leaders: Vec<LatticePoint>,
    message_of: BTreeMap<Vec<i128>, u64>,
}

impl WiretapCode {
    /// Builds the code from a space-time code and an integer sublattice
    /// transform (rows express coarse basis vectors in fine coordinates).
    pub fn new(spec: SpaceTimeCodeSpec, transform: &[Vec<i64>]) -> Result<Self> {
        let (lift, fine_basis) = span_qr(&spec.iota_basis())?;
        let fine = Lattice::from_basis(fine_basis)?;
        let pair = NestedCodePair::new(fine, transform)?;
        let leaders = pair.coset_leaders()?;
        let mut message_of = BTreeMap::new();
        for (m, leader) in leaders.iter().enumerate() {
            message_of.insert(pair.residue(&leader.coords), m as u64);
        }
        Ok(Self {
            spec,
            lift,
            pair,
            leaders,
            message_of,
        })
    }

    pub fn spec(&self) -> &SpaceTimeCodeSpec {
        &self.spec
    }

    pub fn pair(&self) -> &NestedCodePair {
        &self.pair
    }

    /// Orthonormal map from span coordinates to ambient interleaved vectors.
    pub fn lift(&self) -> &DMatrix<f64> {
        &self.lift
    }

    /// Number of messages, `|Λ_b/Λ_e|`.
    pub fn messages(&self) -> u64 {
        self.pair.index()
    }

    /// Span dimension `k`.
    pub fn dim(&self) -> usize {
        self.pair.fine().dim()
    }

    /// Canonical coset leaders in message order.
    pub fn leaders(&self) -> &[LatticePoint] {
        &self.leaders
    }

    /// Span vector of the message's coset leader.
    pub fn message_point(&self, message_index: u64) -> Result<DVector<f64>> {
        let leader = self.leader(message_index)?;
        Ok(self.pair.fine().vector(&leader.coords))
    }

    /// Codeword matrix of the message's coset leader.
    pub fn message_matrix(&self, message_index: u64) -> Result<DMatrix<Complex64>> {
        let point = self.message_point(message_index)?;
        self.matrix_of(&point)
    }

    /// Matrix form of a span vector.
    pub fn matrix_of(&self, span: &DVector<f64>) -> Result<DMatrix<Complex64>> {
        if span.len() != self.dim() {
            return Err(WiretapError::Dimension {
                context: "span vector length",
                expected: self.dim(),
                got: span.len(),
            });
        }
        un_iota(&(&self.lift * span), self.spec.n_t(), self.spec.t_len())
    }

    /// Span coordinates of a matrix that lies in the code span; matrices with
    /// a component outside the span are rejected.
    pub fn span_of_matrix(&self, x: &DMatrix<Complex64>) -> Result<DVector<f64>> {
        self.check_shape(x)?;
        let v = iota(x);
        let span = self.lift.transpose() * &v;
        let residual = (&self.lift * &span - &v).norm();
        if residual > SPAN_TOL * (1.0 + v.norm()) {
            return Err(WiretapError::Domain(format!(
                "matrix lies outside the code span (residual {residual:.3e})"
            )));
        }
        Ok(span)
    }

    fn check_shape(&self, x: &DMatrix<Complex64>) -> Result<()> {
        if x.shape() != (self.spec.n_t(), self.spec.t_len()) {
            return Err(WiretapError::Dimension {
                context: "codeword matrix entries",
                expected: self.spec.n_t() * self.spec.t_len(),
                got: x.len(),
            });
        }
        Ok(())
    }

    fn leader(&self, message_index: u64) -> Result<&LatticePoint> {
        self.leaders
            .get(message_index as usize)
            .ok_or_else(|| {
                WiretapError::Domain(format!(
                    "message index {message_index} out of range for {} cosets",
                    self.messages()
                ))
            })
    }
}

/// Distribution of the coset randomizer `x_r ∈ Λ_e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Randomness {
    /// `x_r` uniform over coarse coordinates in `[-B, B]^k`.
    UniformInBox(i64),
    /// `x = x_m + x_r` follows the Gaussian of scale `σ_s` discretized onto
    /// the coset, sampled by rejection against the continuous density.
    DiscreteGaussian(f64),
}

/// One encoded transmission in all three representations.
#[derive(Debug, Clone)]
pub struct Encoded {
    /// Coordinates of `x` in the fine lattice basis.
    pub fine_coords: Vec<i64>,
    /// `x` in span coordinates.
    pub span: DVector<f64>,
    /// `x` as an ambient interleaved vector.
    pub vector: DVector<f64>,
    /// `x` as an `n_t x T` codeword matrix.
    pub matrix: DMatrix<Complex64>,
}

/// Encodes a message as `x = x_m + x_r` with `x_m` the coset leader and
/// `x_r ∈ Λ_e` drawn per `randomness`.
pub fn coset_encode(
    code: &WiretapCode,
    message_index: u64,
    randomness: Randomness,
    rng: &mut impl Rng,
) -> Result<Encoded> {
    let x_m = code.message_point(message_index)?;
    let coarse = code.pair().coarse();
    let span = match randomness {
        Randomness::UniformInBox(b) => {
            if b < 0 {
                return Err(WiretapError::Domain(format!(
                    "box half-width must be nonnegative, got {b}"
                )));
            }
            let c: Vec<i64> = (0..code.dim()).map(|_| rng.gen_range(-b..=b)).collect();
            x_m + coarse.vector(&c)
        }
        Randomness::DiscreteGaussian(sigma_s) => sample_coset_gaussian(code, &x_m, sigma_s, rng)?,
    };
    let fine_coords = integer_coords(code.pair().fine(), &span)?;
    let vector = code.lift() * &span;
    let matrix = un_iota(&vector, code.spec().n_t(), code.spec().t_len())?;
    Ok(Encoded {
        fine_coords,
        span,
        vector,
        matrix,
    })
}

/// Rejection sampler for the origin-centered Gaussian discretized onto the
/// coset `x_m + Λ_e`: candidates are the coset points within `‖x_m‖ + σ_s(6+√k)`
/// of the origin (the neglected mass is below e^-18 of the total), proposed
/// uniformly and accepted against `exp(-‖x‖²/(2σ_s²))`.
fn sample_coset_gaussian(
    code: &WiretapCode,
    x_m: &DVector<f64>,
    sigma_s: f64,
    rng: &mut impl Rng,
) -> Result<DVector<f64>> {
    if !(sigma_s > 0.0) {
        return Err(WiretapError::Domain(format!(
            "Gaussian scale must be positive, got {sigma_s}"
        )));
    }
    let coarse = code.pair().coarse();
    let en = Enumerator::new(coarse)?;
    let (_, lambda1) = en.shortest_vector()?;
    let floor = lambda1 / (2.0 * std::f64::consts::PI);
    if sigma_s * sigma_s < floor {
        return Err(WiretapError::Domain(format!(
            "Gaussian scale below the smoothing guard: need sigma_s^2 >= lambda_1(coarse)/(2*pi) = {floor:.6}, got {:.6}",
            sigma_s * sigma_s
        )));
    }
    let k = code.dim() as f64;
    let r_trunc = sigma_s * (6.0 + k.sqrt());
    let keep = x_m.norm() + r_trunc;
    let reach = keep + x_m.norm();
    let mut candidates: Vec<(DVector<f64>, f64)> = Vec::new();
    let mut d_min = f64::INFINITY;
    for p in en.points_within(reach * reach, ENCODE_CAP)? {
        let x = x_m + coarse.vector(&p.coords);
        let d2 = x.norm_squared();
        if d2 <= keep * keep {
            d_min = d_min.min(d2);
            candidates.push((x, d2));
        }
    }
    let two_s2 = 2.0 * sigma_s * sigma_s;
    loop {
        let i = rng.gen_range(0..candidates.len());
        let accept = (-(candidates[i].1 - d_min) / two_s2).exp();
        if rng.gen::<f64>() <= accept {
            return Ok(candidates[i].0.clone());
        }
    }
}

fn integer_coords(fine: &Lattice, span: &DVector<f64>) -> Result<Vec<i64>> {
    let coords = fine.coords_of(span)?;
    let mut out = Vec::with_capacity(coords.len());
    for c in coords.iter() {
        let r = c.round();
        if (c - r).abs() > INTEGER_TOL {
            return Err(WiretapError::Inconsistent(format!(
                "encoded point has non-integral fine coordinate {c}"
            )));
        }
        out.push(r as i64);
    }
    Ok(out)
}

/// Decodes a received matrix to a message index: orthogonal projection onto
/// the code span, closest fine point, then the coset's canonical residue.
/// Off-span noise components are discarded by the projection.
pub fn decode_message(code: &WiretapCode, x: &DMatrix<Complex64>) -> Result<u64> {
    code.check_shape(x)?;
    let span = code.lift().transpose() * iota(x);
    let cp = closest_vector(code.pair().fine(), &span)?;
    let residue = code.pair().residue(&cp.coords);
    code.message_of.get(&residue).copied().ok_or_else(|| {
        WiretapError::Inconsistent("residue table is missing a coset".into())
    })
}
