//! Exact maximum-likelihood detection by sphere decoding.
//!
//! The complex problem is flattened through the real embedding: with
//! B = (iota(H B_1), ..., iota(H B_k)) the detector solves
//! argmin over S^k of ||iota(Y) - B s||^2. Depth-first enumeration over the
//! QR factor visits the alphabet at each level in Schnorr-Euchner order
//! (closest to the unconstrained center first), so the radius shrinks to the
//! first leaf's distance immediately and pruning never discards a minimizer.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use latticeforge_stc::{iota, iota_columns, SpaceTimeCodeSpec};

use crate::error::{ChannelError, Result};

/// Relative tolerance on QR diagonals below which the system counts as
/// rank deficient.
const RANK_TOL: f64 = 1e-10;

/// ML detection of a space-time codeword: exact argmin over S^k of
/// `||iota(Y) - iota(H X(s))||^2`.
pub fn sphere_decode(
    code: &SpaceTimeCodeSpec,
    h: &DMatrix<Complex64>,
    y: &DMatrix<Complex64>,
) -> Result<Vec<i64>> {
    if h.ncols() != code.n_t() {
        return Err(ChannelError::Dimension {
            context: "channel columns vs transmit antennas",
            expected: code.n_t(),
            got: h.ncols(),
        });
    }
    if y.shape() != (h.nrows(), code.t_len()) {
        return Err(ChannelError::Dimension {
            context: "received frame length",
            expected: code.t_len(),
            got: y.ncols(),
        });
    }
    let images: Vec<DMatrix<Complex64>> =
        code.basis_matrices().iter().map(|b| h * b).collect();
    let b = iota_columns(&images);
    let z = iota(y);
    sphere_decode_system(&b, code.alphabet(), &z)
}

/// Exact argmin over `alphabet^k` of `||z - b s||^2` for a real system `b`
/// with full column rank.
pub fn sphere_decode_system(
    b: &DMatrix<f64>,
    alphabet: &[i64],
    z: &DVector<f64>,
) -> Result<Vec<i64>> {
    let k = b.ncols();
    if alphabet.is_empty() || k == 0 {
        return Err(ChannelError::Domain(
            "decoding needs a nonempty alphabet and basis".into(),
        ));
    }
    if b.nrows() < k {
        return Err(ChannelError::Degenerate(format!(
            "{} real observations cannot determine {k} symbols; increase n_r",
            b.nrows()
        )));
    }
    if z.len() != b.nrows() {
        return Err(ChannelError::Dimension {
            context: "received vector length",
            expected: b.nrows(),
            got: z.len(),
        });
    }
    let qr = b.clone().qr();
    let r = qr.r();
    let diag_max = (0..k).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    if diag_max == 0.0 || (0..k).any(|i| r[(i, i)].abs() < RANK_TOL * diag_max) {
        return Err(ChannelError::Degenerate(
            "decoding matrix is rank deficient; increase n_r until the \
             code's channel images become independent"
                .into(),
        ));
    }
    let zt = qr.q().transpose() * z;

    let mut search = Search {
        r: &r,
        zt: &zt,
        alphabet,
        s: vec![alphabet[0]; k],
        best: f64::INFINITY,
        best_s: vec![alphabet[0]; k],
    };
    search.descend(k - 1, 0.0);
    Ok(search.best_s)
}

struct Search<'a> {
    r: &'a DMatrix<f64>,
    zt: &'a DVector<f64>,
    alphabet: &'a [i64],
    s: Vec<i64>,
    best: f64,
    best_s: Vec<i64>,
}

impl Search<'_> {
    fn descend(&mut self, level: usize, partial: f64) {
        // Residual target for this level given the fixed deeper symbols.
        let mut e = self.zt[level];
        for j in level + 1..self.s.len() {
            e -= self.r[(level, j)] * self.s[j] as f64;
        }
        let rii = self.r[(level, level)];
        let center = e / rii;
        let mut order: Vec<i64> = self.alphabet.to_vec();
        order.sort_by(|&a, &b| {
            (a as f64 - center)
                .abs()
                .partial_cmp(&(b as f64 - center).abs())
                .unwrap()
        });
        for v in order {
            let term = (e - rii * v as f64).powi(2);
            let d = partial + term;
            if d >= self.best {
                // Values are visited by distance to the center, so every
                // remaining candidate at this level is at least as far.
                break;
            }
            self.s[level] = v;
            if level == 0 {
                self.best = d;
                self.best_s.copy_from_slice(&self.s);
            } else {
                self.descend(level - 1, d);
            }
        }
    }
}
