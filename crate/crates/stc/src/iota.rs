//! The real vectorization ι of complex matrices.
//!
//! ι flattens a complex matrix column by column, interleaving real and
//! imaginary parts, so that ‖X‖_F = ‖ι(X)‖ exactly. All lattice-side
//! reasoning about space-time codes happens on ι-images.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Interleaved real/imaginary vectorization of a complex matrix,
/// column-major: (Re x₁₁, Im x₁₁, Re x₂₁, Im x₂₁, …).
pub fn iota(x: &DMatrix<Complex64>) -> DVector<f64> {
    let mut out = Vec::with_capacity(2 * x.len());
    for j in 0..x.ncols() {
        for i in 0..x.nrows() {
            let z = x[(i, j)];
            out.push(z.re);
            out.push(z.im);
        }
    }
    DVector::from_vec(out)
}

/// [`iota`] on a complex vector.
pub fn iota_vec(x: &DVector<Complex64>) -> DVector<f64> {
    let mut out = Vec::with_capacity(2 * x.len());
    for z in x.iter() {
        out.push(z.re);
        out.push(z.im);
    }
    DVector::from_vec(out)
}

/// Stacks ι-images of `mats` as the columns of a real matrix.
pub fn iota_columns(mats: &[DMatrix<Complex64>]) -> DMatrix<f64> {
    assert!(!mats.is_empty());
    let rows = 2 * mats[0].len();
    let mut out = DMatrix::zeros(rows, mats.len());
    for (j, m) in mats.iter().enumerate() {
        out.set_column(j, &iota(m));
    }
    out
}
