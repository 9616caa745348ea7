//! Deterministic stream splitting for schedule-independent simulation.
//!
//! Every randomized trial draws from its own ChaCha stream keyed by
//! (seed, stream index), so worker count and aggregation order cannot
//! change the sampled values.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// ChaCha8 generator for one logical stream of the given seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Complex matrix whose real and imaginary parts are i.i.d. N(0, var) each.
pub fn complex_gaussian(
    rows: usize,
    cols: usize,
    var: f64,
    rng: &mut impl Rng,
) -> DMatrix<Complex64> {
    let sd = var.sqrt();
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(sd * re, sd * im)
    })
}
