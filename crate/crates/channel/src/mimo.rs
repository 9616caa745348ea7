//! Rayleigh MIMO channel: realization sampling and codeword transmission.
//!
//! Channel entries have real and imaginary parts i.i.d. N(0, sigma_h2), so
//! the envelope |h| is Rayleigh(sigma_h) and E|h|^2 = 2 sigma_h2. Noise
//! entries follow the same per-component convention with variance sigma_n2.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use latticeforge_stc::SpaceTimeCodeSpec;

use crate::error::{ChannelError, Result};
use crate::rng::complex_gaussian;

/// One channel draw together with the statistics it was drawn from.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    /// Complex n_r x n_t channel matrix.
    pub h: DMatrix<Complex64>,
    /// Per-component variance of the entries.
    pub sigma_h2: f64,
    /// Linear SNR this realization is simulated at; 1 until a run sets it.
    pub snr: f64,
}

/// Draws an n_r x n_t Rayleigh channel realization.
pub fn sample_channel(
    n_r: usize,
    n_t: usize,
    sigma_h2: f64,
    rng: &mut impl Rng,
) -> Result<ChannelRealization> {
    if n_r == 0 || n_t == 0 {
        return Err(ChannelError::Domain(
            "channel needs at least one antenna on each side".into(),
        ));
    }
    if !(sigma_h2 > 0.0) {
        return Err(ChannelError::Domain(format!(
            "sigma_h2 must be positive, got {sigma_h2}"
        )));
    }
    Ok(ChannelRealization {
        h: complex_gaussian(n_r, n_t, sigma_h2, rng),
        sigma_h2,
        snr: 1.0,
    })
}

/// Sends the codeword at `coords` through `h`: Y = H X + N.
///
/// Noise entries have per-component variance `sigma_n2`; zero skips the
/// draw entirely.
pub fn transmit(
    code: &SpaceTimeCodeSpec,
    coords: &[i64],
    h: &DMatrix<Complex64>,
    sigma_n2: f64,
    rng: &mut impl Rng,
) -> Result<DMatrix<Complex64>> {
    if h.ncols() != code.n_t() {
        return Err(ChannelError::Dimension {
            context: "channel columns vs transmit antennas",
            expected: code.n_t(),
            got: h.ncols(),
        });
    }
    if !(sigma_n2 >= 0.0) {
        return Err(ChannelError::Domain(format!(
            "sigma_n2 must be nonnegative, got {sigma_n2}"
        )));
    }
    for &c in coords {
        if !code.alphabet().contains(&c) {
            return Err(ChannelError::Domain(format!(
                "coordinate {c} is outside the signaling alphabet"
            )));
        }
    }
    let x = code.codeword(coords)?;
    let mut y = h * x;
    if sigma_n2 > 0.0 {
        y += complex_gaussian(h.nrows(), code.t_len(), sigma_n2, rng);
    }
    Ok(y)
}
