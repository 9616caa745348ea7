//! Expected flatness factor of the faded coarse lattice over channel draws.
//!
//! Each draw fades the ambient generator of `Λ_e` by `I_T ⊗ H̄`, reduces the
//! result to a span basis, and evaluates the flatness factor there. Draws are
//! deterministic in `(seed, draw index)` and independent, so they run in
//! parallel; the accepted set is the first `n_draws` acceptable indices in
//! order, independent of thread count.

use std::f64::consts::PI;

use latticeforge_channel::{complex_gaussian, stream_rng, SIM_SIGMA_H2};
use latticeforge_core::theta::{flatness_factor_capped, theta_main_term};
use latticeforge_core::{Enumerator, Lattice, LatticeError};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::{real_fading_matrix, span_qr, WiretapCode};
use crate::error::{Result, WiretapError};

/// Channel draws with a worse generator condition number are resampled.
const COND_LIMIT: f64 = 1e8;
/// Truncation budget passed to the flatness evaluation.
const FLAT_TAIL_TOL: f64 = 1e-9;
/// Enumeration budget per flatness evaluation before the main-term
/// approximation is substituted.
const FLAT_CAP: u64 = 2_000_000;

/// Faded generator `(I_T ⊗ H̄) · M_{Λ_e}` of the coarse lattice, as a tall
/// real matrix with one column per span dimension.
fn faded_generator(code: &WiretapCode, h_e: &DMatrix<Complex64>) -> Result<DMatrix<f64>> {
    if h_e.ncols() != code.spec().n_t() || h_e.nrows() == 0 {
        return Err(WiretapError::Dimension {
            context: "fading matrix columns",
            expected: code.spec().n_t(),
            got: h_e.ncols(),
        });
    }
    let ambient = code.lift() * code.pair().coarse().basis();
    Ok(real_fading_matrix(h_e, code.spec().t_len()) * ambient)
}

/// The coarse lattice seen through the fading matrix `h_e`, reduced to a span
/// basis. Fails when the faded generator loses rank.
pub fn faded_coarse_lattice(code: &WiretapCode, h_e: &DMatrix<Complex64>) -> Result<Lattice> {
    let tall = faded_generator(code, h_e)?;
    let (_q, r) = span_qr(&tall)?;
    Ok(Lattice::from_basis(r)?)
}

/// Outcome of one channel draw.
pub(crate) enum DrawOutcome {
    Value { eps: f64, approx: bool },
    Rejected,
}

/// Flatness factor of the faded coarse lattice for one explicit channel
/// matrix. Near-singular draws are rejected rather than evaluated; an
/// enumeration over budget falls back to the theta main-term approximation.
pub(crate) fn flatness_draw(
    code: &WiretapCode,
    h_e: &DMatrix<Complex64>,
    sigma_e2: f64,
) -> Result<DrawOutcome> {
    let tall = faded_generator(code, h_e)?;
    let sv = tall.clone().svd(false, false).singular_values;
    let smax = sv.max();
    let smin = sv.min();
    if !(smin > smax / COND_LIMIT) {
        return Ok(DrawOutcome::Rejected);
    }
    let (_q, r) = span_qr(&tall)?;
    let lat = Lattice::from_basis(r)?;
    match flatness_factor_capped(&lat, sigma_e2, FLAT_TAIL_TOL, Some(FLAT_CAP)) {
        Ok(eps) => Ok(DrawOutcome::Value { eps, approx: false }),
        Err(LatticeError::Capacity { .. }) => {
            let en = Enumerator::new(&lat)?;
            let (_, lambda1) = en.shortest_vector()?;
            let q = (-1.0 / (2.0 * sigma_e2)).exp();
            let theta = theta_main_term(lat.dim(), lambda1, lat.volume(), q)?;
            let scale = lat.volume() / (2.0 * PI * sigma_e2).powf(lat.dim() as f64 / 2.0);
            Ok(DrawOutcome::Value {
                eps: (scale * theta - 1.0).max(0.0),
                approx: true,
            })
        }
        Err(e) => Err(e.into()),
    }
}

/// Monte Carlo estimate of the expected flatness factor.
#[derive(Debug, Clone, Serialize)]
pub struct FlatnessStats {
    pub mean: f64,
    pub std_error: f64,
    /// Accepted channel draws contributing to the mean.
    pub draws: u64,
    /// Near-singular draws that were rejected and redrawn.
    pub resampled: u64,
    /// Draws whose theta evaluation exceeded its budget and used the
    /// main-term approximation instead.
    pub approx_substituted: u64,
}

/// Estimates `E_H[ε_{Λ_e,H}(σ_e²)]` over `n_draws` i.i.d. channel draws with
/// `n_e` receive antennas, each entry complex Gaussian with per-component
/// variance `SIM_SIGMA_H2`.
pub fn expected_flatness(
    code: &WiretapCode,
    sigma_e2: f64,
    n_draws: u64,
    seed: u64,
    n_e: usize,
) -> Result<FlatnessStats> {
    if n_draws < 100 {
        return Err(WiretapError::Domain(format!(
            "expected flatness needs at least 100 draws, got {n_draws}"
        )));
    }
    if !(sigma_e2 > 0.0) {
        return Err(WiretapError::Domain(format!(
            "noise variance must be positive, got {sigma_e2}"
        )));
    }
    if n_e == 0 {
        return Err(WiretapError::Domain("n_e must be at least 1".into()));
    }
    let n_t = code.spec().n_t();
    let budget = n_draws.saturating_mul(10);
    let mut values: Vec<f64> = Vec::with_capacity(n_draws as usize);
    let mut resampled = 0u64;
    let mut approx_substituted = 0u64;
    let mut next_stream = 0u64;
    while (values.len() as u64) < n_draws {
        let need = n_draws - values.len() as u64;
        let window = need.min(budget - next_stream);
        if window == 0 {
            return Err(WiretapError::Inconsistent(format!(
                "near-singular channel draws exhausted the budget of {budget} attempts"
            )));
        }
        let outcomes: Vec<Result<DrawOutcome>> = (next_stream..next_stream + window)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream_rng(seed, i);
                let h = complex_gaussian(n_e, n_t, SIM_SIGMA_H2, &mut rng);
                flatness_draw(code, &h, sigma_e2)
            })
            .collect();
        next_stream += window;
        for outcome in outcomes {
            match outcome? {
                DrawOutcome::Value { eps, approx } => {
                    values.push(eps);
                    if approx {
                        approx_substituted += 1;
                    }
                }
                DrawOutcome::Rejected => resampled += 1,
            }
        }
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok(FlatnessStats {
        mean,
        std_error: (var / n).sqrt(),
        draws: n_draws,
        resampled,
        approx_substituted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use latticeforge_core::flatness_factor;
    use latticeforge_stc::{alamouti_code, SpaceTimeCodeSpec};

    fn alamouti_wiretap() -> WiretapCode {
        let spec = alamouti_code(&[-1, 1]).unwrap();
        let transform = vec![
            vec![2, 0, 0, 0],
            vec![0, 2, 0, 0],
            vec![0, 0, 2, 0],
            vec![0, 0, 0, 2],
        ];
        WiretapCode::new(spec, &transform).unwrap()
    }

    fn scalar_wiretap(transform: &[Vec<i64>]) -> WiretapCode {
        let spec = SpaceTimeCodeSpec::new(
            "gaussian-integer-scalar",
            vec![
                DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)),
                DMatrix::from_element(1, 1, Complex64::new(0.0, 1.0)),
            ],
            &[-1, 0, 1],
        )
        .unwrap();
        WiretapCode::new(spec, transform).unwrap()
    }

    #[test]
    fn identity_fading_reproduces_the_unfaded_factor() {
        let code = alamouti_wiretap();
        let eye = DMatrix::<Complex64>::identity(2, 2);
        let faded = faded_coarse_lattice(&code, &eye).unwrap();
        assert!((faded.gram() - code.pair().coarse().gram()).norm() < 1e-9);
        let sigma2 = 1.0;
        let direct = flatness_factor(code.pair().coarse(), sigma2, 1e-10).unwrap();
        let through = flatness_factor(&faded, sigma2, 1e-10).unwrap();
        assert!(
            (direct - through).abs() < 1e-10,
            "direct {direct} vs faded {through}"
        );
    }

    #[test]
    fn large_noise_flattens_everything() {
        let code = scalar_wiretap(&[vec![2, 0], vec![0, 2]]);
        let stats = expected_flatness(&code, 25.0, 100, 31, 1).unwrap();
        assert!(stats.mean >= 0.0);
        assert!(stats.mean < 1e-6, "mean {}", stats.mean);
    }

    #[test]
    fn expected_flatness_decreases_in_sigma() {
        let code = alamouti_wiretap();
        let stats: Vec<FlatnessStats> = [0.5, 1.0, 2.0]
            .iter()
            .map(|&s2| expected_flatness(&code, s2, 100, 5, 2).unwrap())
            .collect();
        assert!(stats.iter().all(|s| s.approx_substituted == 0));
        assert!(stats[0].mean > stats[1].mean && stats[1].mean > stats[2].mean);
    }

    #[test]
    fn skewed_sublattices_flatten_worse() {
        let wr = scalar_wiretap(&[vec![2, 0], vec![0, 2]]);
        let skew = scalar_wiretap(&[vec![1, 0], vec![0, 4]]);
        let wr_stats = expected_flatness(&wr, 1.0, 1000, 7, 1).unwrap();
        let skew_stats = expected_flatness(&skew, 1.0, 1000, 7, 1).unwrap();
        assert!(
            wr_stats.mean <= skew_stats.mean,
            "wr {} vs skew {}",
            wr_stats.mean,
            skew_stats.mean
        );
    }

    #[test]
    fn near_singular_draws_are_rejected() {
        // A spatial-multiplexing code without transmit diversity: the faded
        // generator is the real representation of H itself, so a
        // near-singular H degrades the lattice one-for-one. (Full-diversity
        // codes such as Alamouti keep the faded span nonsingular for every
        // H != 0, which is exactly their selling point.)
        let mut cols = Vec::new();
        for row in 0..2 {
            for unit in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                let mut b = DMatrix::zeros(2, 1);
                b[(row, 0)] = unit;
                cols.push(b);
            }
        }
        let spec = SpaceTimeCodeSpec::new("multiplexing-pilot", cols, &[-1, 0, 1]).unwrap();
        let transform: Vec<Vec<i64>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { 2 } else { 0 }).collect())
            .collect();
        let code = WiretapCode::new(spec, &transform).unwrap();

        let mut h = DMatrix::from_element(2, 2, Complex64::new(1.0, 0.0));
        assert!(matches!(
            flatness_draw(&code, &h, 1.0).unwrap(),
            DrawOutcome::Rejected
        ));
        h[(1, 1)] += Complex64::new(1e-10, 0.0);
        assert!(matches!(
            flatness_draw(&code, &h, 1.0).unwrap(),
            DrawOutcome::Rejected
        ));
        h[(1, 1)] = Complex64::new(-1.0, 0.5);
        assert!(matches!(
            flatness_draw(&code, &h, 1.0).unwrap(),
            DrawOutcome::Value { .. }
        ));
    }

    #[test]
    fn runs_are_reproducible() {
        let code = alamouti_wiretap();
        let a = expected_flatness(&code, 1.0, 100, 99, 1).unwrap();
        let b = expected_flatness(&code, 1.0, 100, 99, 1).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        assert_eq!(a.resampled, b.resampled);
    }

    #[test]
    fn argument_validation() {
        let code = alamouti_wiretap();
        assert!(expected_flatness(&code, 1.0, 50, 1, 1).is_err());
        assert!(expected_flatness(&code, 0.0, 100, 1, 1).is_err());
        assert!(expected_flatness(&code, 1.0, 100, 1, 0).is_err());
        let wide = DMatrix::<Complex64>::identity(3, 3);
        assert!(faded_coarse_lattice(&code, &wide).is_err());
    }
}
