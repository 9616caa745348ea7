//! Monte Carlo codeword-error simulation with schedule-independent reports.
//!
//! SNR is ρ = P/σ_n² with P the average codeword power of the finite code
//! and σ_n² the per-component noise variance. Each (SNR point, trial) pair
//! draws from its own RNG stream, and aggregation is a plain integer sum,
//! so reports are byte-identical for any worker count.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use latticeforge_stc::SpaceTimeCodeSpec;

use crate::decode::sphere_decode;
use crate::error::{ChannelError, Result};
use crate::mimo::{sample_channel, transmit};
use crate::rng::stream_rng;

/// Per-component channel variance used by the Monte Carlo runs, chosen so
/// that E|h|^2 = 1.
pub const SIM_SIGMA_H2: f64 = 0.5;

/// One SNR point of a simulation run.
#[derive(Debug, Clone, Serialize)]
pub struct SimRow {
    pub snr_db: f64,
    pub trials: u64,
    pub errors: u64,
    /// Error fraction: codeword error rate here, singular-A fraction when a
    /// compute-and-forward run reuses the report.
    pub cwer: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Reproducible simulation output: config echo, seed, and per-SNR rows.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub schema: u32,
    pub version: String,
    pub config: serde_json::Value,
    pub seed: u64,
    pub rows: Vec<SimRow>,
}

impl SimulationReport {
    pub fn new(config: serde_json::Value, seed: u64, rows: Vec<SimRow>) -> Self {
        SimulationReport {
            schema: 1,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            seed,
            rows,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flat CSV of the rows for plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("snr_db,trials,errors,cwer,ci_low,ci_high\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.snr_db, r.trials, r.errors, r.cwer, r.ci_low, r.ci_high
            ));
        }
        out
    }
}

/// 95% Wilson score interval for `errors` successes in `trials`.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    assert!(trials > 0, "interval needs at least one trial");
    let z = 1.96f64;
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // The endpoints are algebraically exact at p = 0 and p = 1; pin them so
    // rounding cannot push the interval off the point estimate.
    let lo = if errors == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if errors == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

/// Average codeword power of the finite code under i.i.d. uniform symbols:
/// E||X||_F^2 = mean(s^2) * sum_i ||B_i||_F^2.
pub fn average_codeword_power(code: &SpaceTimeCodeSpec) -> f64 {
    let mean_s2 = code
        .alphabet()
        .iter()
        .map(|&s| (s * s) as f64)
        .sum::<f64>()
        / code.alphabet().len() as f64;
    mean_s2
        * code
            .basis_matrices()
            .iter()
            .map(|b| b.norm_squared())
            .sum::<f64>()
}

fn one_trial(
    code: &SpaceTimeCodeSpec,
    n_r: usize,
    sigma_n2: f64,
    rng: &mut impl Rng,
) -> Result<bool> {
    let coords: Vec<i64> = (0..code.k())
        .map(|_| code.alphabet()[rng.gen_range(0..code.alphabet().len())])
        .collect();
    let h = sample_channel(n_r, code.n_t(), SIM_SIGMA_H2, rng)?.h;
    let y = transmit(code, &coords, &h, sigma_n2, rng)?;
    Ok(sphere_decode(code, &h, &y)? != coords)
}

/// Codeword error rate of `code` over the Rayleigh MIMO channel at each SNR
/// point, with Wilson confidence intervals.
pub fn monte_carlo_cwer(
    code: &SpaceTimeCodeSpec,
    n_r: usize,
    snr_db: &[f64],
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    if trials < 100 {
        return Err(ChannelError::Domain(format!(
            "need at least 100 trials for a meaningful rate, got {trials}"
        )));
    }
    if snr_db.is_empty() {
        return Err(ChannelError::Domain("empty SNR grid".into()));
    }
    let power = average_codeword_power(code);
    if !(power > 0.0) {
        return Err(ChannelError::Domain(
            "code has zero average power; nothing to simulate".into(),
        ));
    }
    let mut rows = Vec::with_capacity(snr_db.len());
    for (gi, &snr) in snr_db.iter().enumerate() {
        let sigma_n2 = power / 10f64.powf(snr / 10.0);
        let errors = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = stream_rng(seed, gi as u64 * trials + t);
                one_trial(code, n_r, sigma_n2, &mut rng).map(u64::from)
            })
            .try_reduce(|| 0u64, |a, b| Ok(a + b))?;
        let (ci_low, ci_high) = wilson_interval(errors, trials);
        rows.push(SimRow {
            snr_db: snr,
            trials,
            errors,
            cwer: errors as f64 / trials as f64,
            ci_low,
            ci_high,
        });
    }
    let config = json!({
        "op": "monte_carlo_cwer",
        "code": code.label(),
        "n_t": code.n_t(),
        "t": code.t_len(),
        "k": code.k(),
        "alphabet": code.alphabet(),
        "n_r": n_r,
        "sigma_h2": SIM_SIGMA_H2,
        "snr_db": snr_db,
        "trials": trials,
        "power_per_codeword": power,
    });
    Ok(SimulationReport::new(config, seed, rows))
}
