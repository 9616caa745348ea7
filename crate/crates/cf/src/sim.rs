//! Monte Carlo estimation of the destination's singularity probability.
//!
//! With `M = K` relays each choosing its own coefficient vector from its own
//! channel draw, the stacked matrix `A` can be rationally singular, leaving
//! the destination unable to separate the sources no matter how reliable the
//! individual decodes were. Parity-constrained candidate sets remove the
//! event entirely for two sources; unconstrained selection trades it against
//! rate.

use latticeforge_channel::{stream_rng, wilson_interval, SimRow, SimulationReport};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{CfError, Result};
use crate::rate::{best_coefficients, candidate_set_choice, Strategy};

/// How each relay in the singularity experiment picks its coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelayStrategy {
    /// Unconstrained shortest-vector selection at every relay.
    Svp,
    /// Relay `m` searches parity set `m + 1` within `|a|_inf <= b`
    /// (two sources only).
    CandidateSets(i64),
}

impl RelayStrategy {
    fn label(&self) -> String {
        match self {
            RelayStrategy::Svp => "svp".into(),
            RelayStrategy::CandidateSets(b) => format!("candidate_sets(b={b})"),
        }
    }
}

/// Estimate the probability that the stacked coefficient matrix of `K = M`
/// relays is singular, over i.i.d. standard normal real channels.
///
/// One row per entry of `rho_db`; the report reuses the channel crate's
/// schema with `errors` counting singular draws and `cwer` their fraction.
/// Trial `t` of grid point `g` draws from RNG stream `g * trials + t`, so
/// reports are reproducible and independent of the worker count.
pub fn singularity_probability(
    k: usize,
    rho_db: &[f64],
    trials: u64,
    seed: u64,
    strategy: RelayStrategy,
) -> Result<SimulationReport> {
    if k == 0 {
        return Err(CfError::Domain("need at least one source".into()));
    }
    if rho_db.is_empty() {
        return Err(CfError::Domain("empty SNR grid".into()));
    }
    if trials < 1_000 {
        return Err(CfError::Domain(format!(
            "at least 1000 trials are required for a stable estimate, got {trials}"
        )));
    }
    if let RelayStrategy::CandidateSets(b) = strategy {
        if k != 2 {
            return Err(CfError::Domain(
                "parity candidate sets are defined for exactly two sources".into(),
            ));
        }
        if b < 1 {
            return Err(CfError::Domain(format!(
                "box bound must be at least 1, got {b}"
            )));
        }
    }

    let mut rows = Vec::with_capacity(rho_db.len());
    for (gi, &snr_db) in rho_db.iter().enumerate() {
        let rho = 10f64.powf(snr_db / 10.0);
        let singular: u64 = (0..trials)
            .into_par_iter()
            .map(|t| -> Result<u64> {
                let mut rng = stream_rng(seed, gi as u64 * trials + t);
                let mut a_rows: Vec<Vec<i64>> = Vec::with_capacity(k);
                for m in 0..k {
                    let h: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
                    let choice = match strategy {
                        RelayStrategy::Svp => best_coefficients(&h, rho, Strategy::Svp)?,
                        RelayStrategy::CandidateSets(b) => {
                            candidate_set_choice(&h, rho, m + 1, b)?
                        }
                    };
                    a_rows.push(choice.a);
                }
                let a128: Vec<Vec<i128>> = a_rows
                    .iter()
                    .map(|r| r.iter().map(|&v| v as i128).collect())
                    .collect();
                Ok(u64::from(latticeforge_core::intmat::det_i128(&a128) == 0))
            })
            .try_reduce(|| 0, |x, y| Ok(x + y))?;
        let frac = singular as f64 / trials as f64;
        let (ci_low, ci_high) = wilson_interval(singular, trials);
        rows.push(SimRow {
            snr_db,
            trials,
            errors: singular,
            cwer: frac,
            ci_low,
            ci_high,
        });
    }
    let config = json!({
        "op": "singularity_probability",
        "sources": k,
        "relays": k,
        "strategy": strategy.label(),
        "trials": trials,
    });
    Ok(SimulationReport::new(config, seed, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidate_sets_never_go_singular() {
        let report =
            singularity_probability(2, &[0.0, 10.0], 1_000, 7, RelayStrategy::CandidateSets(8))
                .unwrap();
        for row in &report.rows {
            assert_eq!(row.errors, 0, "at {} dB", row.snr_db);
        }
    }

    #[test]
    fn unconstrained_selection_does_go_singular() {
        let report =
            singularity_probability(2, &[10.0], 1_000, 7, RelayStrategy::Svp).unwrap();
        let row = &report.rows[0];
        assert!(row.errors > 0, "expected singular draws at 10 dB");
        assert!(row.cwer < 0.9, "implausibly high singular fraction");
    }

    #[test]
    fn one_source_is_always_solvable() {
        let report = singularity_probability(1, &[5.0], 1_000, 3, RelayStrategy::Svp).unwrap();
        assert_eq!(report.rows[0].errors, 0);
    }

    #[test]
    fn preconditions_are_enforced() {
        assert!(matches!(
            singularity_probability(2, &[5.0], 10, 3, RelayStrategy::Svp),
            Err(CfError::Domain(_))
        ));
        assert!(matches!(
            singularity_probability(3, &[5.0], 1_000, 3, RelayStrategy::CandidateSets(8)),
            Err(CfError::Domain(_))
        ));
        assert!(matches!(
            singularity_probability(2, &[], 1_000, 3, RelayStrategy::Svp),
            Err(CfError::Domain(_))
        ));
    }

    #[test]
    fn reports_are_reproducible() {
        let a = singularity_probability(2, &[6.0], 1_000, 11, RelayStrategy::Svp).unwrap();
        let b = singularity_probability(2, &[6.0], 1_000, 11, RelayStrategy::Svp).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }
}
