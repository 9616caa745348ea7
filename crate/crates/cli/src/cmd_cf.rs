//! Compute-and-forward commands: rate evaluation and relay singularity
//! simulation.

use crate::config::{pick, require, FileConfig, RunSettings};
use crate::error::{CliError, Result};
use crate::output::{Envelope, Format};
use clap::Args;
use latticeforge_cf::{
    alpha_rate, best_coefficients, computation_rate, optimal_alpha, singularity_probability,
    RelayStrategy, Strategy,
};
use serde_json::json;

#[derive(Args)]
pub struct RatesArgs {
    /// Real channel gains (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub h: Option<Vec<f64>>,
    /// Transmit SNR (linear).
    #[arg(long)]
    pub rho: Option<f64>,
    /// Fixed coefficient vector; omit to search for the best one.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a: Option<Vec<i64>>,
    /// Coefficient search: svp or box.
    #[arg(long)]
    pub strategy: Option<String>,
    /// Box half-width for the box strategy.
    #[arg(long)]
    pub b: Option<i64>,
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Number of sources.
    #[arg(long)]
    pub k: Option<usize>,
    /// SNR grid in dB (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub rho_db: Option<Vec<f64>>,
    /// Channel draws per SNR point.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Relay coefficient strategy: svp or candidates.
    #[arg(long)]
    pub strategy: Option<String>,
    /// Box bound for the candidate-set strategy.
    #[arg(long)]
    pub b: Option<i64>,
}

pub fn rates(args: &RatesArgs, cfg: &FileConfig, run: &RunSettings) -> Result<String> {
    cfg.allow(&["h", "rho", "a", "strategy", "b"])?;
    run.format.json_only("cf rates")?;
    let h = require(pick(args.h.clone(), cfg.get_f64_list("h")?), "h")?;
    let rho = require(pick(args.rho, cfg.get_f64("rho")?), "rho")?;
    let a = pick(args.a.clone(), cfg.get_i64_list("a")?);
    let strategy = pick(args.strategy.clone(), cfg.get_string("strategy")?);
    let b = pick(args.b, cfg.get_i64("b")?);

    let (config, result) = match a {
        Some(a) => {
            let alpha = optimal_alpha(&h, &a, rho)?;
            let rate = computation_rate(&h, &a, rho)?;
            let rate_at_alpha = alpha_rate(&h, &a, rho, alpha)?;
            (
                json!({ "h": h, "rho": rho, "a": a }),
                json!({
                    "h": h,
                    "rho": rho,
                    "a": a,
                    "alpha": alpha,
                    "rate": rate,
                    "rate_at_alpha": rate_at_alpha,
                }),
            )
        }
        None => {
            let (strat, strat_name) = match strategy.as_deref().unwrap_or("svp") {
                "svp" => (Strategy::Svp, "svp".to_string()),
                "box" => {
                    let b = b.unwrap_or(8);
                    (Strategy::Box(b), format!("box({b})"))
                }
                other => {
                    return Err(CliError::Config(format!(
                        "unknown strategy `{other}`, expected svp or box"
                    )))
                }
            };
            let choice = best_coefficients(&h, rho, strat)?;
            (
                json!({ "h": h, "rho": rho, "strategy": strat_name }),
                json!({
                    "h": h,
                    "rho": rho,
                    "strategy": strat_name,
                    "choice": serde_json::to_value(&choice).expect("choice serializes"),
                }),
            )
        }
    };
    Ok(Envelope::new("cf rates", run.seed, config, result).render())
}

pub fn simulate(args: &SimulateArgs, cfg: &FileConfig, run: &RunSettings) -> Result<String> {
    cfg.allow(&["k", "rho_db", "trials", "strategy", "b"])?;
    let k = require(pick(args.k, cfg.get_usize("k")?), "k")?;
    let rho_db = require(pick(args.rho_db.clone(), cfg.get_f64_list("rho_db")?), "rho_db")?;
    let trials = require(pick(args.trials, cfg.get_u64("trials")?), "trials")?;
    let strategy = require(pick(args.strategy.clone(), cfg.get_string("strategy")?), "strategy")?;
    let b = pick(args.b, cfg.get_i64("b")?);

    let strat = match strategy.as_str() {
        "svp" => RelayStrategy::Svp,
        "candidates" | "candidate-sets" | "candidate_sets" => {
            RelayStrategy::CandidateSets(b.unwrap_or(1))
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown strategy `{other}`, expected svp or candidates"
            )))
        }
    };
    let report = singularity_probability(k, &rho_db, trials, run.seed, strat)?;
    Ok(match run.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    })
}
