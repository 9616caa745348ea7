//! Space-time code commands: design-criteria analysis and codeword error
//! simulation.

use crate::config::{pick, require, FileConfig, RunSettings};
use crate::error::Result;
use crate::inputs::build_code;
use crate::output::{Envelope, Format};
use clap::Args;
use latticeforge_channel::monte_carlo_cwer;
use latticeforge_stc::{hr_group_partition, min_determinant, normalized_density, Scan, HR_TOL};
use serde_json::json;

#[derive(Args)]
pub struct AnalyzeArgs {
    /// Code family: alamouti, golden, iterated-alamouti.
    #[arg(long)]
    pub code: Option<String>,
    /// Symbol alphabet (comma separated integers).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alphabet: Option<Vec<i64>>,
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Code family: alamouti, golden, iterated-alamouti.
    #[arg(long)]
    pub code: Option<String>,
    /// Symbol alphabet (comma separated integers).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alphabet: Option<Vec<i64>>,
    /// SNR grid in dB (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub snr_db: Option<Vec<f64>>,
    /// Monte Carlo trials per SNR point.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Receive antennas (defaults to the code's transmit count).
    #[arg(long)]
    pub n_r: Option<usize>,
}

fn resolve_code_args(
    code: &Option<String>,
    alphabet: &Option<Vec<i64>>,
    cfg: &FileConfig,
) -> Result<(String, Option<Vec<i64>>)> {
    let kind = require(pick(code.clone(), cfg.get_string("code")?), "code")?;
    let alphabet = pick(alphabet.clone(), cfg.get_i64_list("alphabet")?);
    Ok((kind, alphabet))
}

pub fn analyze(args: &AnalyzeArgs, cfg: &FileConfig, run: &RunSettings) -> Result<String> {
    cfg.allow(&["code", "alphabet"])?;
    run.format.json_only("stc analyze")?;
    let (kind, alphabet) = resolve_code_args(&args.code, &args.alphabet, cfg)?;
    let code = build_code(&kind, alphabet)?;

    let min_det2 = min_determinant(&code, Scan::Exhaustive)?;
    let (delta, eta) = normalized_density(&code)?;
    let fd = hr_group_partition(&code, HR_TOL);

    let result = json!({
        "label": code.label(),
        "k": code.k(),
        "n_t": code.n_t(),
        "t_len": code.t_len(),
        "alphabet": code.alphabet(),
        "rate_real_spcu": code.rate_real_spcu(),
        "min_det2": min_det2,
        "delta": delta,
        "eta": eta,
        "fd": serde_json::to_value(&fd).expect("report serializes"),
    });
    let config = json!({ "code": kind, "alphabet": code.alphabet() });
    Ok(Envelope::new("stc analyze", run.seed, config, result).render())
}

pub fn simulate(args: &SimulateArgs, cfg: &FileConfig, run: &RunSettings) -> Result<String> {
    cfg.allow(&["code", "alphabet", "snr_db", "trials", "n_r"])?;
    let (kind, alphabet) = resolve_code_args(&args.code, &args.alphabet, cfg)?;
    let code = build_code(&kind, alphabet)?;
    let snr_db = require(pick(args.snr_db.clone(), cfg.get_f64_list("snr_db")?), "snr_db")?;
    let trials = require(pick(args.trials, cfg.get_u64("trials")?), "trials")?;
    let n_r = pick(args.n_r, cfg.get_usize("n_r")?).unwrap_or_else(|| code.n_t());

    let report = monte_carlo_cwer(&code, n_r, &snr_db, trials, run.seed)?;
    Ok(match run.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    })
}
