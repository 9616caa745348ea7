//! Wiretap commands: eavesdropper decoding bound for one coset code and
//! the sublattice comparison table.

use crate::config::{matrix_list_from_str, pick, require, rows_from_str, FileConfig, RunSettings};
use crate::error::Result;
use crate::inputs::build_code;
use crate::output::{Envelope, Format};
use clap::Args;
use latticeforge_wiretap::{
    ecdp_bound, first_coding_gain, wr_sublattice_compare, CompareConfig, WiretapCode,
};
use serde_json::json;

#[derive(Args)]
pub struct BoundArgs {
    /// Code family: alamouti, golden, iterated-alamouti.
    #[arg(long)]
    pub code: Option<String>,
    /// Symbol alphabet (comma separated integers).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alphabet: Option<Vec<i64>>,
    /// Coarse sublattice transform as a JSON matrix.
    #[arg(long)]
    pub transform: Option<String>,
    /// Eavesdropper SNR (linear).
    #[arg(long)]
    pub rho_e: Option<f64>,
    /// Eavesdropper receive antennas.
    #[arg(long)]
    pub n_e: Option<usize>,
    /// Squared-norm radius of the bound's partial sum.
    #[arg(long)]
    pub r_max: Option<f64>,
}

#[derive(Args)]
pub struct CompareArgs {
    /// Code family: alamouti, golden, iterated-alamouti.
    #[arg(long)]
    pub code: Option<String>,
    /// Symbol alphabet (comma separated integers).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alphabet: Option<Vec<i64>>,
    /// Required sublattice index for every candidate.
    #[arg(long)]
    pub index: Option<u64>,
    /// Candidate transforms as a JSON list of integer matrices.
    #[arg(long)]
    pub candidates: Option<String>,
    /// Eavesdropper SNR (linear).
    #[arg(long)]
    pub rho_e: Option<f64>,
    /// Eavesdropper receive antennas.
    #[arg(long)]
    pub n_e: Option<usize>,
    /// Squared-norm radius of the bound's partial sum.
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Eavesdropper noise variance for the flatness draws.
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// Fading draws per candidate.
    #[arg(long)]
    pub draws: Option<u64>,
}

pub fn bound(args: &BoundArgs, cfg: &FileConfig, run: &RunSettings) -> Result<String> {
    cfg.allow(&["code", "alphabet", "transform", "rho_e", "n_e", "r_max"])?;
    run.format.json_only("wiretap bound")?;
    let kind = require(pick(args.code.clone(), cfg.get_string("code")?), "code")?;
    let alphabet = pick(args.alphabet.clone(), cfg.get_i64_list("alphabet")?);
    let rows = require(
        pick(
            args.transform
                .as_deref()
                .map(|t| rows_from_str(t, "--transform"))
                .transpose()?,
            cfg.get_rows("transform")?,
        ),
        "transform",
    )?;
    let rho_e = require(pick(args.rho_e, cfg.get_f64("rho_e")?), "rho_e")?;
    let n_e = pick(args.n_e, cfg.get_usize("n_e")?).unwrap_or(1);
    let r_max = require(pick(args.r_max, cfg.get_f64("r_max")?), "r_max")?;

    let spec = build_code(&kind, alphabet)?;
    let t_len = spec.t_len();
    let code = WiretapCode::new(spec, &rows)?;
    let (delta1, delta1_count) = first_coding_gain(code.pair().coarse())?;
    let report = ecdp_bound(&code, rho_e, n_e, t_len, r_max, run.cap)?;

    let result = json!({
        "label": code.spec().label(),
        "index": code.pair().index(),
        "delta1": delta1,
        "delta1_count": delta1_count,
        "ecdp": serde_json::to_value(&report).expect("report serializes"),
    });
    let config = json!({
        "code": kind,
        "alphabet": code.spec().alphabet(),
        "transform": rows,
        "rho_e": rho_e,
        "n_e": n_e,
        "r_max": r_max,
        "cap": run.cap,
    });
    Ok(Envelope::new("wiretap bound", run.seed, config, result).render())
}

pub fn compare(args: &CompareArgs, cfg: &FileConfig, run: &RunSettings) -> Result<String> {
    cfg.allow(&[
        "code", "alphabet", "index", "candidates", "rho_e", "n_e", "r_max", "sigma2", "draws",
    ])?;
    let kind = require(pick(args.code.clone(), cfg.get_string("code")?), "code")?;
    let alphabet = pick(args.alphabet.clone(), cfg.get_i64_list("alphabet")?);
    let index = require(pick(args.index, cfg.get_u64("index")?), "index")?;
    let candidates = require(
        pick(
            args.candidates
                .as_deref()
                .map(|t| matrix_list_from_str(t, "--candidates"))
                .transpose()?,
            cfg.get_matrix_list("candidates")?,
        ),
        "candidates",
    )?;
    let rho_e = require(pick(args.rho_e, cfg.get_f64("rho_e")?), "rho_e")?;
    let n_e = pick(args.n_e, cfg.get_usize("n_e")?).unwrap_or(1);
    let r_max = require(pick(args.r_max, cfg.get_f64("r_max")?), "r_max")?;
    let sigma_e2 = require(pick(args.sigma2, cfg.get_f64("sigma2")?), "sigma2")?;
    let n_draws = require(pick(args.draws, cfg.get_u64("draws")?), "draws")?;

    let spec = build_code(&kind, alphabet)?;
    let compare_cfg = CompareConfig {
        rho_e,
        n_e,
        r_max,
        cap: run.cap,
        sigma_e2,
        n_draws,
        seed: run.seed,
    };
    let report = wr_sublattice_compare(&spec, index, &candidates, &compare_cfg)?;
    Ok(match run.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    })
}
