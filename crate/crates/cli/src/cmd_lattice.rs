//! Lattice-level commands: catalog info, theta series, flatness factor,
//! and nested code construction.

use crate::config::{pick, require, FileConfig, RunSettings};
use crate::error::Result;
use crate::inputs::{catalog, catalog_label};
use crate::output::{Envelope, Format};
use clap::{Args, ValueEnum};
use latticeforge_core::theta::flatness_factor_capped;
use latticeforge_core::{
    normalized_second_moment, theta_approximation, theta_closed_form, theta_truncated,
    CatalogLattice, NestedCodePair,
};
use serde_json::{json, Value};

/// Absolute tail bound for enumerated theta and flatness evaluations.
const TAIL_TOL: f64 = 1e-10;

#[derive(Args)]
pub struct InfoArgs {
    /// Catalog lattice: Zn, Dn, A2, E8, K12, Leech24.
    #[arg(long)]
    pub name: Option<String>,
    /// Dimension for the Zn and Dn families.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ThetaMode {
    /// Closed form from the catalog identities.
    Closed,
    /// Tail-bounded shell enumeration.
    Enumerated,
    /// Two-term approximation with its residual.
    Approx,
    /// All of the above.
    Both,
}

#[derive(Args)]
pub struct ThetaArgs {
    /// Catalog lattice: Zn, Dn, A2, E8, K12, Leech24.
    #[arg(long)]
    pub name: Option<String>,
    /// Dimension for the Zn and Dn families.
    #[arg(long)]
    pub n: Option<usize>,
    /// Nome, 0 < q < 1.
    #[arg(long)]
    pub q: Option<f64>,
    /// Which evaluations to report.
    #[arg(long, value_enum)]
    pub mode: Option<ThetaMode>,
}

#[derive(Args)]
pub struct FlatnessArgs {
    /// Catalog lattice: Zn, Dn, A2, E8, K12, Leech24.
    #[arg(long)]
    pub name: Option<String>,
    /// Dimension for the Zn and Dn families.
    #[arg(long)]
    pub n: Option<usize>,
    /// Gaussian variance grid (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub sigma2: Option<Vec<f64>>,
}

#[derive(Args)]
pub struct NestedArgs {
    /// Catalog lattice for the fine code: Zn, Dn, A2, E8, K12, Leech24.
    #[arg(long)]
    pub name: Option<String>,
    /// Dimension for the Zn and Dn families.
    #[arg(long)]
    pub n: Option<usize>,
    /// Integer sublattice transform as a JSON matrix, e.g. '[[4,0],[0,4]]'.
    #[arg(long)]
    pub transform: Option<String>,
    /// Sample count for the coarse lattice's normalized second moment.
    #[arg(long)]
    pub nsm_samples: Option<u64>,
}

fn resolve_catalog(
    name: &Option<String>,
    n: Option<usize>,
    cfg: &FileConfig,
) -> Result<CatalogLattice> {
    let name = require(pick(name.clone(), cfg.get_string("name")?), "name")?;
    let n = pick(n, cfg.get_usize("n")?);
    catalog(&name, n)
}

pub fn info(args: &InfoArgs, cfg: &FileConfig, run: &RunSettings) -> Result<String> {
    cfg.allow(&["name", "n"])?;
    run.format.json_only("lattice info")?;
    let cat = resolve_catalog(&args.name, args.n, cfg)?;
    let label = catalog_label(cat);
    let result = json!({
        "name": label,
        "dim": cat.dim(),
        "lambda1": cat.minimum(),
        "volume": cat.volume(),
        "kissing": cat.kissing_number(),
    });
    Ok(Envelope::new("lattice info", run.seed, json!({ "name": label }), result).render())
}

pub fn theta(args: &ThetaArgs, cfg: &FileConfig, run: &RunSettings) -> Result<String> {
    cfg.allow(&["name", "n", "q", "mode"])?;
    run.format.json_only("theta")?;
    let cat = resolve_catalog(&args.name, args.n, cfg)?;
    let q = require(pick(args.q, cfg.get_f64("q")?), "q")?;
    let mode = match pick(args.mode, cfg.get_string("mode")?.map(parse_mode).transpose()?) {
        Some(m) => m,
        None => ThetaMode::Both,
    };
    let label = catalog_label(cat);

    let mut result = json!({ "name": label, "q": q });
    let slots = result.as_object_mut().expect("object");
    if matches!(mode, ThetaMode::Closed | ThetaMode::Both) {
        slots.insert("closed".into(), json!(theta_closed_form(cat, q)?));
    }
    if matches!(mode, ThetaMode::Enumerated | ThetaMode::Both) {
        let lat = cat.build()?;
        let tr = theta_truncated(&lat, q, TAIL_TOL, Some(run.cap))?;
        slots.insert(
            "enumerated".into(),
            json!({
                "value": tr.value,
                "r_cutoff": tr.r_cutoff,
                "tail_bound": tr.tail_bound,
                "points": tr.points,
            }),
        );
    }
    if matches!(mode, ThetaMode::Approx | ThetaMode::Both) {
        let lat = cat.build()?;
        let ap = theta_approximation(&lat, q, Some(run.cap))?;
        slots.insert(
            "approximation".into(),
            json!({
                "main_value": ap.main_value,
                "exact_truncated": ap.exact_truncated,
                "residual": ap.residual,
                "relative_residual": ap.residual / ap.exact_truncated,
            }),
        );
    }

    let config = json!({
        "name": label,
        "q": q,
        "mode": mode_name(mode),
        "cap": run.cap,
    });
    Ok(Envelope::new("theta", run.seed, config, result).render())
}

fn parse_mode(name: String) -> Result<ThetaMode> {
    match name.as_str() {
        "closed" => Ok(ThetaMode::Closed),
        "enumerated" => Ok(ThetaMode::Enumerated),
        "approx" => Ok(ThetaMode::Approx),
        "both" => Ok(ThetaMode::Both),
        other => Err(crate::error::CliError::Config(format!(
            "unknown theta mode `{other}`"
        ))),
    }
}

fn mode_name(mode: ThetaMode) -> &'static str {
    match mode {
        ThetaMode::Closed => "closed",
        ThetaMode::Enumerated => "enumerated",
        ThetaMode::Approx => "approx",
        ThetaMode::Both => "both",
    }
}

pub fn flatness(args: &FlatnessArgs, cfg: &FileConfig, run: &RunSettings) -> Result<String> {
    cfg.allow(&["name", "n", "sigma2"])?;
    let cat = resolve_catalog(&args.name, args.n, cfg)?;
    let sigma2 = require(
        pick(args.sigma2.clone(), cfg.get_f64_list("sigma2")?),
        "sigma2",
    )?;
    let label = catalog_label(cat);
    let lat = cat.build()?;
    let mut rows = Vec::with_capacity(sigma2.len());
    for &s in &sigma2 {
        let eps = flatness_factor_capped(&lat, s, TAIL_TOL, Some(run.cap))?;
        rows.push((s, eps));
    }

    if run.format == Format::Csv {
        let mut out = String::from("sigma2,epsilon\n");
        for (s, eps) in &rows {
            out.push_str(&format!("{s},{eps}\n"));
        }
        return Ok(out);
    }
    let result = json!({
        "name": label,
        "rows": rows
            .iter()
            .map(|(s, eps)| json!({ "sigma2": s, "epsilon": eps }))
            .collect::<Vec<Value>>(),
    });
    let config = json!({ "name": label, "sigma2": sigma2, "cap": run.cap });
    Ok(Envelope::new("flatness", run.seed, config, result).render())
}

pub fn nested(args: &NestedArgs, cfg: &FileConfig, run: &RunSettings) -> Result<String> {
    cfg.allow(&["name", "n", "transform", "nsm_samples"])?;
    run.format.json_only("nested")?;
    let cat = resolve_catalog(&args.name, args.n, cfg)?;
    let rows = require(
        pick(
            args.transform
                .as_deref()
                .map(|t| crate::config::rows_from_str(t, "--transform"))
                .transpose()?,
            cfg.get_rows("transform")?,
        ),
        "transform",
    )?;
    let nsm_samples = pick(args.nsm_samples, cfg.get_u64("nsm_samples")?);
    let label = catalog_label(cat);

    let pair = NestedCodePair::new(cat.build()?, &rows)?;
    let leaders = pair.coset_leaders_capped(run.cap)?;
    let mut result = json!({
        "name": label,
        "index": pair.index(),
        "code_rate": pair.code_rate(),
        "leader_count": leaders.len(),
    });
    let slots = result.as_object_mut().expect("object");
    if leaders.len() <= 64 {
        slots.insert(
            "leaders".into(),
            json!(leaders.iter().map(|p| p.coords.clone()).collect::<Vec<_>>()),
        );
    }
    if let Some(samples) = nsm_samples {
        let est = normalized_second_moment(pair.coarse(), samples, run.seed)?;
        slots.insert(
            "nsm".into(),
            json!({ "value": est.value, "std_error": est.std_error, "samples": samples }),
        );
    }

    let config = json!({
        "name": label,
        "transform": rows,
        "nsm_samples": nsm_samples,
        "cap": run.cap,
    });
    Ok(Envelope::new("nested", run.seed, config, result).render())
}
