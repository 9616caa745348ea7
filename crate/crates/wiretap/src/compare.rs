//! Sublattice comparison: every index-matched candidate transform gets the
//! full figure-of-merit battery (well-roundedness, first coding gain, ECDP
//! bound, expected flatness) and the table is ranked by ECDP bound.

use latticeforge_core::intmat::det_i128;
use latticeforge_core::is_well_rounded;
use latticeforge_stc::SpaceTimeCodeSpec;
use serde::Serialize;

use crate::code::WiretapCode;
use crate::ecdp::{ecdp_bound, first_coding_gain};
use crate::error::Result;
use crate::flatness::expected_flatness;

/// Evaluation parameters shared by all candidates.
#[derive(Debug, Clone, Serialize)]
pub struct CompareConfig {
    /// Eve SNR for the ECDP bound.
    pub rho_e: f64,
    /// Eve receive antennas (used by both the bound and the fading draws).
    pub n_e: usize,
    /// Squared-norm enumeration radius of the ECDP partial sum.
    pub r_max: f64,
    /// Enumeration cap per candidate.
    pub cap: u64,
    /// Noise variance for the expected flatness factor.
    pub sigma_e2: f64,
    /// Channel draws per candidate.
    pub n_draws: u64,
    /// Base seed for the fading draws.
    pub seed: u64,
}

/// One ranked candidate.
#[derive(Debug, Clone, Serialize)]
pub struct WrCompareRow {
    /// Position of the transform in the input list.
    pub candidate_id: usize,
    pub wr: bool,
    pub delta1: f64,
    pub ecdp: f64,
    pub eflat_mean: f64,
    pub eflat_se: f64,
}

/// A candidate that failed validation, with the reason it was dropped.
#[derive(Debug, Clone, Serialize)]
pub struct RejectedCandidate {
    pub candidate_id: usize,
    pub reason: String,
}

/// Ranked comparison table plus the echo needed to reproduce it.
#[derive(Debug, Clone, Serialize)]
pub struct WrCompareReport {
    pub schema: u32,
    pub version: String,
    pub config: serde_json::Value,
    pub seed: u64,
    /// Accepted candidates, ranked by ECDP bound ascending.
    pub rows: Vec<WrCompareRow>,
    pub rejected: Vec<RejectedCandidate>,
}

impl WrCompareReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// CSV of the ranked rows with columns
    /// `candidate_id,wr,delta1,ecdp,eflat_mean,eflat_se`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("candidate_id,wr,delta1,ecdp,eflat_mean,eflat_se\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.candidate_id, r.wr, r.delta1, r.ecdp, r.eflat_mean, r.eflat_se
            ));
        }
        out
    }
}

/// Compares candidate sublattices of the code's fine lattice. Each transform
/// must be a `k x k` integer matrix with `|det| = index`; failing candidates
/// are reported as rejected rather than aborting the comparison.
pub fn wr_sublattice_compare(
    spec: &SpaceTimeCodeSpec,
    index: u64,
    candidates: &[Vec<Vec<i64>>],
    cfg: &CompareConfig,
) -> Result<WrCompareReport> {
    let k = spec.k();
    let mut rows = Vec::new();
    let mut rejected = Vec::new();
    for (candidate_id, cand) in candidates.iter().enumerate() {
        if cand.len() != k || cand.iter().any(|row| row.len() != k) {
            rejected.push(RejectedCandidate {
                candidate_id,
                reason: format!("transform must be {k} x {k}"),
            });
            continue;
        }
        let wide: Vec<Vec<i128>> = cand
            .iter()
            .map(|row| row.iter().map(|&v| v as i128).collect())
            .collect();
        let det = det_i128(&wide);
        if det == 0 {
            rejected.push(RejectedCandidate {
                candidate_id,
                reason: "transform is singular".into(),
            });
            continue;
        }
        if det.unsigned_abs() != index as u128 {
            rejected.push(RejectedCandidate {
                candidate_id,
                reason: format!("determinant {det} does not match index {index}"),
            });
            continue;
        }
        let code = match WiretapCode::new(spec.clone(), cand) {
            Ok(code) => code,
            Err(e) => {
                rejected.push(RejectedCandidate {
                    candidate_id,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let wr = is_well_rounded(code.pair().coarse())?;
        let (delta1, _) = first_coding_gain(code.pair().coarse())?;
        let ecdp = ecdp_bound(&code, cfg.rho_e, cfg.n_e, spec.t_len(), cfg.r_max, cfg.cap)?.value;
        let eflat = expected_flatness(&code, cfg.sigma_e2, cfg.n_draws, cfg.seed, cfg.n_e)?;
        rows.push(WrCompareRow {
            candidate_id,
            wr,
            delta1,
            ecdp,
            eflat_mean: eflat.mean,
            eflat_se: eflat.std_error,
        });
    }
    rows.sort_by(|a, b| {
        a.ecdp
            .total_cmp(&b.ecdp)
            .then(a.candidate_id.cmp(&b.candidate_id))
    });
    let config = serde_json::json!({
        "op": "wr_sublattice_compare",
        "code": spec.label(),
        "index": index,
        "candidates": candidates,
        "rho_e": cfg.rho_e,
        "n_e": cfg.n_e,
        "r_max": cfg.r_max,
        "cap": cfg.cap,
        "sigma_e2": cfg.sigma_e2,
        "n_draws": cfg.n_draws,
    });
    Ok(WrCompareReport {
        schema: 1,
        version: env!("CARGO_PKG_VERSION").to_string(),
        config,
        seed: cfg.seed,
        rows,
        rejected,
    })
}
