//! Multi-source relay scenarios and the two relay decoders.
//!
//! `K` sources transmit codewords from a chain of nested pairs sharing one
//! coarse (shaping) lattice; relay `m` sees `y = sum_k h_mk x_k + z` with
//! real i.i.d. noise of variance `sigma_n2` per dimension. The lattice
//! decoder scales by the MMSE gain and quantizes to the densest fine lattice
//! that contains the target combination; the exact decoder marginalizes the
//! Gaussian likelihood over every codeword tuple mapping to each combination.

use latticeforge_core::{closest_vector, Lattice, NestedCodePair};
use nalgebra::DVector;

use crate::error::{CfError, Result};
use crate::rate::{best_coefficients, CoefficientChoice, Strategy};

/// Tolerance for recognizing integer entries in basis-change solves.
const INTEGER_TOL: f64 = 1e-9;

/// Likelihood-mass ratio above which an exact decode is reported as flat.
const FLAT_TOL: f64 = 1e-3;

/// Default cap on the product of per-source codebook sizes in [`relay_decode_ml`].
pub const ML_DEFAULT_CAP: u64 = 1_000_000;

/// A compute-and-forward network instance.
///
/// `codes[k]` is source `k`'s nested pair. All pairs must share one coarse
/// lattice, and the fine lattices must form a chain
/// `fine(0) >= fine(1) >= ... >= fine(K-1)` so that any integer combination
/// of codewords lies in the first fine lattice whose coefficient is nonzero.
#[derive(Debug, Clone)]
pub struct CFScenario {
    /// Per-relay real channel vectors, each of length `K`.
    pub h: Vec<Vec<f64>>,
    /// Operating SNR `rho = P / sigma_n2` (linear).
    pub rho: f64,
    /// Per-source nested code pairs, densest fine lattice first.
    pub codes: Vec<NestedCodePair>,
    /// Noise variance per real dimension, `max_k P_k / rho` where `P_k` is
    /// the mean per-dimension power of source `k`'s coset leaders.
    pub sigma_n2: f64,
}

/// Check that `sub` is a sublattice of `sup` by solving for the integer
/// basis-change matrix.
fn is_sublattice_of(sup: &Lattice, sub: &Lattice) -> Result<bool> {
    let n = sup.dim();
    if sub.dim() != n {
        return Ok(false);
    }
    for j in 0..n {
        let col = DVector::from_column_slice(sub.basis().column(j).as_slice());
        let coords = sup.coords_of(&col)?;
        for c in coords.iter() {
            if (c - c.round()).abs() > INTEGER_TOL * (1.0 + c.abs()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl CFScenario {
    /// Validate channels and the nesting chain; derive the noise variance.
    pub fn new(h: Vec<Vec<f64>>, rho: f64, codes: Vec<NestedCodePair>) -> Result<Self> {
        if codes.is_empty() {
            return Err(CfError::Domain("at least one source is required".into()));
        }
        if h.is_empty() {
            return Err(CfError::Domain("at least one relay is required".into()));
        }
        if !(rho.is_finite() && rho > 0.0) {
            return Err(CfError::Domain(format!("snr must be positive, got {rho}")));
        }
        let k = codes.len();
        for (m, hm) in h.iter().enumerate() {
            if hm.len() != k {
                return Err(CfError::Dimension {
                    context: "CFScenario channel row",
                    expected: k,
                    got: h[m].len(),
                });
            }
        }
        // One shared coarse lattice: each later coarse basis must generate
        // the same group as the first (integer basis change both ways).
        let coarse0 = codes[0].coarse();
        for pair in codes.iter().skip(1) {
            if !is_sublattice_of(coarse0, pair.coarse())?
                || !is_sublattice_of(pair.coarse(), coarse0)?
            {
                return Err(CfError::Domain(
                    "all sources must share one coarse lattice".into(),
                ));
            }
        }
        // Fine chain: fine(k+1) inside fine(k).
        for w in codes.windows(2) {
            if !is_sublattice_of(w[0].fine(), w[1].fine())? {
                return Err(CfError::Domain(
                    "fine lattices must form a nested chain, densest first".into(),
                ));
            }
        }
        // Power of the binding source sets the noise scale.
        let n = codes[0].fine().dim();
        let mut p_max: f64 = 0.0;
        for pair in &codes {
            let leaders = pair.coset_leaders()?;
            let p = leaders.iter().map(|l| l.norm).sum::<f64>() / (leaders.len() * n) as f64;
            p_max = p_max.max(p);
        }
        let sigma_n2 = p_max / rho;
        Ok(Self {
            h,
            rho,
            codes,
            sigma_n2,
        })
    }

    /// Number of sources.
    pub fn num_sources(&self) -> usize {
        self.codes.len()
    }

    /// Number of relays.
    pub fn num_relays(&self) -> usize {
        self.h.len()
    }

    /// Ambient dimension of the codes.
    pub fn dim(&self) -> usize {
        self.codes[0].fine().dim()
    }
}

/// Result of a relay decode: the chosen combination and its coset class.
#[derive(Debug, Clone)]
pub struct RelayDecode {
    /// Coefficient selection the relay committed to.
    pub choice: CoefficientChoice,
    /// Decoded lattice point (an estimate of `sum_k a_k x_k`).
    pub lattice_point: DVector<f64>,
    /// The point reduced modulo the coarse lattice: what the relay forwards.
    pub coset: DVector<f64>,
}

/// Index of the densest fine lattice participating in combination `a`:
/// the first source with a nonzero coefficient.
fn densest_index(a: &[i64]) -> Result<usize> {
    a.iter()
        .position(|&ai| ai != 0)
        .ok_or_else(|| CfError::Domain("coefficient vector must be nonzero".into()))
}

/// Scaled lattice decoder at relay `m`: select coefficients, scale the
/// observation by the MMSE gain, and quantize to the densest participating
/// fine lattice.
pub fn relay_decode_sd(scenario: &CFScenario, m: usize, y: &DVector<f64>) -> Result<RelayDecode> {
    if m >= scenario.num_relays() {
        return Err(CfError::Domain(format!(
            "relay index {m} out of range ({} relays)",
            scenario.num_relays()
        )));
    }
    if y.len() != scenario.dim() {
        return Err(CfError::Dimension {
            context: "relay_decode_sd observation",
            expected: scenario.dim(),
            got: y.len(),
        });
    }
    let choice = best_coefficients(&scenario.h[m], scenario.rho, Strategy::Svp)?;
    let k_min = densest_index(&choice.a)?;
    let pair = &scenario.codes[k_min];
    let scaled = y * choice.alpha;
    let nearest = closest_vector(pair.fine(), &scaled)?;
    let coset = pair.mod_coarse(&nearest.vector)?;
    Ok(RelayDecode {
        choice,
        lattice_point: nearest.vector,
        coset,
    })
}

/// One candidate combination value in an exact decode profile.
#[derive(Debug, Clone)]
pub struct MLCandidate {
    /// Coordinates of the combination in the densest participating fine basis.
    pub coords: Vec<i64>,
    /// Unnormalized posterior mass of this combination (scaled so the
    /// largest mass is 1).
    pub mass: f64,
}

/// Result of an exact (marginalizing) relay decode.
#[derive(Debug, Clone)]
pub struct MLDecode {
    /// Coefficient selection the relay committed to.
    pub choice: CoefficientChoice,
    /// Decoded combination point.
    pub lattice_point: DVector<f64>,
    /// The point reduced modulo the coarse lattice.
    pub coset: DVector<f64>,
    /// Candidate combinations sorted by decreasing mass.
    pub profile: Vec<MLCandidate>,
    /// True when the top two masses are within `1e-3` of each other:
    /// the observation barely separates them.
    pub flat: bool,
}

/// Exact decoder at relay `m`: enumerate every tuple of coset leaders,
/// accumulate `exp(-|y - sum_k h_k x_k|^2 / (2 sigma_n2))` per combination
/// value `sum_k a_k x_k`, and return the maximizer.
///
/// The product of codebook sizes must not exceed `cap` (default
/// [`ML_DEFAULT_CAP`]). Masses are rescaled by the smallest exponent so the
/// profile stays finite at high SNR.
pub fn relay_decode_ml(
    scenario: &CFScenario,
    m: usize,
    y: &DVector<f64>,
    cap: Option<u64>,
) -> Result<MLDecode> {
    if m >= scenario.num_relays() {
        return Err(CfError::Domain(format!(
            "relay index {m} out of range ({} relays)",
            scenario.num_relays()
        )));
    }
    if y.len() != scenario.dim() {
        return Err(CfError::Dimension {
            context: "relay_decode_ml observation",
            expected: scenario.dim(),
            got: y.len(),
        });
    }
    let cap = cap.unwrap_or(ML_DEFAULT_CAP);
    let mut product: u64 = 1;
    let mut books = Vec::with_capacity(scenario.num_sources());
    for pair in &scenario.codes {
        let leaders = pair.coset_leaders()?;
        product = product.saturating_mul(leaders.len() as u64);
        if product > cap {
            return Err(CfError::Capacity(format!(
                "codebook tuple count exceeds cap {cap}"
            )));
        }
        books.push(
            leaders
                .into_iter()
                .map(|l| pair.fine().vector(&l.coords))
                .collect::<Vec<_>>(),
        );
    }
    let choice = best_coefficients(&scenario.h[m], scenario.rho, Strategy::Svp)?;
    let k_min = densest_index(&choice.a)?;
    let pair = &scenario.codes[k_min];
    let h = &scenario.h[m];
    let sigma2 = scenario.sigma_n2;
    if !(sigma2.is_finite() && sigma2 > 0.0) {
        return Err(CfError::Domain(format!(
            "noise variance must be positive, got {sigma2}"
        )));
    }

    // Walk all tuples with an odometer; key each combination by its integer
    // coordinates in the densest participating fine basis (exact grouping).
    let k = scenario.num_sources();
    let mut idx = vec![0usize; k];
    let mut entries: Vec<(Vec<i64>, f64)> = Vec::new();
    loop {
        let mut combo = DVector::zeros(scenario.dim());
        let mut faded = DVector::zeros(scenario.dim());
        for (src, &i) in idx.iter().enumerate() {
            let x = &books[src][i];
            combo += x * choice.a[src] as f64;
            faded += x * h[src];
        }
        let d2 = (y - faded).norm_squared();
        let coords_f = pair.fine().coords_of(&combo)?;
        let coords: Vec<i64> = coords_f.iter().map(|c| c.round() as i64).collect();
        entries.push((coords, d2));

        let mut level = 0;
        loop {
            if level == k {
                break;
            }
            idx[level] += 1;
            if idx[level] < books[level].len() {
                break;
            }
            idx[level] = 0;
            level += 1;
        }
        if level == k {
            break;
        }
    }

    // Shift by the smallest distance before exponentiating, then group.
    let d_min = entries
        .iter()
        .map(|(_, d2)| *d2)
        .fold(f64::INFINITY, f64::min);
    let mut grouped: Vec<(Vec<i64>, f64)> = Vec::new();
    for (coords, d2) in entries {
        let mass = (-(d2 - d_min) / (2.0 * sigma2)).exp();
        match grouped.iter_mut().find(|(c, _)| *c == coords) {
            Some((_, acc)) => *acc += mass,
            None => grouped.push((coords, mass)),
        }
    }
    grouped.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("finite masses"));
    let top = grouped[0].1;
    let profile: Vec<MLCandidate> = grouped
        .into_iter()
        .map(|(coords, mass)| MLCandidate {
            coords,
            mass: mass / top,
        })
        .collect();
    let flat = profile.len() > 1 && profile[1].mass > 1.0 - FLAT_TOL;
    let lattice_point = pair.fine().vector(&profile[0].coords);
    let coset = pair.mod_coarse(&lattice_point)?;
    Ok(MLDecode {
        choice,
        lattice_point,
        coset,
        profile,
        flat,
    })
}
