//! Theta series, Jacobi closed forms, the main-term approximation, and the
//! flatness factor.
//!
//! Conventions: `q` is a real nome in `[0, 1)`, norms are squared Euclidean
//! lengths, and every truncation carries an analytic tail bound so callers
//! can trust the reported precision.

use std::f64::consts::PI;

use nalgebra::DVector;
use statrs::function::gamma::{gamma, gamma_ur};

use crate::catalog::CatalogLattice;
use crate::enumerate::{Enumerator, VisitFlow};
use crate::error::{LatticeError, Result};
use crate::lattice::Lattice;

/// Which Jacobi theta function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobiTheta {
    /// θ₂(q) = Σ q^{(i+1/2)²}
    Two,
    /// θ₃(q) = Σ q^{i²}
    Three,
    /// θ₄(q) = Σ (−q)^{i²}
    Four,
}

/// Evaluates a Jacobi theta function by direct series summation.
///
/// Terms are added in increasing exponent order until a term drops below
/// 1e−17 of the partial sum.
pub fn jacobi_theta(kind: JacobiTheta, q: f64) -> Result<f64> {
    check_nome(q)?;
    if q == 0.0 {
        return Ok(match kind {
            JacobiTheta::Two => 0.0,
            JacobiTheta::Three | JacobiTheta::Four => 1.0,
        });
    }
    match kind {
        JacobiTheta::Two => {
            let mut sum = 0.0;
            for i in 0..10_000 {
                let e = (i as f64 + 0.5) * (i as f64 + 0.5);
                let term = 2.0 * q.powf(e);
                sum += term;
                if term < 1e-17 * sum {
                    break;
                }
            }
            Ok(sum)
        }
        JacobiTheta::Three | JacobiTheta::Four => {
            let alt = matches!(kind, JacobiTheta::Four);
            let mut sum = 1.0;
            for i in 1..10_000u64 {
                let mut term = 2.0 * q.powf((i * i) as f64);
                if alt && i % 2 == 1 {
                    term = -term;
                }
                sum += term;
                if term.abs() < 1e-17 * sum.abs() {
                    break;
                }
            }
            Ok(sum)
        }
    }
}

/// Evaluates the closed-form theta series of a catalog lattice.
pub fn theta_closed_form(name: CatalogLattice, q: f64) -> Result<f64> {
    check_nome(q)?;
    let t2 = |p: f64| jacobi_theta(JacobiTheta::Two, p);
    let t3 = |p: f64| jacobi_theta(JacobiTheta::Three, p);
    let t4 = |p: f64| jacobi_theta(JacobiTheta::Four, p);
    match name {
        CatalogLattice::Zn(n) => Ok(t3(q)?.powi(n as i32)),
        CatalogLattice::Dn(n) => Ok(0.5 * (t3(q)?.powi(n as i32) + t4(q)?.powi(n as i32))),
        CatalogLattice::A2 => Ok(t2(q)? * t2(q.powi(3))? + t3(q)? * t3(q.powi(3))?),
        CatalogLattice::E8 => Ok(0.5 * (t2(q)?.powi(8) + t3(q)?.powi(8) + t4(q)?.powi(8))),
        CatalogLattice::K12 => {
            let b = t2(q.powi(4))? * t2(q.powi(12))? + t3(q.powi(4))? * t3(q.powi(12))?;
            let p2 = t2(q)? * t2(q.powi(3))?;
            Ok(9.0 / 32.0 * p2.powi(6) + b.powi(6) + 45.0 / 16.0 * p2.powi(4) * b * b)
        }
        CatalogLattice::Leech24 => {
            let e4 = 0.5 * (t2(q)?.powi(8) + t3(q)?.powi(8) + t4(q)?.powi(8));
            let d = t2(q)? * t3(q)? * t4(q)?;
            Ok(e4.powi(3) - 45.0 / 16.0 * d.powi(8))
        }
    }
}

/// Shell-count form of a truncated theta series: sorted `(norm, count)`
/// pairs for all shells with norm at most `r_cutoff`.
#[derive(Debug, Clone)]
pub struct ThetaSeries {
    entries: Vec<(f64, u64)>,
    r_cutoff: f64,
}

impl ThetaSeries {
    /// Enumerates all shells of `lat` up to squared norm `r_cutoff`.
    ///
    /// `cap` bounds the number of enumerated points.
    pub fn from_lattice(lat: &Lattice, r_cutoff: f64, cap: u64) -> Result<Self> {
        if !(r_cutoff >= 0.0) {
            return Err(LatticeError::Domain("negative theta cutoff".into()));
        }
        let en = Enumerator::new(lat)?;
        let mut buckets: std::collections::BTreeMap<i64, (f64, u64)> =
            std::collections::BTreeMap::new();
        let mut seen = 0u64;
        let mut overflow = false;
        en.walk(None, r_cutoff, &mut |_z: &[i64], norm: f64| {
            seen += 1;
            if seen > cap {
                overflow = true;
                return VisitFlow::Abort;
            }
            let key = (norm * 1e9).round() as i64;
            // Snap the stored norm to the quantization grid so shells at
            // integer or rational norms report them exactly.
            let slot = buckets.entry(key).or_insert((key as f64 / 1e9, 0));
            slot.1 += 1;
            VisitFlow::Continue
        })?;
        if overflow {
            return Err(LatticeError::Capacity {
                cap,
                radius: r_cutoff.sqrt(),
            });
        }
        // Coalesce buckets that straddle a quantization boundary.
        let mut entries: Vec<(f64, u64)> = Vec::with_capacity(buckets.len());
        let mut prev_key = i64::MIN;
        for (key, (norm, count)) in buckets {
            match entries.last_mut() {
                Some(last) if key - prev_key <= 2 => {
                    last.1 += count;
                }
                _ => entries.push((norm, count)),
            }
            prev_key = key;
        }
        Ok(ThetaSeries { entries, r_cutoff })
    }

    /// Sorted `(squared norm, shell count)` pairs, starting with `(0, 1)`.
    pub fn entries(&self) -> &[(f64, u64)] {
        &self.entries
    }

    /// Truncation norm used during enumeration.
    pub fn r_cutoff(&self) -> f64 {
        self.r_cutoff
    }

    /// Evaluates the truncated series at nome `q`.
    pub fn evaluate(&self, q: f64) -> Result<f64> {
        check_nome(q)?;
        let mut sum = 0.0;
        for &(r, count) in self.entries.iter().rev() {
            if r == 0.0 {
                sum += count as f64;
            } else {
                sum += count as f64 * q.powf(r);
            }
        }
        Ok(sum)
    }
}

/// Result of a tail-bounded theta evaluation.
#[derive(Debug, Clone, Copy)]
pub struct ThetaTruncation {
    /// Truncated series value.
    pub value: f64,
    /// Squared-norm cutoff that was enumerated.
    pub r_cutoff: f64,
    /// Analytic bound on the discarded tail.
    pub tail_bound: f64,
    /// Number of lattice points summed.
    pub points: u64,
}

/// Upper bound on `Σ_{‖x‖² > r} q^{‖x‖²}` from the annulus volume estimate:
/// shell counts are bounded by the volume ratio of spherical annuli to the
/// fundamental cell, times a safety factor of 4.
pub fn theta_tail_bound(n: usize, volume: f64, q: f64, r: f64) -> f64 {
    let c = -q.ln();
    let s = n as f64 / 2.0;
    // Q(s, 0) = 1; statrs rejects x = 0 outright.
    let upper_reg = if c * r > 0.0 { gamma_ur(s, c * r) } else { 1.0 };
    4.0 * PI.powf(s) * upper_reg / (volume * c.powf(s))
}

/// Smallest cutoff (within about 2 percent) whose tail bound is below `target`.
fn radius_for_tail(n: usize, volume: f64, q: f64, target: f64) -> Result<f64> {
    if !(target > 0.0) {
        return Err(LatticeError::Domain("tail tolerance must be positive".into()));
    }
    if theta_tail_bound(n, volume, q, 0.0) <= target {
        return Ok(0.0);
    }
    let c = -q.ln();
    let mut hi = (n as f64 / 2.0).max(1.0) / c;
    let mut steps = 0;
    while theta_tail_bound(n, volume, q, hi) > target {
        hi *= 2.0;
        steps += 1;
        if steps > 400 {
            return Err(LatticeError::Inconsistent(
                "theta tail bound failed to converge".into(),
            ));
        }
    }
    let mut lo = hi / 2.0;
    while hi - lo > 0.02 * hi {
        let mid = 0.5 * (lo + hi);
        if theta_tail_bound(n, volume, q, mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Evaluates Θ_Λ(q) by shell enumeration out to a cutoff whose analytic tail
/// bound is below `tail_tol`.
///
/// `cap` limits the (estimated, then actual) number of enumerated points;
/// `None` means unlimited.
pub fn theta_truncated(
    lat: &Lattice,
    q: f64,
    tail_tol: f64,
    cap: Option<u64>,
) -> Result<ThetaTruncation> {
    check_nome(q)?;
    if q == 0.0 {
        return Ok(ThetaTruncation {
            value: 1.0,
            r_cutoff: 0.0,
            tail_bound: 0.0,
            points: 1,
        });
    }
    let n = lat.dim();
    let r = radius_for_tail(n, lat.volume(), q, tail_tol)?;
    if let Some(cap) = cap {
        let s = n as f64 / 2.0;
        let est = 4.0 * PI.powf(s) * r.powf(s) / (gamma(s + 1.0) * lat.volume());
        if est > cap as f64 {
            return Err(LatticeError::Capacity {
                cap,
                radius: r.sqrt(),
            });
        }
    }
    let en = Enumerator::new(lat)?;
    let (value, points) = en.weighted_sum(None, r, q)?;
    Ok(ThetaTruncation {
        value,
        r_cutoff: r,
        tail_bound: theta_tail_bound(n, lat.volume(), q, r),
        points,
    })
}

/// Main term and empirical error of the theta approximation theorem.
#[derive(Debug, Clone, Copy)]
pub struct ThetaApproxResult {
    /// The two closed-form terms of the approximation.
    pub main_value: f64,
    /// Tail-bounded enumeration of the exact series.
    pub exact_truncated: f64,
    /// `exact_truncated - main_value`.
    pub residual: f64,
}

/// Main term of the theta approximation: `(1 − q^{λ₁}) + c·λ₁^{n/2+1}·π^{n/2}
/// / (Γ(n/2+1)·vol) · Γ(n/2+1, λ₁c)/(λ₁c)^{n/2+1}` with `c = −ln q`.
///
/// The integral `∫₁^∞ t^{n/2} q^{λ₁ t} dt` is evaluated exactly through the
/// upper incomplete gamma function, no quadrature involved.
pub fn theta_main_term(n: usize, lambda1: f64, volume: f64, q: f64) -> Result<f64> {
    check_nome(q)?;
    if q == 0.0 {
        return Ok(1.0);
    }
    if !(lambda1 > 0.0) || !(volume > 0.0) {
        return Err(LatticeError::Domain(
            "theta main term needs positive minimum and volume".into(),
        ));
    }
    let s = n as f64 / 2.0;
    let c = -q.ln();
    let x = lambda1 * c;
    let integral = gamma(s + 1.0) * gamma_ur(s + 1.0, x) / x.powf(s + 1.0);
    let coeff = c * lambda1.powf(s + 1.0) * PI.powf(s) / (gamma(s + 1.0) * volume);
    Ok(1.0 - q.powf(lambda1) + coeff * integral)
}

/// Evaluates the theta approximation theorem on `lat` and measures its error
/// empirically against the tail-bounded exact series.
pub fn theta_approximation(lat: &Lattice, q: f64, cap: Option<u64>) -> Result<ThetaApproxResult> {
    if !(q > 0.0 && q < 1.0) {
        return Err(LatticeError::Domain(format!(
            "theta approximation needs 0 < q < 1, got {q}"
        )));
    }
    let en = Enumerator::new(lat)?;
    let (_, lambda1) = en.shortest_vector()?;
    let main_value = theta_main_term(lat.dim(), lambda1, lat.volume(), q)?;
    let exact = theta_truncated(lat, q, 1e-10 * main_value.max(1.0), cap)?;
    Ok(ThetaApproxResult {
        main_value,
        exact_truncated: exact.value,
        residual: exact.value - main_value,
    })
}

/// Flatness factor `ε_Λ(σ²) = vol(Λ)/(2πσ²)^{n/2} · Θ_Λ(e^{−1/(2σ²)}) − 1`.
///
/// The theta factor is evaluated with a tail budget tight enough that the
/// truncation error in ε stays below `tail_tol`; tiny negative results in
/// `[−tail_tol, 0)` are clamped to 0.
pub fn flatness_factor(lat: &Lattice, sigma2: f64, tail_tol: f64) -> Result<f64> {
    flatness_factor_capped(lat, sigma2, tail_tol, None)
}

/// [`flatness_factor`] with an enumeration budget.
pub fn flatness_factor_capped(
    lat: &Lattice,
    sigma2: f64,
    tail_tol: f64,
    cap: Option<u64>,
) -> Result<f64> {
    if !(sigma2 > 0.0) {
        return Err(LatticeError::Domain("sigma2 must be positive".into()));
    }
    if !(tail_tol > 0.0) {
        return Err(LatticeError::Domain("tail_tol must be positive".into()));
    }
    let n = lat.dim();
    let q = (-1.0 / (2.0 * sigma2)).exp();
    let scale = lat.volume() / (2.0 * PI * sigma2).powf(n as f64 / 2.0);
    let theta_tol = (tail_tol / scale).min(1e-6);
    let theta = theta_truncated(lat, q, theta_tol, cap)?;
    let eps = scale * theta.value - 1.0;
    if eps >= 0.0 {
        Ok(eps)
    } else if eps >= -tail_tol {
        Ok(0.0)
    } else {
        Err(LatticeError::Inconsistent(format!(
            "flatness factor {eps} below clamp window -{tail_tol}"
        )))
    }
}

/// Gaussian mass of the coset `Λ + y`:
/// `f(Λ+y, σ²) = (2πσ²)^{−n/2} Σ_{x∈Λ} exp(−‖x+y‖²/(2σ²))`,
/// truncated with total tail below `tail_tol`.
pub fn lattice_gaussian_sum(
    lat: &Lattice,
    y: &[f64],
    sigma2: f64,
    tail_tol: f64,
) -> Result<f64> {
    if !(sigma2 > 0.0) {
        return Err(LatticeError::Domain("sigma2 must be positive".into()));
    }
    let n = lat.dim();
    if y.len() != n {
        return Err(LatticeError::Dimension {
            context: "lattice_gaussian_sum shift",
            expected: n,
            got: y.len(),
        });
    }
    let q = (-1.0 / (2.0 * sigma2)).exp();
    let scale = (2.0 * PI * sigma2).powf(-(n as f64) / 2.0);
    if q == 0.0 {
        // Nome underflow: only the nearest coset point contributes at all,
        // so evaluate that single term in log space.
        let target = DVector::from_iterator(n, y.iter().map(|v| -v));
        let nearest = crate::enumerate::closest_vector(lat, &target)?;
        let log_f =
            -(n as f64) / 2.0 * (2.0 * PI * sigma2).ln() - nearest.dist2 / (2.0 * sigma2);
        return Ok(log_f.exp());
    }
    // The annulus tail bound is shift-invariant up to its safety factor.
    let r = radius_for_tail(n, lat.volume(), q, (tail_tol / scale).min(1e-6))?;
    // Enumerate around the coset offset so the cutoff covers the nearest points.
    let center = DVector::from_iterator(n, y.iter().map(|v| -v));
    let en = Enumerator::new(lat)?;
    let (sum, _) = en.weighted_sum(Some(&center), r, q)?;
    Ok(scale * sum)
}

/// Exact shell counts of a catalog lattice's closed-form theta series.
///
/// Returns coefficients of `q^{k/4}` for `k = 0 ..= 4*r_max`, computed by
/// integer power-series arithmetic on the Table of closed forms. All catalog
/// lattices have integral norms, so entries with `k` not divisible by 4
/// are zero.
pub fn theta_series_coefficients(name: CatalogLattice, r_max: u32) -> Result<Vec<i128>> {
    let deg = 4 * r_max as usize;
    let t2 = |s: usize| qser_theta2(s, deg);
    let t3 = |s: usize| qser_theta3(s, deg);
    let t4 = |s: usize| qser_theta4(s, deg);
    let coeffs = match name {
        CatalogLattice::Zn(n) => qser_pow(&t3(1), n, deg),
        CatalogLattice::Dn(n) => {
            let sum = qser_add(&qser_pow(&t3(1), n, deg), &qser_pow(&t4(1), n, deg));
            qser_div_exact(&sum, 2)?
        }
        CatalogLattice::A2 => qser_add(
            &qser_mul(&t2(1), &t2(3), deg),
            &qser_mul(&t3(1), &t3(3), deg),
        ),
        CatalogLattice::E8 => {
            let sum = qser_add(
                &qser_add(&qser_pow(&t2(1), 8, deg), &qser_pow(&t3(1), 8, deg)),
                &qser_pow(&t4(1), 8, deg),
            );
            qser_div_exact(&sum, 2)?
        }
        CatalogLattice::K12 => {
            let b = qser_add(
                &qser_mul(&t2(4), &t2(12), deg),
                &qser_mul(&t3(4), &t3(12), deg),
            );
            let p2 = qser_mul(&t2(1), &t2(3), deg);
            let term1 = qser_div_exact(&qser_scale(&qser_pow(&p2, 6, deg), 9), 32)?;
            let term2 = qser_pow(&b, 6, deg);
            let term3 = qser_div_exact(
                &qser_scale(
                    &qser_mul(&qser_pow(&p2, 4, deg), &qser_pow(&b, 2, deg), deg),
                    45,
                ),
                16,
            )?;
            qser_add(&qser_add(&term1, &term2), &term3)
        }
        CatalogLattice::Leech24 => {
            let sum = qser_add(
                &qser_add(&qser_pow(&t2(1), 8, deg), &qser_pow(&t3(1), 8, deg)),
                &qser_pow(&t4(1), 8, deg),
            );
            let e4 = qser_div_exact(&sum, 2)?;
            let prod = qser_mul(&qser_mul(&t2(1), &t3(1), deg), &t4(1), deg);
            let disc = qser_div_exact(&qser_scale(&qser_pow(&prod, 8, deg), 45), 16)?;
            qser_sub(&qser_pow(&e4, 3, deg), &disc)
        }
    };
    Ok(coeffs)
}

// Formal power series in u = q^{1/4}, truncated at degree `deg`, with exact
// i128 coefficients. Large enough for matched-cutoff shell comparisons.

fn qser_theta2(s: usize, deg: usize) -> Vec<i128> {
    let mut c = vec![0i128; deg + 1];
    let mut i = 0usize;
    loop {
        let e = s * (2 * i + 1) * (2 * i + 1);
        if e > deg {
            break;
        }
        c[e] += 2;
        i += 1;
    }
    c
}

fn qser_theta3(s: usize, deg: usize) -> Vec<i128> {
    let mut c = vec![0i128; deg + 1];
    c[0] = 1;
    let mut i = 1usize;
    loop {
        let e = 4 * s * i * i;
        if e > deg {
            break;
        }
        c[e] += 2;
        i += 1;
    }
    c
}

fn qser_theta4(s: usize, deg: usize) -> Vec<i128> {
    let mut c = vec![0i128; deg + 1];
    c[0] = 1;
    let mut i = 1usize;
    loop {
        let e = 4 * s * i * i;
        if e > deg {
            break;
        }
        c[e] += if i % 2 == 1 { -2 } else { 2 };
        i += 1;
    }
    c
}

fn qser_mul(a: &[i128], b: &[i128], deg: usize) -> Vec<i128> {
    let mut c = vec![0i128; deg + 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if i + j > deg {
                break;
            }
            c[i + j] += ai * bj;
        }
    }
    c
}

fn qser_pow(a: &[i128], k: usize, deg: usize) -> Vec<i128> {
    let mut acc = vec![0i128; deg + 1];
    acc[0] = 1;
    for _ in 0..k {
        acc = qser_mul(&acc, a, deg);
    }
    acc
}

fn qser_add(a: &[i128], b: &[i128]) -> Vec<i128> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn qser_sub(a: &[i128], b: &[i128]) -> Vec<i128> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn qser_scale(a: &[i128], k: i128) -> Vec<i128> {
    a.iter().map(|x| x * k).collect()
}

fn qser_div_exact(a: &[i128], k: i128) -> Result<Vec<i128>> {
    a.iter()
        .map(|x| {
            if x % k == 0 {
                Ok(x / k)
            } else {
                Err(LatticeError::Inconsistent(format!(
                    "series coefficient {x} not divisible by {k}"
                )))
            }
        })
        .collect()
}

fn check_nome(q: f64) -> Result<()> {
    if q >= 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(LatticeError::Domain(format!("nome {q} outside [0, 1)")))
    }
}
