//! Computation rates and integer coefficient selection for a real-valued
//! compute-and-forward relay.
//!
//! A relay observing `y = sum_k h_k x_k + z` at SNR `rho` decodes the integer
//! combination `sum_k a_k x_k`. The achievable rate for a coefficient vector
//! `a` is `R(h, a) = 1/2 log2^+ ( (|a|^2 - rho (h.a)^2 / (1 + rho |h|^2))^{-1} )`,
//! and scaling the observation by the MMSE gain `alpha = rho h.a / (1 + rho |h|^2)`
//! attains it. Selection searches for the `a` minimizing the quadratic form
//! `a^T G a` with `G = I - rho h h^T / (1 + rho |h|^2)`, either exactly
//! (shortest vector of `G`) or over a box.

use latticeforge_core::Enumerator;
use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{CfError, Result};

/// Relative tolerance for grouping quadratic-form values into a tie shell.
const TIE_TOL: f64 = 1e-9;

/// How a relay searches for its integer coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Exact shortest vector of the form `G` (optimal).
    Svp,
    /// Exhaustive scan over the box `[-b, b]^K` minus the origin.
    Box(i64),
}

/// A selected coefficient vector with its MMSE gain and computation rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientChoice {
    /// Integer coefficients, sign-normalized (first nonzero entry positive).
    pub a: Vec<i64>,
    /// MMSE scaling gain for this choice.
    pub alpha: f64,
    /// Computation rate in bits per real channel use.
    pub rate: f64,
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(CfError::Domain(format!("snr must be positive, got {rho}")));
    }
    Ok(())
}

fn check_dims(context: &'static str, h: &[f64], len: usize) -> Result<()> {
    if h.len() != len {
        return Err(CfError::Dimension {
            context,
            expected: h.len(),
            got: len,
        });
    }
    if h.is_empty() {
        return Err(CfError::Domain("channel vector is empty".into()));
    }
    Ok(())
}

fn dot_ha(h: &[f64], a: &[i64]) -> f64 {
    h.iter().zip(a).map(|(hi, ai)| hi * *ai as f64).sum()
}

/// Quadratic form `a^T G a = |a|^2 - rho (h.a)^2 / (1 + rho |h|^2)`.
///
/// Positive for every nonzero integer `a` (Cauchy-Schwarz is strict against
/// the scaled projector), and its reciprocal is the rate argument.
fn form_value(h: &[f64], a: &[i64], rho: f64) -> f64 {
    let na2: f64 = a.iter().map(|ai| (*ai as f64).powi(2)).sum();
    let nh2: f64 = h.iter().map(|hi| hi * hi).sum();
    let ha = dot_ha(h, a);
    na2 - rho * ha * ha / (1.0 + rho * nh2)
}

/// Achievable computation rate for decoding `sum_k a_k x_k` from `h` at SNR `rho`.
///
/// Returns `1/2 log2(1 / (a^T G a))` clamped below at zero. `a` must be a
/// nonzero integer vector of the same length as `h`.
pub fn computation_rate(h: &[f64], a: &[i64], rho: f64) -> Result<f64> {
    check_dims("computation_rate", h, a.len())?;
    check_rho(rho)?;
    if a.iter().all(|&ai| ai == 0) {
        return Err(CfError::Domain(
            "coefficient vector must be nonzero".into(),
        ));
    }
    let q = form_value(h, a, rho);
    if q <= 0.0 {
        return Err(CfError::Inconsistent(format!(
            "quadratic form lost positivity numerically (q = {q})"
        )));
    }
    Ok((-0.5 * q.log2()).max(0.0))
}

/// Rate of the scaled receiver at an explicit gain `alpha`:
/// `1/2 log2^+ ( rho / (alpha^2 + rho |alpha h - a|^2) )`.
///
/// Maximizing over `alpha` recovers [`computation_rate`]; the maximizer is
/// [`optimal_alpha`].
pub fn alpha_rate(h: &[f64], a: &[i64], rho: f64, alpha: f64) -> Result<f64> {
    check_dims("alpha_rate", h, a.len())?;
    check_rho(rho)?;
    let mismatch: f64 = h
        .iter()
        .zip(a)
        .map(|(hi, ai)| (alpha * hi - *ai as f64).powi(2))
        .sum();
    let denom = alpha * alpha + rho * mismatch;
    if denom <= 0.0 {
        return Err(CfError::Domain(
            "alpha = 0 with a = 0 leaves the rate undefined".into(),
        ));
    }
    Ok((0.5 * (rho / denom).log2()).max(0.0))
}

/// MMSE gain `alpha = rho h.a / (1 + rho |h|^2)` maximizing [`alpha_rate`].
pub fn optimal_alpha(h: &[f64], a: &[i64], rho: f64) -> Result<f64> {
    check_dims("optimal_alpha", h, a.len())?;
    check_rho(rho)?;
    let nh2: f64 = h.iter().map(|hi| hi * hi).sum();
    Ok(rho * dot_ha(h, a) / (1.0 + rho * nh2))
}

/// Gram matrix `G = I - rho h h^T / (1 + rho |h|^2)` of the selection form.
fn form_matrix(h: &[f64], rho: f64) -> DMatrix<f64> {
    let k = h.len();
    let nh2: f64 = h.iter().map(|hi| hi * hi).sum();
    let scale = rho / (1.0 + rho * nh2);
    DMatrix::from_fn(k, k, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - scale * h[i] * h[j]
    })
}

/// Sign-normalize in place: flip `a` so its first nonzero entry is positive.
fn normalize_sign(a: &mut [i64]) {
    if let Some(&lead) = a.iter().find(|&&ai| ai != 0) {
        if lead < 0 {
            for ai in a.iter_mut() {
                *ai = -*ai;
            }
        }
    }
}

/// Among candidate vectors, keep those within the tie shell of the minimal
/// form value, sign-normalize, and return the lexicographically greatest.
///
/// `q(a) = q(-a)` exactly, so each sign pair collapses to one candidate; the
/// lex rule then makes the choice deterministic (for two tied unit vectors it
/// prefers the earlier coordinate axis).
fn pick_canonical(mut cands: Vec<Vec<i64>>, h: &[f64], rho: f64) -> Result<(Vec<i64>, f64)> {
    if cands.is_empty() {
        return Err(CfError::Inconsistent(
            "coefficient search produced no candidates".into(),
        ));
    }
    let mut qmin = f64::INFINITY;
    for a in &cands {
        qmin = qmin.min(form_value(h, a, rho));
    }
    let shell = qmin + TIE_TOL * (1.0 + qmin.abs());
    let mut best: Option<Vec<i64>> = None;
    for a in cands.iter_mut() {
        if form_value(h, a, rho) > shell {
            continue;
        }
        normalize_sign(a);
        if best.as_ref().is_none_or(|b| a.as_slice() > b.as_slice()) {
            best = Some(a.clone());
        }
    }
    let a = best.expect("shell contains the minimizer");
    let q = form_value(h, &a, rho);
    Ok((a, q))
}

fn finish_choice(h: &[f64], rho: f64, a: Vec<i64>) -> Result<CoefficientChoice> {
    let alpha = optimal_alpha(h, &a, rho)?;
    let rate = computation_rate(h, &a, rho)?;
    Ok(CoefficientChoice { a, alpha, rate })
}

/// Select the rate-maximizing integer coefficient vector for channel `h` at
/// SNR `rho`.
///
/// `Strategy::Svp` solves the shortest-vector problem of the form `G`
/// exactly; `Strategy::Box(b)` scans `[-b, b]^K`. Ties within a relative
/// shell of `1e-9` are broken by sign normalization then lexicographic
/// maximum, so both strategies agree whenever the true minimizer lies in the
/// box.
pub fn best_coefficients(h: &[f64], rho: f64, strategy: Strategy) -> Result<CoefficientChoice> {
    check_dims("best_coefficients", h, h.len())?;
    check_rho(rho)?;
    let cands = match strategy {
        Strategy::Svp => {
            let en = Enumerator::from_gram(form_matrix(h, rho))?;
            let (_, lambda1) = en.shortest_vector()?;
            let radius = lambda1 + TIE_TOL * (1.0 + lambda1);
            let pts = en.points_within(radius, 1_000_000)?;
            pts.into_iter()
                .filter(|p| p.norm <= radius && p.coords.iter().any(|&c| c != 0))
                .map(|p| p.coords)
                .collect::<Vec<_>>()
        }
        Strategy::Box(b) => {
            if b < 1 {
                return Err(CfError::Domain(format!(
                    "box bound must be at least 1, got {b}"
                )));
            }
            box_scan(h.len(), b, |_| true)
        }
    };
    let (a, _) = pick_canonical(cands, h, rho)?;
    finish_choice(h, rho, a)
}

/// All nonzero integer vectors in `[-b, b]^k` passing `keep`.
fn box_scan(k: usize, b: i64, keep: impl Fn(&[i64]) -> bool) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut a = vec![-b; k];
    loop {
        if a.iter().any(|&ai| ai != 0) && keep(&a) {
            out.push(a.clone());
        }
        let mut level = 0;
        loop {
            if level == k {
                return out;
            }
            a[level] += 1;
            if a[level] <= b {
                break;
            }
            a[level] = -b;
            level += 1;
        }
    }
}

/// Coefficient selection restricted to a relay's parity candidate set
/// (`K = 2` only).
///
/// Relay 1 searches `S1 = { a : a_1 odd, a_2 even }`, relay 2 the mirrored
/// `S2 = { a : a_1 even, a_2 odd }`, both within `|a|_inf <= b`. Any row from
/// `S1` stacked on any row from `S2` has odd determinant, so two relays using
/// opposite sets always hand the destination an invertible system.
pub fn candidate_set_choice(
    h: &[f64],
    rho: f64,
    relay_id: usize,
    b: i64,
) -> Result<CoefficientChoice> {
    if h.len() != 2 {
        return Err(CfError::Dimension {
            context: "candidate_set_choice",
            expected: 2,
            got: h.len(),
        });
    }
    check_rho(rho)?;
    if b < 1 {
        return Err(CfError::Domain(format!(
            "box bound must be at least 1, got {b}"
        )));
    }
    let keep: Box<dyn Fn(&[i64]) -> bool> = match relay_id {
        1 => Box::new(|a: &[i64]| a[0] % 2 != 0 && a[1] % 2 == 0),
        2 => Box::new(|a: &[i64]| a[0] % 2 == 0 && a[1] % 2 != 0),
        other => {
            return Err(CfError::Domain(format!(
                "relay_id must be 1 or 2, got {other}"
            )));
        }
    };
    let cands = box_scan(2, b, keep);
    let (a, _) = pick_canonical(cands, h, rho)?;
    finish_choice(h, rho, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn gcd(a: i64, b: i64) -> i64 {
        let (mut a, mut b) = (a.abs(), b.abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }

    #[test]
    fn rate_reference_values() {
        // Aligned unit channel: q = 1 - 100/101, rate = (1/2) log2(101).
        let r = computation_rate(&[1.0, 0.0], &[1, 0], 100.0).unwrap();
        assert!((r - 0.5 * 101f64.log2()).abs() < 1e-12);
        // Orthogonal coefficients earn nothing.
        let r = computation_rate(&[1.0, 0.0], &[0, 1], 7.0).unwrap();
        assert_eq!(r, 0.0);
        // Oversized coefficients clamp to zero.
        let r = computation_rate(&[0.3, 0.4], &[100, 100], 1.0).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(
            computation_rate(&[1.0, 0.0], &[0, 0], 1.0),
            Err(CfError::Domain(_))
        ));
        assert!(matches!(
            computation_rate(&[1.0], &[1, 0], 1.0),
            Err(CfError::Dimension { .. })
        ));
        assert!(matches!(
            computation_rate(&[1.0], &[1], 0.0),
            Err(CfError::Domain(_))
        ));
        assert!(matches!(
            best_coefficients(&[1.0, 2.0], 5.0, Strategy::Box(0)),
            Err(CfError::Domain(_))
        ));
    }

    #[test]
    fn alpha_closed_form_examples() {
        // h = a: alpha = rho |h|^2 / (1 + rho |h|^2).
        let a = optimal_alpha(&[1.0, 1.0], &[1, 1], 50.0).unwrap();
        assert!((a - 100.0 / 101.0).abs() < 1e-15);
        // Orthogonal: alpha = 0.
        let a = optimal_alpha(&[1.0, 0.0], &[0, 1], 50.0).unwrap();
        assert_eq!(a, 0.0);
    }

    #[test]
    fn alpha_matches_grid_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut done = 0;
        while done < 100 {
            let h: Vec<f64> = (0..2).map(|_| rng.sample(StandardNormal)).collect();
            let a: Vec<i64> = (0..2).map(|_| rng.gen_range(-2..=2)).collect();
            if a.iter().all(|&ai| ai == 0) {
                continue;
            }
            let rho = 10f64.powf(rng.gen_range(-1.0..1.5));
            let alpha = optimal_alpha(&h, &a, rho).unwrap();
            if alpha.abs() > 4.9 {
                continue;
            }
            // Grid argmin of f(alpha) = alpha^2 + rho |alpha h - a|^2 over
            // [-5, 5] in steps of 1e-4 (log2 is monotone, so minimizing f
            // maximizes the rate).
            let f = |al: f64| {
                al * al
                    + rho
                        * h.iter()
                            .zip(&a)
                            .map(|(hi, ai)| (al * hi - *ai as f64).powi(2))
                            .sum::<f64>()
            };
            let mut best = (f(-5.0), -5.0);
            for i in 1..=100_000 {
                let al = -5.0 + i as f64 * 1e-4;
                let v = f(al);
                if v < best.0 {
                    best = (v, al);
                }
            }
            assert!(
                (alpha - best.1).abs() <= 1e-4 + 1e-12,
                "closed form {alpha} vs grid {} (h = {h:?}, a = {a:?}, rho = {rho})",
                best.1
            );
            // At the optimum the alpha-form meets the closed-form rate.
            let r_closed = computation_rate(&h, &a, rho).unwrap();
            let r_alpha = alpha_rate(&h, &a, rho, alpha).unwrap();
            assert!((r_closed - r_alpha).abs() < 1e-12);
            done += 1;
        }
    }

    #[test]
    fn best_coefficients_examples() {
        // Axis-aligned channel picks the matching axis.
        let c = best_coefficients(&[1.0, 0.0], 4.0, Strategy::Svp).unwrap();
        assert_eq!(c.a, vec![1, 0]);
        assert!((c.alpha - 0.8).abs() < 1e-15);
        assert!((c.rate - 0.5 * 5f64.log2()).abs() < 1e-12);
        // Vanishing SNR ties every unit vector; the lex rule picks e1.
        let c = best_coefficients(&[0.6, 0.8], 1e-30, Strategy::Svp).unwrap();
        assert_eq!(c.a, vec![1, 0]);
        let c = best_coefficients(&[0.6, 0.8], 1e-30, Strategy::Box(3)).unwrap();
        assert_eq!(c.a, vec![1, 0]);
    }

    #[test]
    fn svp_matches_the_box_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut done = 0;
        while done < 300 {
            let h: Vec<f64> = (0..2).map(|_| rng.sample(StandardNormal)).collect();
            if h.iter().map(|x| x * x).sum::<f64>() < 0.09 {
                continue;
            }
            let rho = 10f64.powf(rng.gen_range(0.0..2.0));
            let svp = best_coefficients(&h, rho, Strategy::Svp).unwrap();
            let boxed = best_coefficients(&h, rho, Strategy::Box(8)).unwrap();
            assert_eq!(svp.a, boxed.a, "h = {h:?}, rho = {rho}");
            assert_eq!(gcd(svp.a[0], svp.a[1]), 1, "entries must be coprime");
            done += 1;
        }
    }

    #[test]
    fn candidate_sets_respect_parity_and_stay_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(5150);
        for _ in 0..500 {
            let h: Vec<f64> = (0..2).map(|_| rng.sample(StandardNormal)).collect();
            if h[0] == 0.0 || h[1] == 0.0 {
                continue;
            }
            let c1 = candidate_set_choice(&h, 10.0, 1, 8).unwrap();
            let c2 = candidate_set_choice(&h, 10.0, 2, 8).unwrap();
            assert!(c1.a[0] % 2 != 0 && c1.a[1] % 2 == 0);
            assert!(c2.a[0] % 2 == 0 && c2.a[1] % 2 != 0);
            assert!(c1.rate > 0.0 && c2.rate > 0.0);
            // The unconstrained optimum can only be better.
            let svp = best_coefficients(&h, 10.0, Strategy::Svp).unwrap();
            assert!(svp.rate >= c1.rate.max(c2.rate) - 1e-12);
        }
    }

    #[test]
    fn cross_parity_determinants_are_odd() {
        let s1 = box_scan(2, 4, |a| a[0] % 2 != 0 && a[1] % 2 == 0);
        let s2 = box_scan(2, 4, |a| a[0] % 2 == 0 && a[1] % 2 != 0);
        for a in &s1 {
            for b in &s2 {
                let det = a[0] * b[1] - a[1] * b[0];
                assert!(det % 2 != 0);
            }
        }
    }

    #[test]
    fn relay_id_is_validated() {
        assert!(matches!(
            candidate_set_choice(&[1.0, 2.0], 5.0, 3, 8),
            Err(CfError::Domain(_))
        ));
        assert!(matches!(
            candidate_set_choice(&[1.0, 2.0, 3.0], 5.0, 1, 8),
            Err(CfError::Dimension { .. })
        ));
    }
}
