//! Nested (Voronoi) lattice codes: coset leaders, mod-Λ reduction, rate,
//! and the quantization goodness figures of merit.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::enumerate::{successive_minima, Enumerator, LatticePoint, DEFAULT_CAP};
use crate::error::{LatticeError, Result};
use crate::intmat;
use crate::lattice::{IntegerSublattice, Lattice};

/// Norm slack for treating two coset representatives as tied.
const TIE_TOL: f64 = 1e-9;

/// A pair of nested lattices Λ_C ⊆ Λ_F with Λ_C = Λ_F · G.
#[derive(Debug, Clone)]
pub struct NestedCodePair {
    sub: IntegerSublattice,
    /// Column Hermite form of G, for canonical residues of Λ_F/Λ_C.
    hnf: Vec<Vec<i128>>,
}

impl NestedCodePair {
    /// Builds the pair from the fine lattice and the integer transform G
    /// (rows), so the coarse basis is `fine.basis() * G`.
    pub fn new(fine: Lattice, transform: &[Vec<i64>]) -> Result<Self> {
        let n = fine.dim();
        let sub = fine.sublattice(transform)?;
        let cols: Vec<Vec<i128>> = (0..n)
            .map(|j| (0..n).map(|i| transform[i][j] as i128).collect())
            .collect();
        let hnf = intmat::column_hnf(n, &cols)
            .ok_or(LatticeError::SingularSublattice)?;
        Ok(NestedCodePair { sub, hnf })
    }

    pub fn fine(&self) -> &Lattice {
        self.sub.parent()
    }

    pub fn coarse(&self) -> &Lattice {
        self.sub.child()
    }

    /// Nesting index |Λ_F/Λ_C| = |det G|.
    pub fn index(&self) -> u64 {
        self.sub.index()
    }

    /// Canonical residue of a fine-basis coordinate vector modulo G.
    pub fn residue(&self, coords: &[i64]) -> Vec<i128> {
        let z: Vec<i128> = coords.iter().map(|&v| v as i128).collect();
        intmat::hnf_residue(&self.hnf, &z)
    }

    /// Code rate in bits per dimension: log2(index)/n.
    pub fn code_rate(&self) -> f64 {
        (self.index() as f64).log2() / self.fine().dim() as f64
    }

    /// The canonical representative of every coset of Λ_C in Λ_F: the image
    /// of the coset under [`NestedCodePair::mod_coarse`], which is its
    /// minimum-norm member with Voronoi-boundary ties broken by the
    /// closest-vector rule.
    ///
    /// Exactly `index` points, sorted by (norm, coordinates). The search
    /// radius starts at a covering-radius estimate and grows until every
    /// residue class has a witness, so the result is exact.
    pub fn coset_leaders(&self) -> Result<Vec<LatticePoint>> {
        self.coset_leaders_capped(DEFAULT_CAP)
    }

    /// [`NestedCodePair::coset_leaders`] with an explicit enumeration cap.
    pub fn coset_leaders_capped(&self, cap: u64) -> Result<Vec<LatticePoint>> {
        let index = self.index();
        if index > cap {
            return Err(LatticeError::Capacity {
                cap,
                radius: f64::NAN,
            });
        }
        let profile = successive_minima(self.coarse())?;
        // Covering-radius estimate mu^2 <= (1/4) sum lambda_i, padded; the
        // exact-count check below makes this a starting point, not a proof.
        let mut radius = 0.26 * profile.minima.iter().sum::<f64>() + TIE_TOL;
        let en_fine = Enumerator::new(self.fine())?;
        let en_coarse = Enumerator::new(self.coarse())?;
        for _ in 0..40 {
            let pts = en_fine.points_within(radius, cap)?;
            // One witness per residue class; pts arrive sorted by (norm, lex).
            let mut reps: std::collections::BTreeMap<Vec<i128>, LatticePoint> =
                std::collections::BTreeMap::new();
            for p in pts {
                let key = self.residue(&p.coords);
                reps.entry(key).or_insert(p);
            }
            if reps.len() as u64 == index {
                let mut leaders = Vec::with_capacity(reps.len());
                for rep in reps.into_values() {
                    // Canonicalize exactly like mod_coarse does.
                    let v = self.fine().vector(&rep.coords);
                    let q = en_coarse.closest(&v)?;
                    let shift = self.sub.child_coords_to_parent(&q.coords);
                    let coords: Vec<i64> = rep
                        .coords
                        .iter()
                        .zip(&shift)
                        .map(|(&a, &b)| a - b)
                        .collect();
                    leaders.push(LatticePoint {
                        coords,
                        norm: q.dist2,
                    });
                }
                leaders.sort_by(|a, b| {
                    a.norm
                        .partial_cmp(&b.norm)
                        .unwrap()
                        .then_with(|| a.coords.cmp(&b.coords))
                });
                return Ok(leaders);
            }
            radius *= 2.0;
        }
        Err(LatticeError::Inconsistent(
            "coset leader search failed to cover every residue class".into(),
        ))
    }

    /// Reduction into the coarse Voronoi cell: `x - Q_{Λ_C}(x)`.
    ///
    /// Boundary ties inherit the closest-vector rule (lexicographically
    /// smallest coarse coordinates), which makes the map idempotent and
    /// constant on cosets of Λ_C.
    pub fn mod_coarse(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let q = crate::enumerate::closest_vector(self.coarse(), x)?;
        Ok(x - q.vector)
    }

    /// Serializable codebook: bases, transform, and all coset leaders.
    pub fn codebook(&self) -> Result<CodebookExport> {
        let leaders = self.coset_leaders()?;
        let fine = self.fine();
        Ok(CodebookExport {
            n: fine.dim(),
            index: self.index(),
            rate_bits_per_dim: self.code_rate(),
            fine_basis: matrix_rows(fine),
            coarse_basis: matrix_rows(self.coarse()),
            transform: self.sub.transform().to_vec(),
            leader_coords: leaders.iter().map(|l| l.coords.clone()).collect(),
            leaders: leaders
                .iter()
                .map(|l| fine.vector(&l.coords).iter().copied().collect())
                .collect(),
        })
    }
}

/// JSON-facing snapshot of a nested code.
#[derive(Debug, Clone, Serialize)]
pub struct CodebookExport {
    pub n: usize,
    pub index: u64,
    pub rate_bits_per_dim: f64,
    pub fine_basis: Vec<Vec<f64>>,
    pub coarse_basis: Vec<Vec<f64>>,
    pub transform: Vec<Vec<i64>>,
    pub leader_coords: Vec<Vec<i64>>,
    pub leaders: Vec<Vec<f64>>,
}

fn matrix_rows(lat: &Lattice) -> Vec<Vec<f64>> {
    lat.basis()
        .row_iter()
        .map(|r| r.iter().copied().collect())
        .collect()
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

/// Normalized second moment `G(Λ) = E‖t mod Λ‖² / (n · vol^{2/n})` for `t`
/// uniform over a fundamental cell.
///
/// Samples the fundamental parallelotope exactly uniformly and folds into
/// the Voronoi cell by closest-vector reduction. Each sample uses its own
/// derived RNG stream, so the result depends only on `(seed, samples)`.
pub fn normalized_second_moment(lat: &Lattice, samples: u64, seed: u64) -> Result<Estimate> {
    if samples < 1_000 {
        return Err(LatticeError::Domain(
            "normalized_second_moment needs at least 1000 samples".into(),
        ));
    }
    let n = lat.dim();
    let en = Enumerator::new(lat)?;
    let scale = 1.0 / (n as f64 * lat.volume().powf(2.0 / n as f64));
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    let base = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let mut rng = base.clone();
        rng.set_stream(i);
        let u = DVector::from_iterator(n, (0..n).map(|_| rng.gen::<f64>()));
        let t = lat.basis() * u;
        let err = &t - en.closest(&t)?.vector;
        let x = err.norm_squared() * scale;
        sum += x;
        sum_sq += x * x;
    }
    let mean = sum / samples as f64;
    let var = (sum_sq / samples as f64 - mean * mean).max(0.0);
    Ok(Estimate {
        value: mean,
        std_error: (var / samples as f64).sqrt(),
    })
}

/// Volume-to-noise ratio `vol^{2/n} / σ²(ε)`, where `σ²(ε)` makes the
/// probability that white Gaussian noise escapes the Voronoi cell equal `ε`.
///
/// Uses common random numbers: one fixed set of unit-normal draws is shared
/// by every bisection step, so the empirical error probability is monotone
/// in σ and the bisection is exact for the sampled noise.
pub fn volume_to_noise_ratio(
    lat: &Lattice,
    epsilon: f64,
    trials: u64,
    seed: u64,
) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(LatticeError::Domain(format!(
            "epsilon {epsilon} outside (0,1)"
        )));
    }
    if trials < 1_000 {
        return Err(LatticeError::Domain(
            "volume_to_noise_ratio needs at least 1000 trials".into(),
        ));
    }
    let n = lat.dim();
    let en = Enumerator::new(lat)?;
    let base = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<DVector<f64>> = (0..trials)
        .map(|i| {
            let mut rng = base.clone();
            rng.set_stream(i);
            DVector::from_iterator(
                n,
                (0..n).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal)),
            )
        })
        .collect();
    let p_err = |sigma: f64| -> Result<f64> {
        let mut errors = 0u64;
        for z in &draws {
            let decoded = en.closest(&(z * sigma))?;
            if decoded.coords.iter().any(|&c| c != 0) {
                errors += 1;
            }
        }
        Ok(errors as f64 / trials as f64)
    };
    // Bracket sigma: P is nondecreasing in sigma sample-by-sample.
    let mut lo = lat.volume().powf(1.0 / n as f64);
    let mut hi = lo;
    let mut steps = 0;
    while p_err(lo)? >= epsilon {
        lo /= 2.0;
        steps += 1;
        if steps > 60 {
            return Err(LatticeError::Domain(
                "volume_to_noise_ratio could not bracket epsilon from below".into(),
            ));
        }
    }
    steps = 0;
    while p_err(hi)? < epsilon {
        hi *= 2.0;
        steps += 1;
        if steps > 60 {
            return Err(LatticeError::Domain(
                "volume_to_noise_ratio could not bracket epsilon from above".into(),
            ));
        }
    }
    while hi - lo > 1e-9 * hi {
        let mid = 0.5 * (lo + hi);
        if p_err(mid)? < epsilon {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lat.volume().powf(2.0 / n as f64) / (hi * hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::CatalogLattice;

    fn z2_pair(transform: &[[i64; 2]; 2]) -> NestedCodePair {
        let fine = CatalogLattice::Zn(2).build().unwrap();
        let rows: Vec<Vec<i64>> = transform.iter().map(|r| r.to_vec()).collect();
        NestedCodePair::new(fine, &rows).unwrap()
    }

    #[test]
    fn z2_doubling_leaders() {
        let pair = z2_pair(&[[2, 0], [0, 2]]);
        assert_eq!(pair.index(), 4);
        let leaders = pair.coset_leaders().unwrap();
        let coords: Vec<Vec<i64>> = leaders.iter().map(|l| l.coords.clone()).collect();
        assert_eq!(coords, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn a2_index_sixteen() {
        let fine = CatalogLattice::A2.build().unwrap();
        let pair = NestedCodePair::new(fine, &[vec![4, 0], vec![0, 4]]).unwrap();
        assert_eq!(pair.index(), 16);
        let leaders = pair.coset_leaders().unwrap();
        assert_eq!(leaders.len(), 16);
        assert!((pair.code_rate() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn unimodular_gives_single_leader() {
        let pair = z2_pair(&[[1, 1], [0, 1]]);
        assert_eq!(pair.index(), 1);
        let leaders = pair.coset_leaders().unwrap();
        assert_eq!(leaders.len(), 1);
        assert_eq!(leaders[0].coords, vec![0, 0]);
        assert!((pair.code_rate() - 0.0).abs() < 1e-12);
    }

    #[test]
    fn leaders_exhaust_residues_and_sit_in_the_cell() {
        let pair = z2_pair(&[[2, 1], [0, 3]]);
        assert_eq!(pair.index(), 6);
        let leaders = pair.coset_leaders().unwrap();
        assert_eq!(leaders.len(), 6);
        let mut residues: Vec<Vec<i128>> =
            leaders.iter().map(|l| pair.residue(&l.coords)).collect();
        residues.sort();
        residues.dedup();
        assert_eq!(residues.len(), 6, "pairwise non-congruent");
        for l in &leaders {
            let v = pair.fine().vector(&l.coords);
            let back = pair.mod_coarse(&v).unwrap();
            assert!((&back - &v).norm() < 1e-9, "leader moved by mod_coarse");
        }
    }

    #[test]
    fn mod_coarse_matches_cvp_oracle() {
        let pair = z2_pair(&[[2, 0], [0, 2]]);
        let x = DVector::from_vec(vec![3.0, 1.0]);
        let y = pair.mod_coarse(&x).unwrap();
        // Exhaustive check: the residual is as short as the nearest coarse
        // point allows, and the subtracted part x - y lies in the sublattice.
        let best = (-4..=4)
            .flat_map(|a| (-4..=4).map(move |b| (a, b)))
            .map(|(a, b)| {
                let c = DVector::from_vec(vec![2.0 * a as f64, 2.0 * b as f64]);
                (&x - &c).norm_squared()
            })
            .fold(f64::MAX, f64::min);
        assert!((y.norm_squared() - best).abs() < 1e-9, "result outside the cell");
        let diff = &x - &y;
        for entry in diff.iter() {
            let half = entry / 2.0;
            assert!((half - half.round()).abs() < 1e-9, "x - y not in 2Z^2");
        }
    }

    #[test]
    fn mod_coarse_idempotent_and_coset_constant() {
        let pair = z2_pair(&[[2, 1], [0, 3]]);
        for (a, b) in [(0.3, -1.7), (2.9, 4.1), (-3.5, 0.5), (1.0, 1.0)] {
            let x = DVector::from_vec(vec![a, b]);
            let once = pair.mod_coarse(&x).unwrap();
            let twice = pair.mod_coarse(&once).unwrap();
            assert!((&once - &twice).norm() < 1e-9, "not idempotent at ({a},{b})");
            for shift in [[2.0, 0.0], [1.0, 3.0], [-3.0, 3.0]] {
                let c = DVector::from_vec(shift.to_vec());
                let shifted = pair.mod_coarse(&(&x + &c)).unwrap();
                assert!(
                    (&shifted - &once).norm() < 1e-9,
                    "not coset-constant at ({a},{b})"
                );
            }
        }
    }

    #[test]
    fn coarse_points_reduce_to_zero() {
        let pair = z2_pair(&[[3, 0], [0, 3]]);
        let x = pair.coarse().vector(&[2, -1]);
        let y = pair.mod_coarse(&x).unwrap();
        assert!(y.norm() < 1e-9);
    }

    #[test]
    fn rate_equals_volume_form() {
        for t in [[[2, 1], [0, 3]], [[4, 0], [0, 4]], [[1, 0], [0, 5]]] {
            let pair = z2_pair(&t);
            let vol_form = (pair.coarse().volume() / pair.fine().volume()).log2() / 2.0;
            assert!((pair.code_rate() - vol_form).abs() < 1e-12);
        }
    }

    #[test]
    fn scalar_rate_example() {
        let fine = CatalogLattice::Zn(1).build().unwrap();
        let pair = NestedCodePair::new(fine, &[vec![8]]).unwrap();
        assert!((pair.code_rate() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn nsm_of_integers_is_one_twelfth() {
        let lat = CatalogLattice::Zn(1).build().unwrap();
        let est = normalized_second_moment(&lat, 20_000, 7).unwrap();
        assert!(
            (est.value - 1.0 / 12.0).abs() < 3.0 * est.std_error,
            "NSM {} +- {}",
            est.value,
            est.std_error
        );
        let lat3 = CatalogLattice::Zn(3).build().unwrap();
        let est3 = normalized_second_moment(&lat3, 20_000, 11).unwrap();
        assert!((est3.value - 1.0 / 12.0).abs() < 3.0 * est3.std_error);
    }

    #[test]
    fn hexagonal_beats_square_quantization() {
        let a2 = CatalogLattice::A2.build().unwrap();
        let est = normalized_second_moment(&a2, 40_000, 3).unwrap();
        // Exact hexagonal NSM is 5/(36 sqrt(3)) = 0.080188.
        assert!(est.value < 1.0 / 12.0 - 3.0 * est.std_error);
        assert!((est.value - 0.080188).abs() < 4.0 * est.std_error + 1e-3);
    }

    #[test]
    fn nsm_requires_sample_floor() {
        let lat = CatalogLattice::Zn(1).build().unwrap();
        assert!(normalized_second_moment(&lat, 10, 1).is_err());
    }

    #[test]
    fn vnr_scalar_half_error_point() {
        let lat = CatalogLattice::Zn(1).build().unwrap();
        let vnr = volume_to_noise_ratio(&lat, 0.5, 20_000, 5).unwrap();
        // sigma solves P(|N(0,sigma^2)| > 1/2) = 1/2, i.e. sigma = 0.5/0.67449.
        let oracle = (0.674_489_750_196_081_7f64 / 0.5).powi(2);
        assert!(
            (vnr - oracle).abs() < 0.05 * oracle,
            "VNR {vnr} vs oracle {oracle}"
        );
    }

    #[test]
    fn vnr_monotone_in_epsilon() {
        let lat = CatalogLattice::Zn(2).build().unwrap();
        let strict = volume_to_noise_ratio(&lat, 0.05, 4_000, 9).unwrap();
        let loose = volume_to_noise_ratio(&lat, 0.5, 4_000, 9).unwrap();
        assert!(strict > loose);
    }

    #[test]
    fn vnr_product_cell_consistency() {
        // Z^2 cell is the product of two scalar cells, so the scalar quantile
        // with per-dimension error 1-sqrt(1-eps) gives the same sigma.
        let lat2 = CatalogLattice::Zn(2).build().unwrap();
        let eps = 0.1f64;
        let vnr2 = volume_to_noise_ratio(&lat2, eps, 30_000, 13).unwrap();
        let p1 = 1.0 - (1.0 - eps).sqrt();
        // Scalar threshold: P(|N(0,1)| > 0.5/sigma) = erfc(0.5/(sigma*sqrt(2))) = p1.
        let sigma = 0.5 / (statrs::function::erf::erfc_inv(p1) * std::f64::consts::SQRT_2);
        let oracle = 1.0 / (sigma * sigma);
        assert!(
            (vnr2 - oracle).abs() < 0.07 * oracle,
            "VNR {vnr2} vs oracle {oracle}"
        );
    }

    #[test]
    fn codebook_export_is_serializable() {
        let pair = z2_pair(&[[2, 0], [0, 2]]);
        let book = pair.codebook().unwrap();
        let json = serde_json::to_string(&book).unwrap();
        assert!(json.contains("\"index\":4"));
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["leaders"].as_array().unwrap().len(), 4);
    }
}
