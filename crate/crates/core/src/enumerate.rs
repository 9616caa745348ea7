//! Lattice point enumeration over an ellipsoidal ball (Fincke-Pohst style).
//!
//! One DFS core serves four entry points: collect-with-cap, theta accumulation,
//! shortest vector, and closest vector. The basis is LLL-preconditioned before
//! the Cholesky factorization; all reported coordinates refer to the original
//! basis, so reduction is invisible to callers.
//!
//! Boundary convention: a ball of squared radius `r` includes points whose
//! squared norm is within `SHELL_TOL` of `r`, so shell boundaries are kept
//! whole in the face of floating-point rounding.

use crate::error::{LatticeError, Result};
use crate::lattice::Lattice;
use crate::lll::lll_reduce;
use nalgebra::{DMatrix, DVector};

/// Two squared norms within this distance belong to the same shell.
pub const SHELL_TOL: f64 = 1e-9;

/// Default cap on collected points.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// Visitor verdict for the streaming enumeration.
#[derive(Debug, Clone, Copy)]
pub enum VisitFlow {
    /// Keep enumerating with the current radius.
    Continue,
    /// Lower the effective squared radius (used by shortest/closest searches).
    Shrink(f64),
    /// Abort the walk (the caller hit a resource cap).
    Abort,
}

/// A lattice point expressed in the lattice's own (original) basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePoint {
    pub coords: Vec<i64>,
    pub norm: f64,
}

/// Successive minima (squared) plus the count of minimal vectors.
#[derive(Debug, Clone)]
pub struct MinimaProfile {
    pub minima: Vec<f64>,
    pub kissing: u64,
}

/// Result of a closest-vector query.
#[derive(Debug, Clone)]
pub struct ClosestPoint {
    pub coords: Vec<i64>,
    pub vector: DVector<f64>,
    pub dist2: f64,
}

/// Reusable enumeration context for one lattice (or one Gram matrix).
pub struct Enumerator {
    n: usize,
    /// Reduced basis (original * transform); only its span matters to callers.
    reduced: DMatrix<f64>,
    /// Original coordinates = transform * reduced coordinates.
    transform: Vec<Vec<i64>>,
    /// Upper-triangular factor with reduced Gram = R^T R, stored row-major.
    r: Vec<Vec<f64>>,
}

impl Enumerator {
    pub fn new(lat: &Lattice) -> Result<Self> {
        Self::from_basis_matrix(lat.basis().clone())
    }

    /// Enumeration context for a quadratic form given only by its Gram matrix.
    pub fn from_gram(gram: DMatrix<f64>) -> Result<Self> {
        let chol = gram
            .clone()
            .cholesky()
            .ok_or(LatticeError::NotPositiveDefinite)?;
        // The upper Cholesky factor is a basis realizing this Gram matrix.
        Self::from_basis_matrix(chol.l().transpose())
    }

    fn from_basis_matrix(basis: DMatrix<f64>) -> Result<Self> {
        let n = basis.ncols();
        let (reduced, transform) = if n >= 2 {
            lll_reduce(&basis, 0.99)
        } else {
            (
                basis.clone(),
                vec![vec![1i64]],
            )
        };
        let gram = reduced.transpose() * &reduced;
        let chol = gram.cholesky().ok_or(LatticeError::NotPositiveDefinite)?;
        let l = chol.l();
        let mut r = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i..n {
                r[i][j] = l[(j, i)];
            }
        }
        Ok(Self {
            n,
            reduced,
            transform,
            r,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn original_coords(&self, z: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.transform[i][j] * z[j]).sum())
            .collect()
    }

    fn vector_of(&self, z: &[i64]) -> DVector<f64> {
        let zf = DVector::from_iterator(self.n, z.iter().map(|&v| v as f64));
        &self.reduced * zf
    }

    /// Coordinates of a real point in the reduced basis.
    fn reduced_coords(&self, point: &DVector<f64>) -> Result<Vec<f64>> {
        let sol = self
            .reduced
            .clone()
            .lu()
            .solve(point)
            .ok_or(LatticeError::SingularBasis { det: 0.0 })?;
        Ok(sol.iter().copied().collect())
    }

    /// Streams every lattice point x with ||x - center||^2 <= radius (+ shell slack).
    ///
    /// The visitor sees coordinates in the *reduced* basis plus the squared
    /// distance; wrappers translate to original coordinates where needed.
    /// Returns the number of visited points.
    pub(crate) fn walk<F: FnMut(&[i64], f64) -> VisitFlow>(
        &self,
        center: Option<&DVector<f64>>,
        radius: f64,
        mut f: F,
    ) -> Result<u64> {
        let n = self.n;
        let t: Vec<f64> = match center {
            Some(y) => self.reduced_coords(y)?,
            None => vec![0.0; n],
        };
        let mut c_eff = radius + SHELL_TOL + radius.abs() * 1e-12;
        if c_eff < 0.0 {
            return Ok(0);
        }
        let r = &self.r;
        let mut z = vec![0i64; n];
        let mut hi = vec![0i64; n];
        let mut cen = vec![0.0f64; n];
        let mut s = vec![0.0f64; n];
        let mut partial = vec![0.0f64; n];
        let mut leaves: u64 = 0;

        // Enter the top level.
        let mut i = n - 1;
        {
            partial[i] = 0.0;
            s[i] = 0.0;
            cen[i] = t[i];
            let half = (c_eff.max(0.0)).sqrt() / r[i][i];
            z[i] = (cen[i] - half - 1e-9).ceil() as i64;
            hi[i] = (cen[i] + half + 1e-9).floor() as i64;
        }

        loop {
            if z[i] <= hi[i] {
                let d = r[i][i] * (z[i] as f64 - t[i]) + s[i];
                let term = d * d;
                if partial[i] + term <= c_eff {
                    if i == 0 {
                        leaves += 1;
                        match f(&z, partial[0] + term) {
                            VisitFlow::Continue => {}
                            VisitFlow::Shrink(new_r) => {
                                let cand = new_r + SHELL_TOL + new_r.abs() * 1e-12;
                                if cand < c_eff {
                                    c_eff = cand;
                                }
                            }
                            VisitFlow::Abort => return Ok(leaves),
                        }
                        z[0] += 1;
                    } else {
                        let p = partial[i] + term;
                        i -= 1;
                        partial[i] = p;
                        let mut acc = 0.0;
                        for j in i + 1..n {
                            acc += r[i][j] * (z[j] as f64 - t[j]);
                        }
                        s[i] = acc;
                        cen[i] = t[i] - acc / r[i][i];
                        let rem = (c_eff - p).max(0.0);
                        let half = rem.sqrt() / r[i][i];
                        z[i] = (cen[i] - half - 1e-9).ceil() as i64;
                        hi[i] = (cen[i] + half + 1e-9).floor() as i64;
                    }
                } else if (z[i] as f64) > cen[i] {
                    // Right arm of the parabola: everything further is larger.
                    z[i] = hi[i] + 1;
                } else {
                    z[i] += 1;
                }
            } else {
                i += 1;
                if i == n {
                    break;
                }
                z[i] += 1;
            }
        }
        Ok(leaves)
    }

    /// Theta-style accumulation: sum of q^(||x - center||^2) over the ball.
    ///
    /// The innermost level advances the weight with two multiplications per
    /// point (the exponent of q is a quadratic in the running coordinate), so
    /// billions of points stay affordable.
    pub fn weighted_sum(
        &self,
        center: Option<&DVector<f64>>,
        radius: f64,
        q: f64,
    ) -> Result<(f64, u64)> {
        if !(q > 0.0 && q < 1.0) {
            return Err(LatticeError::Domain(format!(
                "theta argument q must lie in (0,1), got {q}"
            )));
        }
        let n = self.n;
        let lnq = q.ln();
        if n == 1 {
            // Degenerate case: run the generic walk.
            let mut sum = 0.0;
            let leaves = self.walk(center, radius, |_z, norm| {
                sum += (lnq * norm).exp();
                VisitFlow::Continue
            })?;
            return Ok((sum, leaves));
        }
        let t: Vec<f64> = match center {
            Some(y) => self.reduced_coords(y)?,
            None => vec![0.0; n],
        };
        let c_eff = radius + SHELL_TOL + radius.abs() * 1e-12;
        if c_eff < 0.0 {
            return Ok((0.0, 0));
        }
        let r = &self.r;
        let r00 = r[0][0];
        // Per-call constant for the innermost multiplier recurrence.
        let step_step = (lnq * 2.0 * r00 * r00).exp();

        let mut z = vec![0i64; n];
        let mut hi = vec![0i64; n];
        let mut cen = vec![0.0f64; n];
        let mut s = vec![0.0f64; n];
        let mut partial = vec![0.0f64; n];
        let mut leaves: u64 = 0;
        let mut sum = 0.0f64;

        let mut i = n - 1;
        {
            partial[i] = 0.0;
            s[i] = 0.0;
            cen[i] = t[i];
            let half = c_eff.max(0.0).sqrt() / r[i][i];
            z[i] = (cen[i] - half - 1e-9).ceil() as i64;
            hi[i] = (cen[i] + half + 1e-9).floor() as i64;
        }

        loop {
            if z[i] <= hi[i] {
                let d = r[i][i] * (z[i] as f64 - t[i]) + s[i];
                let term = d * d;
                if partial[i] + term <= c_eff {
                    if i == 1 {
                        // Descend once more and run the specialized inner loop.
                        let p = partial[1] + term;
                        let mut acc = 0.0;
                        for j in 1..n {
                            acc += r[0][j] * (z[j] as f64 - t[j]);
                        }
                        let c0 = t[0] - acc / r00;
                        let rem = (c_eff - p).max(0.0);
                        let half = rem.sqrt() / r00;
                        let lo = (c0 - half).ceil() as i64;
                        let hi0 = (c0 + half).floor() as i64;
                        if lo <= hi0 {
                            let d0 = lo as f64 - c0;
                            let mut w = (lnq * (p + r00 * r00 * d0 * d0)).exp();
                            let mut step = (lnq * (r00 * r00 * (2.0 * d0 + 1.0))).exp();
                            for _ in lo..=hi0 {
                                sum += w;
                                w *= step;
                                step *= step_step;
                            }
                            leaves += (hi0 - lo + 1) as u64;
                        }
                        z[1] += 1;
                    } else {
                        let p = partial[i] + term;
                        i -= 1;
                        partial[i] = p;
                        let mut acc = 0.0;
                        for j in i + 1..n {
                            acc += r[i][j] * (z[j] as f64 - t[j]);
                        }
                        s[i] = acc;
                        cen[i] = t[i] - acc / r[i][i];
                        let rem = (c_eff - p).max(0.0);
                        let half = rem.sqrt() / r[i][i];
                        z[i] = (cen[i] - half - 1e-9).ceil() as i64;
                        hi[i] = (cen[i] + half + 1e-9).floor() as i64;
                    }
                } else if (z[i] as f64) > cen[i] {
                    z[i] = hi[i] + 1;
                } else {
                    z[i] += 1;
                }
            } else {
                i += 1;
                if i == n {
                    break;
                }
                z[i] += 1;
            }
        }
        Ok((sum, leaves))
    }

    /// Collects all points with squared norm <= radius around the origin.
    pub fn points_within(&self, radius: f64, cap: u64) -> Result<Vec<LatticePoint>> {
        let mut pts: Vec<LatticePoint> = Vec::new();
        let mut over = false;
        self.walk(None, radius, |z, norm| {
            if pts.len() as u64 >= cap {
                over = true;
                return VisitFlow::Abort;
            }
            pts.push(LatticePoint {
                coords: self.original_coords(z),
                norm,
            });
            VisitFlow::Continue
        })?;
        if over {
            return Err(LatticeError::Capacity { cap, radius });
        }
        pts.sort_by(|a, b| {
            a.norm
                .partial_cmp(&b.norm)
                .unwrap()
                .then_with(|| a.coords.cmp(&b.coords))
        });
        Ok(pts)
    }

    /// Shell census on an integer-like norm grid.
    ///
    /// `grid` is the spacing of attainable squared norms (1.0 for the integral
    /// catalog lattices). Errors if any visited norm is off-grid, which guards
    /// against calling this on a lattice it does not fit.
    pub fn shell_counts(&self, radius: f64, grid: f64) -> Result<Vec<(f64, u64)>> {
        if !(grid > 0.0) {
            return Err(LatticeError::Domain("shell grid must be positive".into()));
        }
        let buckets = (radius / grid).ceil() as usize + 2;
        let mut counts = vec![0u64; buckets];
        let mut off_grid: Option<f64> = None;
        self.walk(None, radius, |_z, norm| {
            let k = (norm / grid).round();
            if (norm - k * grid).abs() > 1e-6 * grid.max(norm) {
                off_grid = Some(norm);
                return VisitFlow::Abort;
            }
            let k = k as usize;
            if k < counts.len() {
                counts[k] += 1;
            }
            VisitFlow::Continue
        })?;
        if let Some(norm) = off_grid {
            return Err(LatticeError::Inconsistent(format!(
                "norm {norm} does not sit on the {grid}-grid of shells"
            )));
        }
        Ok(counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| (k as f64 * grid, c))
            .collect())
    }

    /// Shortest nonzero vector: (original coordinates, squared norm).
    pub fn shortest_vector(&self) -> Result<(Vec<i64>, f64)> {
        let init = (0..self.n)
            .map(|j| self.reduced.column(j).norm_squared())
            .fold(f64::MAX, f64::min);
        let mut best = init;
        // Zero detection is exact on coordinates: a norm threshold would
        // misread lattices whose minimum sits at or below the tolerance.
        self.walk(None, init, |z, norm| {
            if z.iter().any(|&v| v != 0) && norm < best {
                best = norm;
                VisitFlow::Shrink(norm)
            } else {
                VisitFlow::Continue
            }
        })?;
        // Re-collect everything in the minimal shell and pick a canonical one.
        let shell = SHELL_TOL * best.max(1.0);
        let mut cands: Vec<Vec<i64>> = Vec::new();
        self.walk(None, best, |z, norm| {
            if z.iter().any(|&v| v != 0) && (norm - best).abs() <= shell {
                let mut c = self.original_coords(z);
                if c.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0) {
                    for v in c.iter_mut() {
                        *v = -*v;
                    }
                }
                cands.push(c);
            }
            VisitFlow::Continue
        })?;
        cands.sort();
        cands.dedup();
        let coords = cands
            .into_iter()
            .next()
            .ok_or_else(|| LatticeError::Inconsistent("empty minimal shell".into()))?;
        Ok((coords, best))
    }

    /// All successive minima plus the kissing number.
    pub fn successive_minima(&self) -> Result<MinimaProfile> {
        let n = self.n;
        let mut radius = (0..n)
            .map(|j| self.reduced.column(j).norm_squared())
            .fold(f64::MAX, f64::min);
        loop {
            let mut pts: Vec<(f64, Vec<i64>)> = Vec::new();
            self.walk(None, radius, |z, norm| {
                if z.iter().any(|&v| v != 0) {
                    pts.push((norm, z.to_vec()));
                }
                VisitFlow::Continue
            })?;
            pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then_with(|| a.1.cmp(&b.1)));
            // Greedy linear-independence scan via running orthogonalization.
            let mut ortho: Vec<DVector<f64>> = Vec::new();
            let mut minima = Vec::new();
            let mut kissing = 0u64;
            let lambda1 = pts.first().map(|p| p.0);
            for (norm, z) in &pts {
                if let Some(l1) = lambda1 {
                    // Relative shell width keeps the count invariant under
                    // rescaling the lattice.
                    if (*norm - l1).abs() <= SHELL_TOL * l1 {
                        kissing += 1;
                    }
                }
                if minima.len() < n {
                    let v = self.vector_of(z);
                    let mut res = v.clone();
                    for b in &ortho {
                        res -= b * b.dot(&v);
                    }
                    if res.norm_squared() > 1e-9 * v.norm_squared() {
                        let unit = res.clone() / res.norm();
                        ortho.push(unit);
                        minima.push(*norm);
                    }
                } else if lambda1.map(|l1| (*norm - l1).abs() > SHELL_TOL * l1) == Some(true) {
                    // Minima complete and past the first shell: census done.
                    break;
                }
            }
            if minima.len() == n {
                return Ok(MinimaProfile { minima, kissing });
            }
            radius *= 2.0;
        }
    }

    /// Closest lattice point to `y`; ties resolve to the lexicographically
    /// smallest original-basis coordinate vector.
    pub fn closest(&self, y: &DVector<f64>) -> Result<ClosestPoint> {
        let t = self.reduced_coords(y)?;
        // Babai rounding bootstraps the search radius.
        let z0: Vec<i64> = t.iter().map(|v| v.round() as i64).collect();
        let d0 = (self.vector_of(&z0) - y).norm_squared();
        let mut best = d0;
        self.walk(Some(y), d0, |_z, norm| {
            if norm < best {
                best = norm;
                VisitFlow::Shrink(norm)
            } else {
                VisitFlow::Continue
            }
        })?;
        let mut cands: Vec<Vec<i64>> = Vec::new();
        self.walk(Some(y), best, |z, norm| {
            if (norm - best).abs() <= SHELL_TOL {
                cands.push(self.original_coords(z));
            }
            VisitFlow::Continue
        })?;
        cands.sort();
        let coords = cands
            .into_iter()
            .next()
            .ok_or_else(|| LatticeError::Inconsistent("closest-point search lost its witness".into()))?;
        // Rebuild the vector from original coordinates: transform is unimodular,
        // so original coords map back through reduced basis * transform^{-1};
        // cheaper to build from the reduced representation directly.
        let zred = self.reduced_coords_from_original(&coords);
        let vector = self.vector_of(&zred);
        let dist2 = (&vector - y).norm_squared();
        Ok(ClosestPoint {
            coords,
            vector,
            dist2,
        })
    }

    fn reduced_coords_from_original(&self, orig: &[i64]) -> Vec<i64> {
        // transform * z_reduced = z_original; the transform is unimodular, so
        // solve exactly by LU over f64 and round (entries are true integers).
        let n = self.n;
        let tf = DMatrix::from_fn(n, n, |i, j| self.transform[i][j] as f64);
        let rhs = DVector::from_iterator(n, orig.iter().map(|&v| v as f64));
        let sol = tf.lu().solve(&rhs).expect("unimodular transform");
        sol.iter().map(|v| v.round() as i64).collect()
    }
}

/// Every lattice point with squared norm at most `r_max`, zero included.
pub fn enumerate_by_norm(lat: &Lattice, r_max: f64, cap: Option<u64>) -> Result<Vec<LatticePoint>> {
    Enumerator::new(lat)?.points_within(r_max, cap.unwrap_or(DEFAULT_CAP))
}

/// Successive minima and kissing number of the lattice.
pub fn successive_minima(lat: &Lattice) -> Result<MinimaProfile> {
    Enumerator::new(lat)?.successive_minima()
}

/// A lattice is well-rounded when all successive minima coincide.
pub fn is_well_rounded(lat: &Lattice) -> Result<bool> {
    let profile = successive_minima(lat)?;
    let l1 = profile.minima[0];
    let ln = *profile.minima.last().unwrap();
    Ok(ln - l1 <= SHELL_TOL + 1e-9 * ln)
}

/// Closest lattice point to an arbitrary target.
pub fn closest_vector(lat: &Lattice, y: &DVector<f64>) -> Result<ClosestPoint> {
    Enumerator::new(lat)?.closest(y)
}
