//! Cyclic algebras over numerically represented number fields.
//!
//! An element of the field L is a coordinate vector over the power basis
//! {1, θ, …, θ^{n−1}}, with coefficients from the base field K embedded as
//! complex scalars. The defining data are the reduction row for θⁿ and the
//! coordinates of σ(θ); everything else (the σ coordinate map, embeddings,
//! field multiplication) is derived. No symbolic number theory is involved:
//! all identities are checked numerically by the callers' oracles.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, StcError};

/// Coordinates of a field element over the power basis of L.
pub type FieldElement = Vec<Complex64>;

/// Defining data for a cyclic extension L/K of degree n.
#[derive(Debug, Clone)]
pub struct FieldDescriptor {
    /// Human-readable name of the extension.
    pub label: String,
    /// Complex embedding of the primitive element θ.
    pub theta: Complex64,
    /// Coordinates of θⁿ over {1, θ, …, θ^{n−1}}.
    pub theta_pow_reduction: Vec<Complex64>,
    /// Coordinates of σ(θ) over the same basis.
    pub sigma_of_theta: Vec<Complex64>,
}

/// A cyclic algebra (L/K, σ, γ) of degree n, numerically represented.
#[derive(Debug, Clone)]
pub struct CyclicAlgebraSpec {
    degree: usize,
    gamma: Complex64,
    field: FieldDescriptor,
    /// Coordinate map of σ: column t holds the coordinates of σ(θ)^t.
    sigma_action: DMatrix<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Product of two coordinate polynomials, reduced by θⁿ = Σ rₜθᵗ.
fn poly_mul_mod(a: &[Complex64], b: &[Complex64], red: &[Complex64]) -> Vec<Complex64> {
    let n = red.len();
    let mut full = vec![ZERO; 2 * n - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            full[i + j] += ai * bj;
        }
    }
    for k in (n..full.len()).rev() {
        let c = full[k];
        if c != ZERO {
            full[k] = ZERO;
            for (t, &r) in red.iter().enumerate() {
                full[k - n + t] += c * r;
            }
        }
    }
    full.truncate(n);
    full
}

impl CyclicAlgebraSpec {
    /// Builds the algebra and verifies its defining relations numerically:
    /// γ ≠ 0, consistent dimensions, and σⁿ = id on coordinates.
    pub fn new(degree: usize, gamma: Complex64, field: FieldDescriptor) -> Result<Self> {
        if degree == 0 {
            return Err(StcError::Domain("algebra degree must be positive".into()));
        }
        if gamma == ZERO {
            return Err(StcError::Domain("gamma must be nonzero".into()));
        }
        for (name, v) in [
            ("theta_pow_reduction", &field.theta_pow_reduction),
            ("sigma_of_theta", &field.sigma_of_theta),
        ] {
            if v.len() != degree {
                return Err(StcError::Dimension {
                    context: name,
                    expected: degree,
                    got: v.len(),
                });
            }
        }
        // Column t of the sigma map: coordinates of sigma(theta)^t.
        let mut sigma_action = DMatrix::zeros(degree, degree);
        let mut power = vec![ZERO; degree];
        power[0] = ONE;
        for t in 0..degree {
            for i in 0..degree {
                sigma_action[(i, t)] = power[i];
            }
            if t + 1 < degree {
                power = poly_mul_mod(&power, &field.sigma_of_theta, &field.theta_pow_reduction);
            }
        }
        let mut acc = DMatrix::identity(degree, degree);
        for _ in 0..degree {
            acc = &sigma_action * acc;
        }
        let drift: f64 = (&acc - DMatrix::<Complex64>::identity(degree, degree))
            .iter()
            .map(|z| z.norm())
            .sum();
        if drift > 1e-9 {
            return Err(StcError::Domain(format!(
                "sigma does not have order {degree}: drift {drift:.3e}"
            )));
        }
        Ok(Self {
            degree,
            gamma,
            field,
            sigma_action,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    /// The derived coordinate map of σ.
    pub fn sigma_action(&self) -> &DMatrix<Complex64> {
        &self.sigma_action
    }

    /// Wraps raw coordinates, checking the length.
    pub fn element(&self, coords: &[Complex64]) -> Result<FieldElement> {
        if coords.len() != self.degree {
            return Err(StcError::Dimension {
                context: "field element coordinates",
                expected: self.degree,
                got: coords.len(),
            });
        }
        Ok(coords.to_vec())
    }

    /// Complex embedding Σ cₜ·θᵗ.
    pub fn embed(&self, x: &FieldElement) -> Complex64 {
        let mut acc = ZERO;
        let mut pw = ONE;
        for &c in x {
            acc += c * pw;
            pw *= self.field.theta;
        }
        acc
    }

    /// Applies σ to coordinates.
    pub fn sigma(&self, x: &FieldElement) -> FieldElement {
        let mut out = vec![ZERO; self.degree];
        for (t, &c) in x.iter().enumerate() {
            for i in 0..self.degree {
                out[i] += self.sigma_action[(i, t)] * c;
            }
        }
        out
    }

    /// Multiplication in L on coordinates.
    pub fn field_mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        poly_mul_mod(x, y, &self.field.theta_pow_reduction)
    }
}

/// The matrix ρ(x) of left multiplication by x = Σ eⁱxᵢ on the basis
/// {1, e, …, e^{n−1}}: entry (m, j) = γ^{[m<j]}·σʲ(x₍ₘ₋ⱼ₎ mod n), embedded.
pub fn left_regular_rep(
    alg: &CyclicAlgebraSpec,
    x_coords: &[FieldElement],
) -> Result<DMatrix<Complex64>> {
    let n = alg.degree();
    if x_coords.len() != n {
        return Err(StcError::Dimension {
            context: "left_regular_rep coordinates",
            expected: n,
            got: x_coords.len(),
        });
    }
    // sigma_pow[j] holds sigma^j applied to each coordinate element.
    let mut sigma_pow: Vec<Vec<FieldElement>> = vec![x_coords.to_vec()];
    for j in 1..n {
        let prev = &sigma_pow[j - 1];
        sigma_pow.push(prev.iter().map(|e| alg.sigma(e)).collect());
    }
    let mut rho = DMatrix::zeros(n, n);
    for m in 0..n {
        for j in 0..n {
            let i = (m + n - j) % n;
            let twist = if m < j { alg.gamma() } else { ONE };
            rho[(m, j)] = twist * alg.embed(&sigma_pow[j][i]);
        }
    }
    Ok(rho)
}

/// Product of two algebra elements x = Σ eⁱxᵢ, y = Σ eʲyⱼ on coordinates,
/// computed entirely in the field arithmetic: (xy)ₘ = Σⱼ γ^{[m<j]}·σʲ(xᵢ)·yⱼ
/// with i = (m−j) mod n. Serves as the independent oracle for ρ.
pub fn algebra_mul(
    alg: &CyclicAlgebraSpec,
    x: &[FieldElement],
    y: &[FieldElement],
) -> Result<Vec<FieldElement>> {
    let n = alg.degree();
    if x.len() != n || y.len() != n {
        return Err(StcError::Dimension {
            context: "algebra_mul coordinates",
            expected: n,
            got: x.len().max(y.len()),
        });
    }
    let gamma_el: FieldElement = {
        let mut g = vec![ZERO; n];
        g[0] = alg.gamma();
        g
    };
    let mut out = vec![vec![ZERO; n]; n];
    for m in 0..n {
        for j in 0..n {
            let i = (m + n - j) % n;
            let mut term = x[i].clone();
            for _ in 0..j {
                term = alg.sigma(&term);
            }
            term = alg.field_mul(&term, &y[j]);
            if m < j {
                term = alg.field_mul(&term, &gamma_el);
            }
            for t in 0..n {
                out[m][t] += term[t];
            }
        }
    }
    Ok(out)
}

/// The Hamilton quaternions as (ℚ(i)/ℚ, conjugation, −1).
pub fn quaternion_algebra() -> CyclicAlgebraSpec {
    CyclicAlgebraSpec::new(
        2,
        Complex64::new(-1.0, 0.0),
        FieldDescriptor {
            label: "Q(i)/Q".into(),
            theta: Complex64::new(0.0, 1.0),
            theta_pow_reduction: vec![Complex64::new(-1.0, 0.0), ZERO],
            sigma_of_theta: vec![ZERO, Complex64::new(-1.0, 0.0)],
        },
    )
    .expect("quaternion instance is well formed")
}

/// The Golden code algebra (ℚ(i,√5)/ℚ(i), √5 ↦ −√5, γ = i), with the
/// primitive element θ = (1+√5)/2, so θ² = θ + 1 and σ(θ) = 1 − θ.
pub fn golden_algebra() -> CyclicAlgebraSpec {
    CyclicAlgebraSpec::new(
        2,
        Complex64::new(0.0, 1.0),
        FieldDescriptor {
            label: "Q(i,sqrt5)/Q(i)".into(),
            theta: Complex64::new((1.0 + 5.0f64.sqrt()) / 2.0, 0.0),
            theta_pow_reduction: vec![ONE, ONE],
            sigma_of_theta: vec![ONE, Complex64::new(-1.0, 0.0)],
        },
    )
    .expect("golden instance is well formed")
}
