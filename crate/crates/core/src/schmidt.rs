//! Schmidt decomposition and the measurement statistics it induces.
//!
//! Every bipartite pure state can be written Σ_i √λ_i |i_A⟩⊗|i_B⟩ with
//! probabilities λ_i. Measuring both sides in that basis gives a joint
//! distribution that is diagonal, P(n, m) = λ_n δ_{nm}, while the marginals
//! are λ on each side; the gap between the joint and the product of the
//! marginals is what the correlation matrix records.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{svd, CMatrix, Svd};
use crate::states::{product_state, LocalVector, PureState, NORM_TOL};

/// Schmidt coefficients below this are clamped to exactly 0.
pub const LAMBDA_CLAMP: f64 = 1e-12;

/// The factorization ψ = Σ_i √λ_i |i_A⟩⊗|i_B⟩.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    lambdas: Vec<f64>,
    basis_a: CMatrix,
    basis_b: CMatrix,
}

impl SchmidtDecomposition {
    /// Schmidt coefficients, descending, summing to 1. The length is always
    /// min(dim_a, dim_b); trailing entries may be exact zeros.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// Columns are the A-side Schmidt vectors |i_A⟩.
    pub fn basis_a(&self) -> &CMatrix {
        &self.basis_a
    }

    /// Columns are the B-side Schmidt vectors |i_B⟩.
    pub fn basis_b(&self) -> &CMatrix {
        &self.basis_b
    }

    /// Number of strictly positive coefficients; 1 for product states.
    pub fn schmidt_rank(&self) -> usize {
        self.lambdas.iter().filter(|&&l| l > 0.0).count()
    }

    /// Rebuilds the state as Σ_i √λ_i |i_A⟩⊗|i_B⟩.
    pub fn reconstruct(&self) -> PureState {
        let (da, k) = self.basis_a.dim();
        let db = self.basis_b.nrows();
        let mut c = Array2::from_elem((da, db), Complex64::new(0.0, 0.0));
        for (idx, &l) in self.lambdas.iter().enumerate().take(k) {
            let s = l.sqrt();
            for i in 0..da {
                for j in 0..db {
                    c[[i, j]] += s * self.basis_a[[i, idx]] * self.basis_b[[j, idx]];
                }
            }
        }
        PureState::new(c).expect("reconstruction from orthonormal bases is normalized")
    }
}

/// Schmidt decomposition via SVD of the amplitude matrix: λ_i = σ_i².
///
/// Coefficients below [`LAMBDA_CLAMP`] are clamped to exactly 0 and the
/// vector is renormalized, so downstream code never sees stray negatives or
/// logs of tiny noise values.
pub fn schmidt_decompose(psi: &PureState) -> Result<SchmidtDecomposition> {
    let Svd { u, sigma, v } = svd(psi.amplitudes())?;
    let mut lambdas: Vec<f64> = sigma.iter().map(|s| s * s).collect();
    for l in &mut lambdas {
        if *l < LAMBDA_CLAMP {
            *l = 0.0;
        }
    }
    let sum: f64 = lambdas.iter().sum();
    debug_assert!(sum > 0.5, "unit-norm state must have Σσ² ≈ 1");
    for l in &mut lambdas {
        *l /= sum;
    }
    // ψ = Σ_k σ_k u_k ⊗ conj(v_k), so the B-side basis is the conjugate of V.
    let basis_b = v.mapv(|z| z.conj());
    Ok(SchmidtDecomposition { lambdas, basis_a: u, basis_b })
}

/// Schmidt-basis measurement statistics of a decomposed state.
#[derive(Debug, Clone)]
pub struct ProbabilityTable {
    marginal_a: Vec<f64>,
    marginal_b: Vec<f64>,
    joint: Array2<f64>,
    conditional: Array2<Option<f64>>,
}

impl ProbabilityTable {
    /// P(n_A): probability of A-side outcome n.
    pub fn marginal_a(&self) -> &[f64] {
        &self.marginal_a
    }

    /// P(m_B): probability of B-side outcome m.
    pub fn marginal_b(&self) -> &[f64] {
        &self.marginal_b
    }

    /// P(n_A, m_B), indexed `[[n, m]]`.
    pub fn joint(&self) -> &Array2<f64> {
        &self.joint
    }

    /// P(n_A | m_B), indexed `[[n, m]]`; `None` where P(m_B) = 0 leaves the
    /// conditional undefined.
    pub fn conditional(&self) -> &Array2<Option<f64>> {
        &self.conditional
    }

    /// Number of outcomes per side.
    pub fn size(&self) -> usize {
        self.marginal_a.len()
    }
}

/// Measurement statistics in the Schmidt basis: marginals equal λ on both
/// sides and the joint distribution is diagonal, P(n, m) = λ_n δ_{nm}.
pub fn probability_table(sd: &SchmidtDecomposition) -> ProbabilityTable {
    let lambdas = sd.lambdas();
    let k = lambdas.len();
    let mut joint = Array2::zeros((k, k));
    for (n, &l) in lambdas.iter().enumerate() {
        joint[[n, n]] = l;
    }
    let conditional = Array2::from_shape_fn((k, k), |(n, m)| {
        if lambdas[m] > 0.0 {
            Some(joint[[n, m]] / lambdas[m])
        } else {
            None
        }
    });
    ProbabilityTable {
        marginal_a: lambdas.to_vec(),
        marginal_b: lambdas.to_vec(),
        joint,
        conditional,
    }
}

/// The matrix of probability differences |P(n_A, m_B) − P(n_A)·P(m_B)|.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    entries: Array2<f64>,
}

impl CorrelationMatrix {
    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }
}

pub fn correlation_matrix(table: &ProbabilityTable) -> CorrelationMatrix {
    let k = table.size();
    let entries = Array2::from_shape_fn((k, k), |(n, m)| {
        (table.joint()[[n, m]] - table.marginal_a()[n] * table.marginal_b()[m]).abs()
    });
    CorrelationMatrix { entries }
}

/// The product state (Σ_i √λ_i |i_A⟩) ⊗ (Σ_j √λ_j |j_B⟩): it reproduces the
/// single-side marginals of a state with Schmidt vector `lambdas` but its
/// joint distribution factorizes, so all its correlations vanish.
pub fn separable_reference_state(lambdas: &[f64]) -> Result<PureState> {
    if lambdas.is_empty() {
        return Err(Error::InvalidInput("need at least one coefficient".into()));
    }
    if lambdas.iter().any(|&l| !l.is_finite() || l < 0.0) {
        return Err(Error::InvalidInput("coefficients must be finite and ≥ 0".into()));
    }
    let sum: f64 = lambdas.iter().sum();
    if (sum - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidInput(format!(
            "coefficients sum to {sum}, expected 1 within {NORM_TOL:e}"
        )));
    }
    let side = LocalVector::new(
        lambdas.iter().map(|&l| Complex64::new(l.sqrt(), 0.0)).collect(),
    )?;
    Ok(product_state(&side, &side))
}
