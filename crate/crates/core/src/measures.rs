//! Entanglement measures on Schmidt vectors, plus majorization utilities.
//!
//! The headline measure sums the absolute differences between the joint
//! Schmidt-basis outcome probabilities and the product of the marginals,
//! scaled by N/[2(N−1)]. For a Schmidt vector λ that sum collapses to the
//! closed form N/(N−1)·(1 − Σλ²), i.e. N/(N−1) times the linear entropy, so
//! the two routes cross-check each other. Both live in [0, 1]: 0 exactly for
//! product states, 1 exactly at the uniform vector λ_i = 1/N.

use crate::error::{Error, Result};
use crate::schmidt::{probability_table, schmidt_decompose, ProbabilityTable};
use crate::states::PureState;

/// Tolerance on Σλ = 1 for vectors passed into the measures.
pub const SUM_TOL: f64 = 1e-9;

/// Per-partial-sum slack used by [`majorizes`].
pub const MAJORIZATION_TOL: f64 = 1e-12;

/// Everything this crate can say about one bipartite pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    /// Probability-difference route, N/[2(N−1)] · Σ|P(n,m) − P(n)P(m)|.
    pub e_probability_sum: f64,
    /// Closed form N/(N−1)·(1 − Σλ²).
    pub e_closed_form: f64,
    /// Von Neumann entropy of a marginal, −Σλ ln λ, in nats.
    pub entropy_of_entanglement: f64,
    /// Linear entropy 1 − Σλ².
    pub two_entropy: f64,
    /// Rényi-2 entropy −ln Σλ², in nats.
    pub renyi2: f64,
    /// Number of strictly positive Schmidt coefficients.
    pub schmidt_rank: usize,
    /// The Schmidt coefficients, descending.
    pub lambdas: Vec<f64>,
}

fn validate_schmidt_vector(lambdas: &[f64]) -> Result<()> {
    if lambdas.iter().any(|&l| !l.is_finite() || l < 0.0) {
        return Err(Error::InvalidInput(
            "Schmidt vector entries must be finite and ≥ 0".into(),
        ));
    }
    let sum: f64 = lambdas.iter().sum();
    if (sum - 1.0).abs() > SUM_TOL {
        return Err(Error::InvalidInput(format!(
            "Schmidt vector sums to {sum}, expected 1 within {SUM_TOL:e}"
        )));
    }
    Ok(())
}

/// Entanglement via the probability-difference sum over a Schmidt-basis
/// measurement table. `n_schmidt` is the Schmidt vector length (the table
/// size); systems with fewer than two levels on a side have no normalizable
/// measure and are rejected.
pub fn entanglement_probability_sum(
    table: &ProbabilityTable,
    n_schmidt: usize,
) -> Result<f64> {
    if n_schmidt < 2 {
        return Err(Error::UndefinedMeasure(
            "entanglement needs at least two levels per side (N ≥ 2)".into(),
        ));
    }
    if n_schmidt != table.size() {
        return Err(Error::InvalidInput(format!(
            "n_schmidt = {n_schmidt} does not match table size {}",
            table.size()
        )));
    }
    let n = n_schmidt;
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            sum += (table.joint()[[i, j]]
                - table.marginal_a()[i] * table.marginal_b()[j])
                .abs();
        }
    }
    Ok(n as f64 / (2.0 * (n as f64 - 1.0)) * sum)
}

/// Entanglement via the closed form N/(N−1)·(1 − Σλ²).
pub fn entanglement_closed_form(lambdas: &[f64]) -> Result<f64> {
    let n = lambdas.len();
    if n < 2 {
        return Err(Error::UndefinedMeasure(
            "entanglement needs at least two levels per side (N ≥ 2)".into(),
        ));
    }
    validate_schmidt_vector(lambdas)?;
    Ok(n as f64 / (n as f64 - 1.0) * two_entropy(lambdas))
}

/// Von Neumann entropy of the marginals, −Σ λ ln λ in nats (0·ln 0 := 0).
pub fn entropy_of_entanglement(lambdas: &[f64]) -> f64 {
    debug_assert!(validate_schmidt_vector(lambdas).is_ok());
    -lambdas
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| l * l.ln())
        .sum::<f64>()
}

/// Linear entropy 1 − Σλ².
pub fn two_entropy(lambdas: &[f64]) -> f64 {
    debug_assert!(validate_schmidt_vector(lambdas).is_ok());
    1.0 - lambdas.iter().map(|&l| l * l).sum::<f64>()
}

/// Rényi-2 entropy −ln Σλ² in nats.
pub fn renyi2_entropy(lambdas: &[f64]) -> f64 {
    debug_assert!(validate_schmidt_vector(lambdas).is_ok());
    -lambdas.iter().map(|&l| l * l).sum::<f64>().ln()
}

/// Σ x_i^q. Schur convex for q ≥ 1, which is the regime callers care about.
pub fn power_sum(x: &[f64], q: f64) -> f64 {
    debug_assert!(q >= 1.0);
    x.iter().map(|&v| v.powf(q)).sum()
}

/// True iff `x` is majorized by `y` (x ≺ y): after sorting both descending
/// and zero-padding to a common length, every partial sum of `x` stays
/// within [`MAJORIZATION_TOL`] of not exceeding the matching sum of `y`.
/// Both inputs must be probability vectors (nonnegative, summing to 1
/// within [`SUM_TOL`]).
pub fn majorizes(x: &[f64], y: &[f64]) -> Result<bool> {
    validate_schmidt_vector(x)?;
    validate_schmidt_vector(y)?;
    let len = x.len().max(y.len());
    let pad = |v: &[f64]| {
        let mut s = v.to_vec();
        s.resize(len, 0.0);
        s.sort_by(|a, b| b.partial_cmp(a).expect("finite entries"));
        s
    };
    let xs = pad(x);
    let ys = pad(y);
    let mut sum_x = 0.0;
    let mut sum_y = 0.0;
    for k in 0..len {
        sum_x += xs[k];
        sum_y += ys[k];
        if sum_x > sum_y + MAJORIZATION_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Full measurement-and-measures pipeline for one state: Schmidt
/// decomposition, both entanglement routes, and the entropy family.
pub fn entanglement_report(psi: &PureState) -> Result<EntanglementReport> {
    let sd = schmidt_decompose(psi)?;
    let lambdas = sd.lambdas().to_vec();
    let table = probability_table(&sd);
    let e_probability_sum = entanglement_probability_sum(&table, lambdas.len())?;
    let e_closed_form = entanglement_closed_form(&lambdas)?;
    debug_assert!((e_probability_sum - e_closed_form).abs() <= 1e-9);
    Ok(EntanglementReport {
        e_probability_sum,
        e_closed_form,
        entropy_of_entanglement: entropy_of_entanglement(&lambdas),
        two_entropy: two_entropy(&lambdas),
        renyi2: renyi2_entropy(&lambdas),
        schmidt_rank: sd.schmidt_rank(),
        lambdas,
    })
}
