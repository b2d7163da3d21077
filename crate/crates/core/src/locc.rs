//! Local general measurements with classical communication, and the
//! entanglement-monotonicity harness built on them.
//!
//! A [`LocalMeasurementSet`] is one party's instrument: operators {A_k} with
//! Σ A_k†A_k = I. A joint protocol pairs an A-side and a B-side operator per
//! outcome; probability is conserved exactly when the *pair* list satisfies
//! Σ_k A_k†A_k ⊗ B_k†B_k = I, which [`PairedInstrument`] validates once at
//! construction. Outcome
//! `k` then occurs with p_k = ‖(A_k ⊗ B_k)|ψ⟩‖² and leaves the normalized
//! post-state behind. Averaged over outcomes, entanglement never grows;
//! [`monotonicity_trial`] measures exactly that.

use ndarray::s;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{adjoint, all_finite, frobenius_norm, identity, CMatrix};
use crate::measures::{entanglement_closed_form, majorizes};
use crate::schmidt::schmidt_decompose;
use crate::states::{random_unitary_from, PureState, UNITARITY_TOL};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Completeness slack ‖Σ A†A − I‖_F accepted on construction.
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// Outcomes with probability at or below this carry no post-state.
pub const PROBABILITY_FLOOR: f64 = 1e-14;

/// One party's measurement: operators {A_k} with Σ A_k†A_k = I.
#[derive(Debug, Clone)]
pub struct LocalMeasurementSet {
    dim: usize,
    operators: Vec<CMatrix>,
}

impl LocalMeasurementSet {
    pub fn new(operators: Vec<CMatrix>) -> Result<Self> {
        let dim = match operators.first() {
            Some(op) => op.nrows(),
            None => {
                return Err(Error::InvalidInput(
                    "measurement set needs at least one operator".into(),
                ))
            }
        };
        if dim == 0 {
            return Err(Error::InvalidInput("operator dimension must be ≥ 1".into()));
        }
        for op in &operators {
            if op.dim() != (dim, dim) {
                return Err(Error::InvalidInput(format!(
                    "all operators must be {dim}×{dim}, found {}×{}",
                    op.nrows(),
                    op.ncols()
                )));
            }
            if !all_finite(op) {
                return Err(Error::InvalidInput("operator has non-finite entries".into()));
            }
        }
        let mut sum = identity(dim).mapv(|z| -z);
        for op in &operators {
            sum = sum + adjoint(op).dot(op);
        }
        let defect = frobenius_norm(&sum);
        if defect > COMPLETENESS_TOL {
            return Err(Error::InvalidInput(format!(
                "measurement set is not complete: ‖Σ A†A − I‖ = {defect:.3e}"
            )));
        }
        Ok(Self { dim, operators })
    }

    /// The do-nothing instrument {I}.
    pub fn trivial(dim: usize) -> Self {
        Self { dim, operators: vec![identity(dim)] }
    }

    /// The projective measurement {|i⟩⟨i|} onto the computational basis.
    pub fn projective(dim: usize) -> Self {
        let operators = (0..dim)
            .map(|i| {
                let mut p = CMatrix::from_elem((dim, dim), Complex64::new(0.0, 0.0));
                p[[i, i]] = Complex64::new(1.0, 0.0);
                p
            })
            .collect();
        Self { dim, operators }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcome_count(&self) -> usize {
        self.operators.len()
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }
}

/// A seeded random instrument with `k_outcomes` outcomes on a `dim`-level
/// system: a Haar unitary on a (dim·k)-dimensional space is cut into K
/// stacked dim×dim blocks of its first `dim` columns, which makes the
/// completeness sum an exact identity up to rounding.
pub fn random_measurement_set(
    dim: usize,
    k_outcomes: usize,
    seed: u64,
) -> Result<LocalMeasurementSet> {
    if dim == 0 || k_outcomes == 0 {
        return Err(Error::InvalidInput(
            "random measurement set needs dim ≥ 1 and k_outcomes ≥ 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_measurement_set_from(dim, k_outcomes, &mut rng))
}

pub(crate) fn random_measurement_set_from(
    dim: usize,
    k_outcomes: usize,
    rng: &mut ChaCha8Rng,
) -> LocalMeasurementSet {
    let big = random_unitary_from(dim * k_outcomes, rng);
    let operators: Vec<CMatrix> = (0..k_outcomes)
        .map(|k| big.slice(s![k * dim..(k + 1) * dim, 0..dim]).to_owned())
        .collect();
    let set = LocalMeasurementSet::new(operators)
        .expect("sliced unitary columns are complete by construction");
    debug_assert!({
        let mut sum = identity(dim).mapv(|z| -z);
        for op in set.operators() {
            sum = sum + adjoint(op).dot(op);
        }
        frobenius_norm(&sum) <= 1e-10
    });
    set
}

/// One outcome of a joint measurement.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub index: usize,
    pub probability: f64,
    /// Absent when the probability is at or below [`PROBABILITY_FLOOR`]:
    /// normalizing by √p_k there only amplifies rounding noise.
    pub post_state: Option<PureState>,
}

/// An outcome-indexed list of operator pairs (A_k, B_k) with
/// Σ_k A_k†A_k ⊗ B_k†B_k = I, which is exactly the condition for outcome
/// probabilities to sum to 1 on every state.
#[derive(Debug, Clone)]
pub struct PairedInstrument {
    dim_a: usize,
    dim_b: usize,
    pairs: Vec<(CMatrix, CMatrix)>,
}

impl PairedInstrument {
    /// Pairs two instruments index-by-index. The outcome counts must match,
    /// except that a one-outcome set (whose single operator is unitary, by
    /// completeness) is broadcast across the other side's outcomes.
    ///
    /// Two genuinely multi-outcome complete sets are almost never jointly
    /// complete when zipped this way; such pairings are rejected rather than
    /// silently leaking probability. Use [`PairedInstrument::product`] for
    /// independent two-sided measurements.
    pub fn from_sets(
        set_a: &LocalMeasurementSet,
        set_b: &LocalMeasurementSet,
    ) -> Result<Self> {
        let ka = set_a.outcome_count();
        let kb = set_b.outcome_count();
        let pairs: Vec<(CMatrix, CMatrix)> = if ka == kb {
            set_a
                .operators()
                .iter()
                .zip(set_b.operators())
                .map(|(a, b)| (a.clone(), b.clone()))
                .collect()
        } else if ka == 1 {
            set_b
                .operators()
                .iter()
                .map(|b| (set_a.operators()[0].clone(), b.clone()))
                .collect()
        } else if kb == 1 {
            set_a
                .operators()
                .iter()
                .map(|a| (a.clone(), set_b.operators()[0].clone()))
                .collect()
        } else {
            return Err(Error::InvalidInput(format!(
                "outcome counts {ka} and {kb} cannot be paired"
            )));
        };
        Self::from_pairs(set_a.dim(), set_b.dim(), pairs)
    }

    /// All K_A·K_B combinations (A_i, B_j) of two independent instruments;
    /// outcome index is i·K_B + j. Always jointly complete.
    pub fn product(
        set_a: &LocalMeasurementSet,
        set_b: &LocalMeasurementSet,
    ) -> Result<Self> {
        let mut pairs = Vec::with_capacity(set_a.outcome_count() * set_b.outcome_count());
        for a in set_a.operators() {
            for b in set_b.operators() {
                pairs.push((a.clone(), b.clone()));
            }
        }
        Self::from_pairs(set_a.dim(), set_b.dim(), pairs)
    }

    /// Measurement on A with outcome-conditioned unitary feedback on B: the
    /// classical-communication protocol where B applies U_k after hearing
    /// outcome k. Each feedback operator must be unitary.
    pub fn with_unitary_feedback(
        set_a: &LocalMeasurementSet,
        feedback: Vec<CMatrix>,
    ) -> Result<Self> {
        if feedback.len() != set_a.outcome_count() {
            return Err(Error::InvalidInput(format!(
                "need one feedback unitary per outcome: {} vs {}",
                feedback.len(),
                set_a.outcome_count()
            )));
        }
        let dim_b = match feedback.first() {
            Some(u) => u.nrows(),
            None => return Err(Error::InvalidInput("empty feedback list".into())),
        };
        for u in &feedback {
            if u.dim() != (dim_b, dim_b) || !all_finite(u) {
                return Err(Error::InvalidInput("feedback operators must be square".into()));
            }
            let defect = frobenius_norm(&(adjoint(u).dot(u) - identity(dim_b)));
            if defect > UNITARITY_TOL {
                return Err(Error::InvalidInput(format!(
                    "feedback operator is not unitary: defect {defect:.3e}"
                )));
            }
        }
        let pairs = set_a
            .operators()
            .iter()
            .zip(feedback)
            .map(|(a, u)| (a.clone(), u))
            .collect();
        Self::from_pairs(set_a.dim(), dim_b, pairs)
    }

    fn from_pairs(
        dim_a: usize,
        dim_b: usize,
        pairs: Vec<(CMatrix, CMatrix)>,
    ) -> Result<Self> {
        let defect = joint_completeness_defect(&pairs, dim_a, dim_b);
        if defect > COMPLETENESS_TOL {
            return Err(Error::InvalidInput(format!(
                "pairing is not jointly complete: ‖Σ A†A ⊗ B†B − I‖ = {defect:.3e}; \
                 probabilities would not sum to 1"
            )));
        }
        Ok(Self { dim_a, dim_b, pairs })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn outcome_count(&self) -> usize {
        self.pairs.len()
    }

    /// Measures `psi`: outcome k has p_k = ‖(A_k ⊗ B_k)|ψ⟩‖² and post-state
    /// (A_k ⊗ B_k)|ψ⟩/√p_k. On the amplitude matrix the pair acts as
    /// A_k · C · B_kᵀ. Probabilities sum to 1 within [`COMPLETENESS_TOL`].
    pub fn apply(&self, psi: &PureState) -> Result<Vec<MeasurementOutcome>> {
        if psi.dim_a() != self.dim_a || psi.dim_b() != self.dim_b {
            return Err(Error::InvalidInput(format!(
                "instrument dims ({}, {}) do not match state dims ({}, {})",
                self.dim_a,
                self.dim_b,
                psi.dim_a(),
                psi.dim_b()
            )));
        }
        let c = psi.amplitudes();
        let mut outcomes = Vec::with_capacity(self.pairs.len());
        let mut total = 0.0;
        for (index, (a, b)) in self.pairs.iter().enumerate() {
            let mapped = a.dot(c).dot(&b.t());
            let probability = mapped.iter().map(|z| z.norm_sqr()).sum::<f64>();
            total += probability;
            let post_state = if probability > PROBABILITY_FLOOR {
                let scale = probability.sqrt();
                Some(
                    PureState::new(mapped.mapv(|z| z / scale))
                        .expect("rescaled outcome has unit norm"),
                )
            } else {
                None
            };
            outcomes.push(MeasurementOutcome { index, probability, post_state });
        }
        debug_assert!(
            (total - 1.0).abs() <= COMPLETENESS_TOL,
            "joint completeness guarantees Σp = 1, got {total}"
        );
        Ok(outcomes)
    }
}

fn joint_completeness_defect(
    pairs: &[(CMatrix, CMatrix)],
    dim_a: usize,
    dim_b: usize,
) -> f64 {
    // ‖Σ A_k†A_k ⊗ B_k†B_k − I‖_F, with the Kronecker sum formed entry by
    // entry. (The tempting expansion into traces cancels catastrophically:
    // the defect² of an exact instrument is ~1e-30 but arrives as a
    // difference of O(d·K²)-sized terms, leaving ~1e-15 of rounding noise
    // whose square root would dwarf any honest tolerance.)
    let d = dim_a * dim_b;
    let mut sum = identity(d).mapv(|z| -z);
    for (a, b) in pairs {
        let x = adjoint(a).dot(a);
        let y = adjoint(b).dot(b);
        for i in 0..dim_a {
            for ip in 0..dim_a {
                for j in 0..dim_b {
                    for jp in 0..dim_b {
                        sum[[i * dim_b + j, ip * dim_b + jp]] += x[[i, ip]] * y[[j, jp]];
                    }
                }
            }
        }
    }
    frobenius_norm(&sum)
}

/// Paired-index joint measurement of two instruments, per
/// [`PairedInstrument::from_sets`].
pub fn apply_lgm(
    psi: &PureState,
    set_a: &LocalMeasurementSet,
    set_b: &LocalMeasurementSet,
) -> Result<Vec<MeasurementOutcome>> {
    PairedInstrument::from_sets(set_a, set_b)?.apply(psi)
}

/// One entanglement-monotonicity data point.
#[derive(Debug, Clone)]
pub struct MonotonicityTrial {
    pub e_before: f64,
    pub outcomes: Vec<MeasurementOutcome>,
    /// Σ p_k · E(post_k); outcomes without a post-state contribute nothing.
    pub e_average_after: f64,
    /// e_before − e_average_after; nonnegative up to rounding when
    /// entanglement behaves as a monotone.
    pub margin: f64,
}

pub fn monotonicity_trial(
    psi: &PureState,
    set_a: &LocalMeasurementSet,
    set_b: &LocalMeasurementSet,
) -> Result<MonotonicityTrial> {
    monotonicity_trial_paired(psi, &PairedInstrument::from_sets(set_a, set_b)?)
}

/// Runs `instrument` on `psi` and compares entanglement before with the
/// probability-weighted average after (closed-form route on both sides).
pub fn monotonicity_trial_paired(
    psi: &PureState,
    instrument: &PairedInstrument,
) -> Result<MonotonicityTrial> {
    let e_before = entanglement_closed_form(schmidt_decompose(psi)?.lambdas())?;
    let outcomes = instrument.apply(psi)?;
    let mut e_average_after = 0.0;
    for outcome in &outcomes {
        if let Some(post) = &outcome.post_state {
            let e_post = entanglement_closed_form(schmidt_decompose(post)?.lambdas())?;
            e_average_after += outcome.probability * e_post;
        }
    }
    let margin = e_before - e_average_after;
    Ok(MonotonicityTrial { e_before, outcomes, e_average_after, margin })
}

/// Nielsen's criterion: ψ converts to φ deterministically under local
/// measurements plus classical communication iff λ(ψ) ≺ λ(φ). Schmidt
/// vectors of different lengths are zero-padded for the comparison.
pub fn locc_transformable(psi: &PureState, phi: &PureState) -> Result<bool> {
    let lp = schmidt_decompose(psi)?;
    let lf = schmidt_decompose(phi)?;
    majorizes(lp.lambdas(), lf.lambdas())
}
