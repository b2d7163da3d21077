//! Bipartite pure-state entanglement toolkit.
//!
//! The pipeline: build a [`PureState`] on a dim_a × dim_b system (directly,
//! from a product, from Schmidt weights, at random, or by bipartitioning a
//! multi-factor register), run [`schmidt_decompose`] to get its Schmidt
//! weights and local bases, then quantify entanglement two independent ways:
//!
//! * [`entanglement_probability_sum`]: N/(2(N−1)) times the summed absolute
//!   difference between joint and product-of-marginal outcome probabilities
//!   in the Schmidt bases, and
//! * [`entanglement_closed_form`]: N/(N−1) · (1 − Σλ²),
//!
//! which agree on every state. The measure is 0 exactly on product states,
//! 1 exactly on maximally entangled ones, and never grows on average under
//! local measurements with classical communication; the [`locc`] module
//! provides the instruments ([`LocalMeasurementSet`], [`PairedInstrument`])
//! and the [`monotonicity_trial`] harness that exercises that guarantee,
//! plus the majorization test [`locc_transformable`] for deterministic
//! convertibility.
//!
//! Dense complex linear algebra (Jacobi SVD and Hermitian eigensolver) is
//! self-contained in [`linalg`]; no external LAPACK is required.

pub mod error;
pub mod linalg;
pub mod locc;
pub mod measures;
pub mod schmidt;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{
    adjoint, frobenius_norm, hermitian_eig, identity, svd, CMatrix, CVector, HermitianEig, Svd,
};
pub use locc::{
    apply_lgm, locc_transformable, monotonicity_trial, monotonicity_trial_paired,
    random_measurement_set, LocalMeasurementSet, MeasurementOutcome, MonotonicityTrial,
    PairedInstrument,
};
pub use measures::{
    entanglement_closed_form, entanglement_probability_sum, entanglement_report,
    entropy_of_entanglement, majorizes, power_sum, renyi2_entropy, two_entropy,
    EntanglementReport,
};
pub use schmidt::{
    correlation_matrix, probability_table, schmidt_decompose, separable_reference_state,
    CorrelationMatrix, ProbabilityTable, SchmidtDecomposition,
};
pub use states::{
    bipartition, product_state, random_pure_state, random_unitary, schmidt_diagonal_state,
    LocalVector, PureState, Subsystem,
};

pub use num_complex::Complex64;
