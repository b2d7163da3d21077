//! Bipartite pure states stored as amplitude matrices.
//!
//! A state |ψ⟩ on H_A ⊗ H_B with dim H_A = N and dim H_B = N′ lives here as
//! the N×N′ matrix C with ψ = Σ_{ij} C[i][j] |i⟩⊗|j⟩. Neither ordering of
//! N and N′ is privileged. Construction renormalizes exactly, so everything
//! downstream can rely on ‖C‖_F = 1.

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{adjoint, all_finite, frobenius_norm, identity, CMatrix, CVector};

/// Largest accepted deviation of an input norm from 1.
pub const NORM_TOL: f64 = 1e-9;

/// Largest accepted unitarity defect ‖U†U − I‖_F for local unitaries.
pub const UNITARITY_TOL: f64 = 1e-9;

/// Which marginal of a bipartite state to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A normalized bipartite pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CMatrix,
}

impl PureState {
    /// Wraps an amplitude matrix whose norm is already 1 within [`NORM_TOL`],
    /// renormalizing exactly.
    pub fn new(amplitudes: CMatrix) -> Result<Self> {
        let (rows, cols) = amplitudes.dim();
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput("state dimensions must be ≥ 1".into()));
        }
        if !all_finite(&amplitudes) {
            return Err(Error::InvalidInput("state has non-finite amplitudes".into()));
        }
        let norm = frobenius_norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidInput(format!(
                "state norm {norm} deviates from 1 by more than {NORM_TOL:e}"
            )));
        }
        Ok(Self { amplitudes: amplitudes.mapv(|z| z / norm) })
    }

    /// Wraps an amplitude matrix of any nonzero norm, normalizing it.
    pub fn from_unnormalized(amplitudes: CMatrix) -> Result<Self> {
        let (rows, cols) = amplitudes.dim();
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput("state dimensions must be ≥ 1".into()));
        }
        if !all_finite(&amplitudes) {
            return Err(Error::InvalidInput("state has non-finite amplitudes".into()));
        }
        let norm = frobenius_norm(&amplitudes);
        if norm < 1e-12 {
            return Err(Error::InvalidInput(
                "cannot normalize a (near-)zero amplitude matrix".into(),
            ));
        }
        Ok(Self { amplitudes: amplitudes.mapv(|z| z / norm) })
    }

    pub fn dim_a(&self) -> usize {
        self.amplitudes.nrows()
    }

    pub fn dim_b(&self) -> usize {
        self.amplitudes.ncols()
    }

    pub fn amplitudes(&self) -> &CMatrix {
        &self.amplitudes
    }

    /// ⟨self|other⟩. Errors if the dimensions differ.
    pub fn overlap(&self, other: &PureState) -> Result<Complex64> {
        if self.amplitudes.dim() != other.amplitudes.dim() {
            return Err(Error::InvalidInput("overlap of states with different dims".into()));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// New state `u_a · C · u_b^T`; both matrices must be unitary within
    /// [`UNITARITY_TOL`]. The transpose on the B side makes the map act as
    /// U_A ⊗ U_B on the underlying ket.
    pub fn apply_local_unitaries(&self, u_a: &CMatrix, u_b: &CMatrix) -> Result<PureState> {
        check_unitary(u_a, self.dim_a(), "u_a")?;
        check_unitary(u_b, self.dim_b(), "u_b")?;
        let c = u_a.dot(&self.amplitudes).dot(&u_b.t());
        PureState::new(c)
    }

    /// Reduced density matrix of one side: C·C† for A, Cᵀ·C̄ for B.
    pub fn reduced_density_matrix(&self, subsystem: Subsystem) -> CMatrix {
        let c = &self.amplitudes;
        match subsystem {
            Subsystem::A => c.dot(&adjoint(c)),
            Subsystem::B => c.t().dot(&c.mapv(|z| z.conj())),
        }
    }
}

fn check_unitary(u: &CMatrix, dim: usize, name: &str) -> Result<()> {
    if u.dim() != (dim, dim) {
        return Err(Error::InvalidInput(format!(
            "{name} must be {dim}×{dim}, got {}×{}",
            u.nrows(),
            u.ncols()
        )));
    }
    if !all_finite(u) {
        return Err(Error::InvalidInput(format!("{name} has non-finite entries")));
    }
    let defect = frobenius_norm(&(adjoint(u).dot(u) - identity(dim)));
    if defect > UNITARITY_TOL {
        return Err(Error::InvalidInput(format!(
            "{name} is not unitary: ‖U†U − I‖ = {defect:.3e}"
        )));
    }
    Ok(())
}

/// A normalized single-subsystem vector.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalVector {
    amplitudes: CVector,
}

impl LocalVector {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidInput("local vector must have dim ≥ 1".into()));
        }
        if !amplitudes.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidInput("local vector has non-finite entries".into()));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidInput(format!(
                "local vector norm {norm} deviates from 1 by more than {NORM_TOL:e}"
            )));
        }
        Ok(Self { amplitudes: amplitudes.mapv(|z| z / norm) })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }
}

/// |φ_A⟩ ⊗ |φ_B⟩ as a bipartite state: amplitudes[i][j] = φ_A[i]·φ_B[j].
pub fn product_state(phi_a: &LocalVector, phi_b: &LocalVector) -> PureState {
    let a = phi_a.amplitudes();
    let b = phi_b.amplitudes();
    let c = Array2::from_shape_fn((a.len(), b.len()), |(i, j)| a[i] * b[j]);
    PureState::new(c).expect("product of unit vectors is normalized")
}

/// The state Σ_i √λ_i |i⟩⊗|i⟩ with a diagonal amplitude matrix.
pub fn schmidt_diagonal_state(lambdas: &[f64]) -> Result<PureState> {
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
    let n = lambdas.len();
    let mut c = Array2::from_elem((n, n), Complex64::new(0.0, 0.0));
    for (i, &l) in lambdas.iter().enumerate() {
        c[[i, i]] = Complex64::new(l.sqrt(), 0.0);
    }
    PureState::new(c)
}

/// Haar-uniform random state: i.i.d. complex-normal amplitudes, normalized.
/// The same seed always yields bit-identical amplitudes.
pub fn random_pure_state(dim_a: usize, dim_b: usize, seed: u64) -> PureState {
    assert!(dim_a >= 1 && dim_b >= 1, "state dimensions must be ≥ 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_pure_state_from(dim_a, dim_b, &mut rng)
}

pub(crate) fn random_pure_state_from(
    dim_a: usize,
    dim_b: usize,
    rng: &mut ChaCha8Rng,
) -> PureState {
    loop {
        let c = ginibre(dim_a, dim_b, rng);
        // A zero draw has probability zero but would break normalization.
        if let Ok(state) = PureState::from_unnormalized(c) {
            return state;
        }
    }
}

/// Haar-distributed random unitary, seed-deterministic.
///
/// Gram-Schmidt (two passes, for orthogonality at machine precision) applied
/// to a complex Ginibre matrix; the positive-diagonal convention of the
/// implicit QR makes the result exactly Haar.
pub fn random_unitary(dim: usize, seed: u64) -> CMatrix {
    assert!(dim >= 1, "unitary dimension must be ≥ 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_unitary_from(dim, &mut rng)
}

pub(crate) fn random_unitary_from(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    loop {
        let mut q = ginibre(dim, dim, rng);
        if orthonormalize_columns(&mut q) {
            return q;
        }
    }
}

pub(crate) fn ginibre(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    Array2::from_shape_fn((rows, cols), |_| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// In-place modified Gram-Schmidt with re-orthogonalization. Returns false
/// if a column degenerates (numerically dependent columns).
fn orthonormalize_columns(m: &mut CMatrix) -> bool {
    let (rows, cols) = m.dim();
    for j in 0..cols {
        for _ in 0..2 {
            for k in 0..j {
                let proj: Complex64 = (0..rows).map(|i| m[[i, k]].conj() * m[[i, j]]).sum();
                for i in 0..rows {
                    let mk = m[[i, k]];
                    m[[i, j]] -= proj * mk;
                }
            }
        }
        let norm = (0..rows).map(|i| m[[i, j]].norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return false;
        }
        for i in 0..rows {
            m[[i, j]] /= norm;
        }
    }
    true
}

/// Regroups a normalized multi-factor tensor (row-major, factor 1 slowest)
/// into a bipartite state. `part_a` lists the 0-based factors that form the
/// A side; the complement forms B. Within each side, factors keep their
/// original order.
pub fn bipartition(
    amplitudes: &[Complex64],
    dims: &[usize],
    part_a: &[usize],
) -> Result<PureState> {
    if dims.is_empty() {
        return Err(Error::InvalidInput("need at least one factor dimension".into()));
    }
    if dims.contains(&0) {
        return Err(Error::InvalidInput("factor dimensions must be ≥ 1".into()));
    }
    let total: usize = dims.iter().product();
    if amplitudes.len() != total {
        return Err(Error::InvalidInput(format!(
            "amplitude count {} does not match product of dims {}",
            amplitudes.len(),
            total
        )));
    }
    if part_a.is_empty() {
        return Err(Error::InvalidPartition("part A must not be empty".into()));
    }
    if part_a.len() >= dims.len() {
        return Err(Error::InvalidPartition("part A must be a proper subset".into()));
    }
    let mut seen = vec![false; dims.len()];
    for &f in part_a {
        if f >= dims.len() {
            return Err(Error::InvalidPartition(format!(
                "factor index {f} out of range for {} factors",
                dims.len()
            )));
        }
        if seen[f] {
            return Err(Error::InvalidPartition(format!("factor index {f} repeated")));
        }
        seen[f] = true;
    }

    let factors_a: Vec<usize> = (0..dims.len()).filter(|&f| seen[f]).collect();
    let factors_b: Vec<usize> = (0..dims.len()).filter(|&f| !seen[f]).collect();
    let dim_a: usize = factors_a.iter().map(|&f| dims[f]).product();
    let dim_b: usize = factors_b.iter().map(|&f| dims[f]).product();

    // stride[f] = product of dims of the factors after f (row-major layout).
    let mut stride = vec![1usize; dims.len()];
    for f in (0..dims.len().saturating_sub(1)).rev() {
        stride[f] = stride[f + 1] * dims[f + 1];
    }

    let mut c = Array2::from_elem((dim_a, dim_b), Complex64::new(0.0, 0.0));
    for (flat, &amp) in amplitudes.iter().enumerate() {
        let mut row = 0;
        for &f in &factors_a {
            row = row * dims[f] + (flat / stride[f]) % dims[f];
        }
        let mut col = 0;
        for &f in &factors_b {
            col = col * dims[f] + (flat / stride[f]) % dims[f];
        }
        c[[row, col]] = amp;
    }
    PureState::new(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::trace;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn purity_a(psi: &PureState) -> f64 {
        let rho = psi.reduced_density_matrix(Subsystem::A);
        frobenius_norm(&rho).powi(2)
    }

    #[test]
    fn construction_renormalizes_exactly() {
        let c0 = array![[c(0.6, 0.0), c(0.8 + 3e-10, 0.0)]];
        let psi = PureState::new(c0).unwrap();
        assert!((frobenius_norm(psi.amplitudes()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn construction_rejects_bad_norm_and_nan() {
        let c0 = array![[c(0.6, 0.0), c(0.9, 0.0)]];
        assert!(matches!(PureState::new(c0), Err(Error::InvalidInput(_))));
        let c1 = array![[c(f64::NAN, 0.0), c(1.0, 0.0)]];
        assert!(matches!(PureState::new(c1), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn product_state_of_basis_kets() {
        let a = LocalVector::new(array![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let b = LocalVector::new(array![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let psi = product_state(&a, &b);
        assert_eq!(psi.amplitudes()[[0, 0]], c(0.0, 0.0));
        assert_eq!(psi.amplitudes()[[1, 1]], c(1.0, 0.0));
    }

    #[test]
    fn product_state_balanced_case() {
        let h = 0.5f64.sqrt();
        let v = LocalVector::new(array![c(h, 0.0), c(h, 0.0)]).unwrap();
        let psi = product_state(&v, &v);
        for i in 0..2 {
            for j in 0..2 {
                assert!((psi.amplitudes()[[i, j]] - c(0.5, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn schmidt_diagonal_state_layouts() {
        let psi = schmidt_diagonal_state(&[0.5, 0.3, 0.2]).unwrap();
        assert_eq!(psi.dim_a(), 3);
        assert!((psi.amplitudes()[[1, 1]].re - 0.3f64.sqrt()).abs() < 1e-15);
        assert_eq!(psi.amplitudes()[[0, 1]], c(0.0, 0.0));

        let product = schmidt_diagonal_state(&[1.0, 0.0]).unwrap();
        assert_eq!(product.amplitudes()[[0, 0]], c(1.0, 0.0));

        assert!(schmidt_diagonal_state(&[0.7, 0.4]).is_err());
        assert!(schmidt_diagonal_state(&[1.1, -0.1]).is_err());
    }

    #[test]
    fn random_state_is_deterministic_and_normalized() {
        let x = random_pure_state(3, 5, 42);
        let y = random_pure_state(3, 5, 42);
        assert_eq!(x.amplitudes(), y.amplitudes());
        assert!((frobenius_norm(x.amplitudes()) - 1.0).abs() < 1e-12);
        let z = random_pure_state(3, 5, 43);
        assert_ne!(x.amplitudes(), z.amplitudes());
    }

    #[test]
    fn random_unitary_is_unitary_and_deterministic() {
        for dim in [1, 2, 5] {
            let u = random_unitary(dim, 9);
            let defect = max_abs(&(adjoint(&u).dot(&u) - identity(dim)));
            assert!(defect < 1e-13, "defect {defect:e} at dim {dim}");
        }
        assert_eq!(random_unitary(4, 1), random_unitary(4, 1));
    }

    #[test]
    fn local_unitaries_preserve_reduced_spectrum() {
        let psi = random_pure_state(4, 3, 7);
        let u = random_unitary(4, 70);
        let v = random_unitary(3, 71);
        let phi = psi.apply_local_unitaries(&u, &v).unwrap();
        let e0 = crate::linalg::hermitian_eig(&psi.reduced_density_matrix(Subsystem::A))
            .unwrap()
            .eigenvalues;
        let e1 = crate::linalg::hermitian_eig(&phi.reduced_density_matrix(Subsystem::A))
            .unwrap()
            .eigenvalues;
        for (a, b) in e0.iter().zip(e1.iter()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn identity_unitaries_leave_state_unchanged() {
        let psi = random_pure_state(2, 2, 3);
        let phi = psi.apply_local_unitaries(&identity(2), &identity(2)).unwrap();
        assert!(max_abs(&(phi.amplitudes() - psi.amplitudes())) < 1e-15);
    }

    #[test]
    fn non_unitary_input_is_rejected() {
        let psi = random_pure_state(2, 2, 3);
        let bad = array![[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]];
        assert!(matches!(
            psi.apply_local_unitaries(&bad, &identity(2)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn reduced_density_matrices_have_unit_trace_and_shared_spectrum() {
        let psi = random_pure_state(3, 6, 11);
        let rho_a = psi.reduced_density_matrix(Subsystem::A);
        let rho_b = psi.reduced_density_matrix(Subsystem::B);
        assert!((trace(&rho_a).re - 1.0).abs() < 1e-10);
        assert!((trace(&rho_b).re - 1.0).abs() < 1e-10);
        assert!(trace(&rho_a).im.abs() < 1e-12);
        let ea = crate::linalg::hermitian_eig(&rho_a).unwrap().eigenvalues;
        let eb = crate::linalg::hermitian_eig(&rho_b).unwrap().eigenvalues;
        // B has 3 extra zero eigenvalues; the leading ones must agree.
        for (a, b) in ea.iter().zip(eb.iter()) {
            assert!((a - b).abs() < 1e-9);
        }
        for &b in &eb[3..] {
            assert!(b.abs() < 1e-9);
        }
    }

    #[test]
    fn bell_state_marginal_is_maximally_mixed() {
        let psi = schmidt_diagonal_state(&[0.5, 0.5]).unwrap();
        let rho = psi.reduced_density_matrix(Subsystem::A);
        assert!(max_abs(&(rho - identity(2).mapv(|z| 0.5 * z))) < 1e-15);
    }

    #[test]
    fn product_state_marginal_is_rank_one() {
        let a = LocalVector::new(array![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let b = LocalVector::new(array![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let rho = product_state(&a, &b).reduced_density_matrix(Subsystem::A);
        // ρ_A = |φ_A⟩⟨φ_A| exactly.
        assert!((rho[[0, 0]].re - 0.36).abs() < 1e-15);
        assert!((rho[[1, 1]].re - 0.64).abs() < 1e-15);
        assert!((rho[[0, 1]] - c(0.0, -0.48)).norm() < 1e-15);
    }

    #[test]
    fn bipartition_of_ghz_like_state() {
        let h = 0.5f64.sqrt();
        let mut amps = vec![c(0.0, 0.0); 8];
        amps[0] = c(h, 0.0); // |000⟩
        amps[7] = c(h, 0.0); // |111⟩
        let psi = bipartition(&amps, &[2, 2, 2], &[1]).unwrap();
        assert_eq!((psi.dim_a(), psi.dim_b()), (2, 4));
        let rho = psi.reduced_density_matrix(Subsystem::A);
        assert!((rho[[0, 0]].re - 0.5).abs() < 1e-12);
        assert!((rho[[1, 1]].re - 0.5).abs() < 1e-12);
        assert!(rho[[0, 1]].norm() < 1e-12);
    }

    #[test]
    fn bipartition_of_w_like_state() {
        let t = (1.0f64 / 3.0).sqrt();
        let mut amps = vec![c(0.0, 0.0); 8];
        amps[0b001] = c(t, 0.0);
        amps[0b010] = c(t, 0.0);
        amps[0b100] = c(t, 0.0);
        let psi = bipartition(&amps, &[2, 2, 2], &[0]).unwrap();
        let eig = crate::linalg::hermitian_eig(&psi.reduced_density_matrix(Subsystem::A))
            .unwrap()
            .eigenvalues;
        assert!((eig[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((eig[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn bipartition_groups_factors_in_original_order() {
        // Three factors of distinct dims so index bookkeeping shows up.
        let dims = [2usize, 3, 2];
        let total: usize = dims.iter().product();
        let norm = (total as f64).sqrt();
        let amps: Vec<Complex64> =
            (0..total).map(|k| c((k as f64 + 1.0) / norm, 0.0)).collect();
        let scale: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let amps: Vec<Complex64> = amps.iter().map(|z| z / scale.sqrt()).collect();
        let psi = bipartition(&amps, &dims, &[0, 2]).unwrap();
        assert_eq!((psi.dim_a(), psi.dim_b()), (4, 3));
        // Factor order inside A is (0, 2): row = i0*2 + i2, col = i1.
        // flat index = i0*6 + i1*2 + i2.
        #[allow(clippy::identity_op)]
        let flat = 1 * 6 + 2 * 2 + 1 * 1;
        assert!((psi.amplitudes()[[3, 2]] - amps[flat]).norm() < 1e-15);
    }

    #[test]
    fn bipartition_rejects_bad_subsets() {
        let amps = vec![c(0.5, 0.0); 4];
        assert!(matches!(
            bipartition(&amps, &[2, 2], &[]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            bipartition(&amps, &[2, 2], &[0, 1]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            bipartition(&amps, &[2, 2], &[2]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            bipartition(&amps, &[2, 2], &[0, 0]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            bipartition(&amps, &[2, 2, 2], &[0]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn mean_reduced_purity_matches_haar_average() {
        // For Haar-random 2×2 states the expected purity of a marginal is
        // (m + n)/(m·n + 1) = 0.8; check the generator reproduces it.
        let samples = 10_000;
        let mean = (0..samples)
            .map(|seed| purity_a(&random_pure_state(2, 2, seed)))
            .sum::<f64>()
            / samples as f64;
        assert!(
            (mean - 0.8).abs() < 0.01,
            "mean purity {mean} outside 0.8 ± 0.01"
        );
    }
}
