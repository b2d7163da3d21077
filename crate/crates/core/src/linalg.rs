//! Dense complex linear algebra for small matrices (dims up to ~64).
//!
//! Everything here is deterministic: the same input bits always produce the
//! same output bits, with no dependence on threading or BLAS backends. The
//! SVD uses one-sided Jacobi rotations and the Hermitian eigensolver uses
//! two-sided (cyclic) Jacobi rotations; both are simple, numerically robust
//! at these sizes, and converge in a handful of sweeps.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = Array2<Complex64>;
pub type CVector = Array1<Complex64>;

/// Relative threshold below which a column pair counts as orthogonal.
const JACOBI_TOL: f64 = 1e-14;

/// Singular values at or below `‖C‖_F · RANK_TOL` get a synthesized left
/// singular vector; the raw column direction is rounding noise at that scale.
const RANK_TOL: f64 = 1e-14;

/// Hermiticity slack accepted by [`hermitian_eig`], relative to ‖M‖_F.
pub const HERMITICITY_TOL: f64 = 1e-9;

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn adjoint(m: &CMatrix) -> CMatrix {
    m.t().mapv(|z| z.conj())
}

pub fn identity(n: usize) -> CMatrix {
    Array2::eye(n)
}

pub fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diag().sum()
}

/// Thin singular value decomposition `C = U · diag(sigma) · V†`.
///
/// With `k = min(rows, cols)`: `u` is rows×k, `v` is cols×k, both with
/// orthonormal columns, and `sigma` holds the k singular values sorted
/// descending. Ties keep their pre-sort order, so the output is reproducible.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

/// Eigendecomposition of a Hermitian matrix, `M = V · diag(e) · V†`.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Real eigenvalues, sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors, one per column, matching `eigenvalues`.
    pub eigenvectors: CMatrix,
}

/// One-sided Jacobi SVD.
///
/// Rotates column pairs of a working copy until all pairs are orthogonal
/// relative to their sizes, then reads off `sigma` as the column norms.
/// Fails with [`Error::InvalidInput`] on non-finite or empty input and with
/// [`Error::NumericalFailure`] if the sweep cap (100·max(rows, cols)) is hit,
/// which does not happen for the matrix sizes this crate targets.
pub fn svd(c: &CMatrix) -> Result<Svd> {
    let (rows, cols) = c.dim();
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidInput("svd of an empty matrix".into()));
    }
    if !all_finite(c) {
        return Err(Error::InvalidInput("svd input has non-finite entries".into()));
    }
    if rows < cols {
        // Work on the adjoint and swap factors: C† = V Σ U†.
        let Svd { u, sigma, v } = svd(&adjoint(c))?;
        return Ok(Svd { u: v, sigma, v: u });
    }

    let m = rows;
    let n = cols;
    let mut a = c.clone();
    let mut v = identity(n);
    let max_sweeps = 100 * m.max(n);

    let mut converged = false;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex64::new(0.0, 0.0);
                for i in 0..m {
                    let ap = a[[i, p]];
                    let aq = a[[i, q]];
                    alpha += ap.norm_sqr();
                    beta += aq.norm_sqr();
                    gamma += ap.conj() * aq;
                }
                let g = gamma.norm();
                if g <= JACOBI_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Diagonalize the 2×2 Gram matrix [[alpha, gamma], [conj, beta]]:
                // strip the phase of gamma, then apply a real Jacobi rotation.
                let w = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let cos = 1.0 / (1.0 + t * t).sqrt();
                let sin = cos * t;
                for i in 0..m {
                    let ap = a[[i, p]];
                    let aq = a[[i, q]];
                    a[[i, p]] = cos * ap - sin * (w * aq);
                    a[[i, q]] = sin * ap + cos * (w * aq);
                }
                for i in 0..n {
                    let vp = v[[i, p]];
                    let vq = v[[i, q]];
                    v[[i, p]] = cos * vp - sin * (w * vq);
                    v[[i, q]] = sin * vp + cos * (w * vq);
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(format!(
            "svd did not converge within {max_sweeps} sweeps"
        )));
    }

    let norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| a[[i, j]].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).expect("finite norms"));

    let scale = frobenius_norm(c);
    let mut u = Array2::from_elem((m, n), Complex64::new(0.0, 0.0));
    let mut v_sorted = Array2::from_elem((n, n), Complex64::new(0.0, 0.0));
    let mut sigma = Vec::with_capacity(n);
    let mut deferred = Vec::new();
    for (j, &src) in order.iter().enumerate() {
        sigma.push(norms[src]);
        for i in 0..n {
            v_sorted[[i, j]] = v[[i, src]];
        }
        if norms[src] > scale * RANK_TOL {
            for i in 0..m {
                u[[i, j]] = a[[i, src]] / norms[src];
            }
        } else {
            deferred.push(j);
        }
    }
    for &j in &deferred {
        fill_orthonormal_column(&mut u, j, &deferred);
    }

    Ok(Svd { u, sigma, v: v_sorted })
}

/// Replaces column `j` of `u` with a unit vector orthogonal to all columns
/// not listed in `pending` plus any already-filled pending columns before `j`.
fn fill_orthonormal_column(u: &mut CMatrix, j: usize, pending: &[usize]) {
    let (m, n) = u.dim();
    let occupied: Vec<usize> = (0..n)
        .filter(|&k| k != j && !(pending.contains(&k) && k > j))
        .collect();
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for e in 0..m {
        let mut w = vec![Complex64::new(0.0, 0.0); m];
        w[e] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for &k in &occupied {
                let proj: Complex64 =
                    (0..m).map(|i| u[[i, k]].conj() * w[i]).sum();
                for i in 0..m {
                    w[i] -= proj * u[[i, k]];
                }
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if best.as_ref().is_none_or(|(b, _)| norm > *b) {
            best = Some((norm, w));
        }
    }
    let (norm, w) = best.expect("at least one basis candidate");
    for i in 0..m {
        u[[i, j]] = w[i] / norm;
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Accepts input with ‖M − M†‖_F ≤ 1e-9·‖M‖_F (rejects anything worse),
/// symmetrizes it, and rotates off-diagonal entries away until they fall
/// below 1e-15·‖M‖_F. Eigenvalues come back sorted descending with the same
/// stable tie order as [`svd`].
pub fn hermitian_eig(m: &CMatrix) -> Result<HermitianEig> {
    let (rows, cols) = m.dim();
    if rows == 0 || rows != cols {
        return Err(Error::InvalidInput(format!(
            "hermitian_eig needs a nonempty square matrix, got {rows}×{cols}"
        )));
    }
    if !all_finite(m) {
        return Err(Error::InvalidInput(
            "hermitian_eig input has non-finite entries".into(),
        ));
    }
    let n = rows;
    let fro = frobenius_norm(m);
    let defect = frobenius_norm(&(m - &adjoint(m)));
    if defect > HERMITICITY_TOL * fro {
        return Err(Error::InvalidInput(format!(
            "matrix is not Hermitian: ‖M − M†‖ = {defect:.3e} exceeds {HERMITICITY_TOL:e}·‖M‖"
        )));
    }

    let mut h = (m + &adjoint(m)).mapv(|z| 0.5 * z);
    let mut v = identity(n);
    let thresh = 1e-15 * fro;
    let max_sweeps = 100 * n;

    let mut converged = false;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let hpq = h[[p, q]];
                let g = hpq.norm();
                if g <= thresh {
                    continue;
                }
                rotated = true;
                let phase = hpq / g;
                let w = phase.conj();
                let zeta = (h[[q, q]].re - h[[p, p]].re) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let cos = 1.0 / (1.0 + t * t).sqrt();
                let sin = cos * t;
                // H ← R† H R with R acting on columns p, q.
                for i in 0..n {
                    let xp = h[[i, p]];
                    let xq = h[[i, q]];
                    h[[i, p]] = cos * xp - sin * (w * xq);
                    h[[i, q]] = sin * xp + cos * (w * xq);
                }
                for j in 0..n {
                    let xp = h[[p, j]];
                    let xq = h[[q, j]];
                    h[[p, j]] = cos * xp - sin * (phase * xq);
                    h[[q, j]] = sin * xp + cos * (phase * xq);
                }
                h[[p, q]] = Complex64::new(0.0, 0.0);
                h[[q, p]] = Complex64::new(0.0, 0.0);
                h[[p, p]] = Complex64::new(h[[p, p]].re, 0.0);
                h[[q, q]] = Complex64::new(h[[q, q]].re, 0.0);
                for i in 0..n {
                    let vp = v[[i, p]];
                    let vq = v[[i, q]];
                    v[[i, p]] = cos * vp - sin * (w * vq);
                    v[[i, q]] = sin * vp + cos * (w * vq);
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(format!(
            "hermitian_eig did not converge within {max_sweeps} sweeps"
        )));
    }

    let diag: Vec<f64> = (0..n).map(|i| h[[i, i]].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| diag[y].partial_cmp(&diag[x]).expect("finite eigenvalues"));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = Array2::from_elem((n, n), Complex64::new(0.0, 0.0));
    for (j, &src) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[[i, j]] = v[[i, src]];
        }
    }
    Ok(HermitianEig { eigenvalues, eigenvectors })
}
