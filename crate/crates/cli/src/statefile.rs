//! Versioned JSON state files: dims plus row-major [re, im] amplitude
//! pairs (first factor slowest). Norm drift up to 1e-6 is renormalized on
//! load with a warning; anything worse is rejected.

use entangle_core::{bipartition, CMatrix, Complex64, PureState};
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::{map_core_error, CliError};

pub const FORMAT_VERSION: u32 = 1;

/// Norm drift accepted on load (renormalizing silently or with a warning).
pub const NORM_REJECT_TOL: f64 = 1e-6;

/// Norm drift above which the renormalization is worth a warning.
pub const NORM_WARN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub format_version: u32,
    pub dims: Vec<usize>,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_pure_state(psi: &PureState) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            dims: vec![psi.dim_a(), psi.dim_b()],
            amplitudes: psi.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    /// Reads and validates a state file, returning it alongside the raw
    /// bytes (for checksumming). Renormalizes drift up to [`NORM_REJECT_TOL`],
    /// warning on stderr when the drift exceeds [`NORM_WARN_TOL`].
    pub fn load(path: &Path) -> Result<(Self, Vec<u8>), CliError> {
        let raw = std::fs::read(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        let mut state: StateFile = serde_json::from_slice(&raw)
            .map_err(|e| CliError::Parse(format!("malformed state file {}: {e}", path.display())))?;
        state.validate(path)?;
        let norm = state
            .amplitudes
            .iter()
            .map(|[re, im]| re * re + im * im)
            .sum::<f64>()
            .sqrt();
        let drift = (norm - 1.0).abs();
        if drift > NORM_REJECT_TOL {
            return Err(CliError::Norm(format!(
                "state file {} has norm {norm:.9}, off by {drift:.3e} (limit {NORM_REJECT_TOL:.0e})",
                path.display()
            )));
        }
        if drift > NORM_WARN_TOL {
            eprintln!(
                "warning: state file norm off by {drift:.3e}; renormalizing on load"
            );
            for pair in &mut state.amplitudes {
                pair[0] /= norm;
                pair[1] /= norm;
            }
        }
        Ok((state, raw))
    }

    fn validate(&self, path: &Path) -> Result<(), CliError> {
        let name = path.display();
        if self.format_version != FORMAT_VERSION {
            return Err(CliError::Parse(format!(
                "{name}: unsupported format_version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        if self.dims.len() < 2 {
            return Err(CliError::Parse(format!(
                "{name}: dims must list at least two factors"
            )));
        }
        if self.dims.contains(&0) {
            return Err(CliError::Parse(format!("{name}: dims must all be ≥ 1")));
        }
        let expected: usize = self.dims.iter().product();
        if self.amplitudes.len() != expected {
            return Err(CliError::Parse(format!(
                "{name}: got {} amplitudes for dims {:?} (need {expected})",
                self.amplitudes.len(),
                self.dims
            )));
        }
        if self
            .amplitudes
            .iter()
            .any(|[re, im]| !re.is_finite() || !im.is_finite())
        {
            return Err(CliError::Parse(format!(
                "{name}: amplitudes must be finite"
            )));
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let mut bytes = serde_json::to_vec_pretty(self)
            .map_err(|e| CliError::Io(format!("cannot encode state file: {e}")))?;
        bytes.push(b'\n');
        std::fs::write(path, bytes)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
    }

    /// Builds the bipartite state this file describes. Two-factor files map
    /// directly; longer registers are cut along `part_a` (1-based factor
    /// indices), which is required exactly for them.
    pub fn to_pure_state(&self, part_a: Option<&[usize]>) -> Result<PureState, CliError> {
        let flat: Vec<Complex64> = self
            .amplitudes
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        if self.dims.len() == 2 {
            if part_a.is_some() {
                return Err(CliError::Parse(
                    "--part-a applies only to files with three or more factors".into(),
                ));
            }
            let matrix = CMatrix::from_shape_fn((self.dims[0], self.dims[1]), |(i, j)| {
                flat[i * self.dims[1] + j]
            });
            return PureState::from_unnormalized(matrix).map_err(map_core_error);
        }
        let part = part_a.ok_or_else(|| {
            CliError::Parse(format!(
                "this file has {} factors; choose a cut with --part-a (1-based indices)",
                self.dims.len()
            ))
        })?;
        let mut zero_based = Vec::with_capacity(part.len());
        for &idx in part {
            if idx == 0 || idx > self.dims.len() {
                return Err(CliError::Parse(format!(
                    "--part-a index {idx} out of range 1..={}",
                    self.dims.len()
                )));
            }
            zero_based.push(idx - 1);
        }
        bipartition(&flat, &self.dims, &zero_based).map_err(map_core_error)
    }
}

/// Parses a `--part-a` value like "1,3" into 1-based indices.
pub fn parse_part_a(text: &str) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            return Err(CliError::Parse("--part-a has an empty entry".into()));
        }
        let idx: usize = piece
            .parse()
            .map_err(|_| CliError::Parse(format!("--part-a entry '{piece}' is not a positive integer")))?;
        out.push(idx);
    }
    if out.is_empty() {
        return Err(CliError::Parse("--part-a needs at least one index".into()));
    }
    Ok(out)
}
