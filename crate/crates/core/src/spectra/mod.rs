//! Matrix-free exact diagonalization: state vectors, compiled term
//! application, a dense oracle for small systems, and a block eigensolver
//! that resolves degenerate clusters.

mod dense;
mod lobpcg;
mod matvec;
mod state;

pub use dense::{dense_eigenvalues, dense_matrix};
pub use lobpcg::{lowest_eigs, lowest_eigs_lobpcg, SolveOptions};
pub use matvec::CompiledHamiltonian;
pub use state::{
    build_projected_state, matvec_state, state_from_group, StateVector, DEFAULT_STATE_CAP,
};

use serde::{Deserialize, Serialize};

/// Low-spectrum result with residuals and degeneracy clusters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Half-open index ranges `[start, end)` of degenerate clusters.
    pub clusters: Vec<(usize, usize)>,
    pub iterations: usize,
    pub matvecs: usize,
    pub converged: bool,
    pub cluster_tol: f64,
}

impl SpectrumReport {
    pub fn cluster_sizes(&self) -> Vec<usize> {
        self.clusters.iter().map(|(a, b)| b - a).collect()
    }
}

/// Groups ascending eigenvalues into clusters under a relative tolerance.
pub fn cluster_eigenvalues(eigs: &[f64], rel_tol: f64) -> Vec<(usize, usize)> {
    let mut clusters = Vec::new();
    if eigs.is_empty() {
        return clusters;
    }
    let mut start = 0;
    for i in 1..eigs.len() {
        let scale = eigs[i].abs().max(1.0);
        if (eigs[i] - eigs[i - 1]).abs() > rel_tol * scale {
            clusters.push((start, i));
            start = i;
        }
    }
    clusters.push((start, eigs.len()));
    clusters
}

/// Ground energy, its degeneracy, and the gap to the next cluster.
pub fn spectral_gap(report: &SpectrumReport) -> Option<(f64, usize, f64)> {
    let (a, b) = *report.clusters.first()?;
    let e0 = report.eigenvalues[a];
    if b >= report.eigenvalues.len() {
        return None;
    }
    Some((e0, b - a, report.eigenvalues[b] - e0))
}
