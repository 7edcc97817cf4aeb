//! Grouped eigendecompositions `H = Σ_a λ_a Π_a`.

use crate::dense::{self, OperatorMatrix};
use crate::error::{Error, Result};

/// Default grouping tolerance, relative to the spectral range.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;

/// Distinct eigenvalues with orthonormal bases of their eigenspaces.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    bases: Vec<OperatorMatrix>,
    degeneracy_tol: f64,
    dim: usize,
}

/// Cluster sorted eigenvalues; returns `(value, first index, count)` triples.
pub fn group_eigenvalues(sorted: &[f64], degeneracy_tol: f64) -> Vec<(f64, usize, usize)> {
    let range = match (sorted.first(), sorted.last()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => return Vec::new(),
    };
    let abs_tol = degeneracy_tol * range.max(1e-300);
    let mut groups: Vec<(f64, usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] > abs_tol {
            let mean = sorted[start..i].iter().sum::<f64>() / (i - start) as f64;
            groups.push((mean, start, i - start));
            start = i;
        }
    }
    groups
}

impl SpectralDecomposition {
    /// Diagonalize a Hermitian matrix and merge eigenvalues closer than
    /// `degeneracy_tol × (λ_max − λ_min)`.
    pub fn new(h: &OperatorMatrix, degeneracy_tol: f64) -> Result<Self> {
        let scale = h.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
        let defect = dense::hermiticity_defect(h);
        if defect > 1e-10 * scale {
            return Err(Error::NonHermitian(defect));
        }
        let (values, vectors) = dense::hermitian_eigen(h);
        let n = h.nrows();
        let mut eigenvalues = Vec::new();
        let mut bases = Vec::new();
        for (mean, start, count) in group_eigenvalues(&values, degeneracy_tol) {
            eigenvalues.push(mean);
            bases.push(vectors.columns(start, count).into_owned());
        }
        Ok(Self { eigenvalues, bases, degeneracy_tol, dim: n })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degeneracy_tol(&self) -> f64 {
        self.degeneracy_tol
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.ncols()).collect()
    }

    /// Orthonormal columns spanning the `a`-th eigenspace.
    pub fn basis(&self, a: usize) -> &OperatorMatrix {
        &self.bases[a]
    }

    pub fn projector(&self, a: usize) -> OperatorMatrix {
        &self.bases[a] * self.bases[a].adjoint()
    }

    pub fn projectors(&self) -> Vec<OperatorMatrix> {
        (0..self.len()).map(|a| self.projector(a)).collect()
    }

    pub fn ground_projector(&self) -> OperatorMatrix {
        self.projector(0)
    }

    /// `Σ_a λ_a Π_a`.
    pub fn reconstruct(&self) -> OperatorMatrix {
        let mut h = OperatorMatrix::zeros(self.dim, self.dim);
        for (a, &lambda) in self.eigenvalues.iter().enumerate() {
            h += self.projector(a) * dense::C64::new(lambda, 0.0);
        }
        h
    }

    /// Gap between the two lowest distinct eigenvalues.
    pub fn gap(&self) -> Option<f64> {
        (self.len() >= 2).then(|| self.eigenvalues[1] - self.eigenvalues[0])
    }

    /// Indices `a` whose projector overlaps `p` (`‖Π_a P‖ > 0.5`).
    pub fn sectors_overlapping(&self, p: &OperatorMatrix) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| {
                let overlap = self.bases[a].adjoint() * p;
                overlap.iter().map(|z| z.norm_sqr()).sum::<f64>() > 0.25
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{C64, ONE, ZERO};
    use crate::pauli::{Letter, PauliOperator};

    #[test]
    fn diagonal_grouping() {
        let h = OperatorMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, ONE, -ONE]));
        let d = SpectralDecomposition::new(&h, DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(d.eigenvalues(), &[-1.0, 1.0]);
        assert_eq!(d.multiplicities(), vec![1, 2]);
    }

    #[test]
    fn pauli_x_and_reconstruction() {
        let x = PauliOperator::single(1, 0, Letter::X).to_dense().unwrap();
        let d = SpectralDecomposition::new(&x, DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(d.multiplicities(), vec![1, 1]);
        assert!((d.reconstruct() - &x).norm() < 1e-12);
        let sum = d.projector(0) + d.projector(1);
        assert!((sum - dense::identity(2)).norm() < 1e-12);
        assert!((d.projector(0) * d.projector(1)).norm() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = OperatorMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]);
        assert!(matches!(SpectralDecomposition::new(&m, 1e-8), Err(Error::NonHermitian(_))));
        let y = OperatorMatrix::from_row_slice(2, 2, &[ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO]);
        assert!(SpectralDecomposition::new(&y, 1e-8).is_ok());
    }
}
