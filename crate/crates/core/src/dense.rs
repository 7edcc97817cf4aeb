//! Dense complex matrices and the handful of linear-algebra routines the rest
//! of the crate needs: Kronecker products, norms, partial traces, Hermitian
//! eigensolves and matrix exponentials.
//!
//! Basis convention: qubit 0 is the leftmost Kronecker factor, so it maps to
//! the most significant bit of a basis index.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type OperatorMatrix = DMatrix<C64>;
pub type StateVector = DVector<C64>;

/// Largest register that is realized as a dense matrix unless the caller
/// configures otherwise.
pub const DEFAULT_DENSE_LIMIT: usize = 14;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn check_dense_limit(qubits: usize, limit: usize) -> Result<()> {
    if qubits > limit {
        Err(Error::DenseLimit { qubits, limit })
    } else {
        Ok(())
    }
}

pub fn identity(dim: usize) -> OperatorMatrix {
    OperatorMatrix::identity(dim, dim)
}

pub fn kron(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    a.kronecker(b)
}

pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    a * b - b * a
}

/// `‖A − A†‖`, measured entrywise by the largest magnitude.
pub fn hermiticity_defect(a: &OperatorMatrix) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..=j {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn is_real(a: &OperatorMatrix, tol: f64) -> bool {
    a.iter().all(|z| z.im.abs() <= tol)
}

// nalgebra's `symmetric_eigen` can return eigenvectors that do not
// diagonalize degenerate inputs, so all eigensolves go through faer.
fn to_faer(h: &OperatorMatrix) -> faer::Mat<C64> {
    faer::Mat::from_fn(h.nrows(), h.ncols(), |r, c| h[(r, c)])
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors of a
/// Hermitian matrix. Real symmetric input takes the cheaper real path.
pub fn hermitian_eigen(h: &OperatorMatrix) -> (Vec<f64>, OperatorMatrix) {
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), OperatorMatrix::zeros(0, 0));
    }
    let (values, vectors): (Vec<f64>, OperatorMatrix) = if is_real(h, 0.0) {
        let re = faer::Mat::<f64>::from_fn(n, n, |r, c| h[(r, c)].re);
        let eig = re.self_adjoint_eigen(faer::Side::Lower).expect("symmetric eigensolver converged");
        let (u, s) = (eig.U(), eig.S());
        ((0..n).map(|i| s[i]).collect(), OperatorMatrix::from_fn(n, n, |r, c| C64::new(u[(r, c)], 0.0)))
    } else {
        let eig = to_faer(h).self_adjoint_eigen(faer::Side::Lower).expect("Hermitian eigensolver converged");
        let (u, s) = (eig.U(), eig.S());
        ((0..n).map(|i| s[i].re).collect(), OperatorMatrix::from_fn(n, n, |r, c| u[(r, c)]))
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = OperatorMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    (sorted_values, sorted_vectors)
}

pub fn hermitian_eigenvalues(h: &OperatorMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = if is_real(h, 0.0) {
        faer::Mat::<f64>::from_fn(h.nrows(), h.ncols(), |r, c| h[(r, c)].re)
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .expect("symmetric eigensolver converged")
    } else {
        to_faer(h)
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .expect("Hermitian eigensolver converged")
    };
    values.sort_by(f64::total_cmp);
    values
}

/// Largest singular value.
///
/// Below `1e-13` the Frobenius norm (an upper bound) is returned as is.
/// Matrices wider than 64 go through the eigenvalues of `A†A`.
pub fn spectral_norm(a: &OperatorMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let frobenius = a.norm();
    if frobenius <= 1e-13 {
        return frobenius;
    }
    if a.nrows().min(a.ncols()) > 64 {
        let gram = a.adjoint() * a;
        return hermitian_eigenvalues(&gram).last().copied().unwrap_or(0.0).max(0.0).sqrt();
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Spectral norm of a Hermitian matrix via its eigenvalues.
pub fn hermitian_norm(h: &OperatorMatrix) -> f64 {
    hermitian_eigenvalues(h).iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Sum of singular values.
pub fn trace_norm(a: &OperatorMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().svd(false, false).singular_values.iter().sum()
}

/// `exp(−i·h·t)` for Hermitian `h`, through its eigendecomposition.
pub fn exp_hermitian(h: &OperatorMatrix, t: f64) -> OperatorMatrix {
    let (values, vectors) = hermitian_eigen(h);
    let mut scaled = vectors.clone();
    for (c, &lambda) in values.iter().enumerate() {
        let phase = C64::from_polar(1.0, -lambda * t);
        for r in 0..scaled.nrows() {
            scaled[(r, c)] *= phase;
        }
    }
    scaled * vectors.adjoint()
}

/// General matrix exponential by scaling and squaring of a Taylor series.
///
/// Independent of any eigensolver, which makes it a useful cross-check for
/// [`exp_hermitian`].
pub fn expm(a: &OperatorMatrix) -> OperatorMatrix {
    let n = a.nrows();
    let norm1 = (0..n)
        .map(|c| a.column(c).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 { (norm1 / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a / C64::new(2f64.powi(squarings), 0.0);
    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..=30 {
        term = &term * &scaled / C64::new(k as f64, 0.0);
        result += &term;
        if term.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Trace out every qubit not listed in `keep`. `rho` acts on `num_qubits`
/// qubits; the result acts on the kept qubits in ascending order.
pub fn partial_trace(rho: &OperatorMatrix, num_qubits: usize, keep: &[usize]) -> OperatorMatrix {
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    let traced: Vec<usize> = (0..num_qubits).filter(|q| !keep_sorted.contains(q)).collect();
    let kept_dim = 1usize << keep_sorted.len();
    let traced_dim = 1usize << traced.len();
    let bit = |q: usize| 1usize << (num_qubits - 1 - q);
    let compose = |kept_index: usize, traced_index: usize| -> usize {
        let mut full = 0usize;
        for (pos, &q) in keep_sorted.iter().enumerate() {
            if kept_index >> (keep_sorted.len() - 1 - pos) & 1 == 1 {
                full |= bit(q);
            }
        }
        for (pos, &q) in traced.iter().enumerate() {
            if traced_index >> (traced.len() - 1 - pos) & 1 == 1 {
                full |= bit(q);
            }
        }
        full
    };
    let mut out = OperatorMatrix::zeros(kept_dim, kept_dim);
    for i in 0..kept_dim {
        for j in 0..kept_dim {
            let mut acc = ZERO;
            for t in 0..traced_dim {
                acc += rho[(compose(i, t), compose(j, t))];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

pub fn outer(v: &StateVector) -> OperatorMatrix {
    v * v.adjoint()
}

/// Orthonormal basis of the range of a projector (eigenvalue-one eigenvectors).
pub fn projector_range(p: &OperatorMatrix) -> OperatorMatrix {
    let (values, vectors) = hermitian_eigen(p);
    let cols: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.5)
        .map(|(i, _)| i)
        .collect();
    OperatorMatrix::from_fn(p.nrows(), cols.len(), |r, c| vectors[(r, cols[c])])
}

/// `‖P² − P‖` and `‖P − P†‖`, whichever is larger.
pub fn projector_defect(p: &OperatorMatrix) -> f64 {
    let square = p * p - p;
    let idempotence = square.iter().map(|z| z.norm()).fold(0.0, f64::max);
    idempotence.max(hermiticity_defect(p))
}

pub fn trace(a: &OperatorMatrix) -> C64 {
    a.trace()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> OperatorMatrix {
        OperatorMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
    }

    #[test]
    fn eigenvectors_diagonalize() {
        use crate::{Hamiltonian, PauliOperator, ScheduleGroup};
        let complex = [(-0.428, 5, 14), (0.985, 7, 13), (-0.513, 13, 8)];
        let real_degenerate = [(-0.728, 6, 6)];
        for terms in [&complex[..], &real_degenerate[..]] {
            let mut h = Hamiltonian::new(4);
            for &(c, x, z) in terms {
                h.push(c, PauliOperator::new(4, x, z, 0).unwrap().unsigned(), ScheduleGroup::Constant).unwrap();
            }
            let m = h.to_dense(0.0).unwrap();
            let (values, u) = hermitian_eigen(&m);
            let diag = OperatorMatrix::from_fn(16, 16, |r, c| if r == c { C64::new(values[r], 0.0) } else { ZERO });
            assert!((&u * diag * u.adjoint() - &m).norm() < 1e-12);
            let largest = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            assert!((spectral_norm(&m) - largest).abs() < 1e-12);
            assert!((trace_norm(&m) - values.iter().map(|v| v.abs()).sum::<f64>()).abs() < 1e-10);
        }
    }

    fn pauli_z() -> OperatorMatrix {
        OperatorMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
    }

    #[test]
    fn exponential_routes_agree() {
        let h = kron(&pauli_x(), &pauli_z()) * C64::new(0.7, 0.0) + kron(&pauli_z(), &identity(2)) * C64::new(1.3, 0.0);
        let a = exp_hermitian(&h, 2.1);
        let b = expm(&(-h * I * C64::new(2.1, 0.0)));
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn exp_of_z_over_pi_is_minus_identity() {
        let u = exp_hermitian(&pauli_z(), std::f64::consts::PI);
        assert!((u + identity(2)).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let a = OperatorMatrix::from_row_slice(2, 2, &[ONE * 0.25, ZERO, ZERO, ONE * 0.75]);
        let b = OperatorMatrix::from_row_slice(2, 2, &[ONE * 0.5, ONE * 0.5, ONE * 0.5, ONE * 0.5]);
        let rho = kron(&a, &b);
        assert!((partial_trace(&rho, 2, &[0]) - &a).norm() < 1e-14);
        assert!((partial_trace(&rho, 2, &[1]) - &b).norm() < 1e-14);
    }

    #[test]
    fn norms() {
        let x = pauli_x();
        assert!((spectral_norm(&x) - 1.0).abs() < 1e-14);
        assert!((trace_norm(&x) - 2.0).abs() < 1e-14);
        assert!((hermitian_norm(&(x * C64::new(-3.0, 0.0))) - 3.0).abs() < 1e-14);
    }
}
