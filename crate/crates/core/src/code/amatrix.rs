//! Bravyi's A-matrix construction of generalized Bacon-Shor codes.
//!
//! Each nonzero entry of `A` is a qubit, numbered row-major from 1. Two
//! consecutive qubits in a row give an `XX` gauge generator, two consecutive
//! qubits in a column give a `ZZ` generator. The resulting code has
//! parameters `[[|A|, rank A, min(d_row, d_col)]]`, where `d_row` (`d_col`) is
//! the least weight of a nonzero vector in the row (column) space.

use std::path::Path;

use super::{CodeParams, SubsystemCode};
use crate::error::{Error, Result};
use crate::f2::BinaryMatrix;
use crate::pauli::{Letter, PauliOperator};

pub fn formula_params(a: &BinaryMatrix) -> Result<CodeParams> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let d_row = a.min_nonzero_weight_rowspace()?.unwrap_or(0);
    let d_col = a.transpose().min_nonzero_weight_rowspace()?.unwrap_or(0);
    Ok(CodeParams { n: a.hamming_weight(), k: a.rank(), d: d_row.min(d_col) })
}

pub fn code_from_a_matrix(a: &BinaryMatrix) -> Result<SubsystemCode> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let entries = a.nonzero_entries();
    let n = entries.len();
    if n > crate::pauli::MAX_QUBITS {
        return Err(Error::TooManyQubits { got: n, max: crate::pauli::MAX_QUBITS });
    }
    let qubit = |r: usize, c: usize| entries.iter().position(|&e| e == (r, c)).expect("nonzero entry");
    let mut generators = Vec::new();
    for r in 0..a.rows() {
        let cols: Vec<usize> = (0..a.cols()).filter(|&c| a.get(r, c)).collect();
        for w in cols.windows(2) {
            generators.push(PauliOperator::uniform(n, &[qubit(r, w[0]), qubit(r, w[1])], Letter::X));
        }
    }
    for c in 0..a.cols() {
        let rows: Vec<usize> = (0..a.rows()).filter(|&r| a.get(r, c)).collect();
        for w in rows.windows(2) {
            generators.push(PauliOperator::uniform(n, &[qubit(w[0], c), qubit(w[1], c)], Letter::Z));
        }
    }
    let params = formula_params(a)?;
    let code = SubsystemCode::from_gauge_generators(format!("A{}x{}", a.rows(), a.cols()), n, generators, Some(entries))?;
    if code.num_logical() != params.k {
        return Err(Error::InvalidCode(format!(
            "extracted {} logical qubits but rank(A) = {}",
            code.num_logical(),
            params.k
        )));
    }
    Ok(code.with_distance(params.d))
}

/// Read an A-matrix from its plain-text file form.
pub fn read_a_matrix(path: impl AsRef<Path>) -> Result<BinaryMatrix> {
    std::fs::read_to_string(path)?.parse()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_gives_four_qubit_code() {
        let a: BinaryMatrix = "11\n11".parse().unwrap();
        let code = code_from_a_matrix(&a).unwrap();
        assert_eq!(code.params(), CodeParams { n: 4, k: 1, d: 2 });
        let g: Vec<String> = code.gauge_generators().iter().map(|g| g.to_sparse_string()).collect();
        assert_eq!(g, vec!["X1 X2", "X3 X4", "Z1 Z3", "Z2 Z4"]);
        assert_eq!(code.brute_force_distance(), Some(2));
    }

    #[test]
    fn zero_matrix_rejected() {
        let a: BinaryMatrix = "00\n00".parse().unwrap();
        assert!(matches!(code_from_a_matrix(&a), Err(Error::ZeroMatrix)));
    }

    #[test]
    fn identity_is_a_repetition_free_code() {
        let code = code_from_a_matrix(&BinaryMatrix::identity(3)).unwrap();
        assert_eq!(code.params(), CodeParams { n: 3, k: 3, d: 1 });
        assert!(code.stabilizers().is_empty());
    }
}
