//! Codespace projectors and error detectability.

use serde::Serialize;

use super::SubsystemCode;
use crate::dense::{self, OperatorMatrix, C64};
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;
use crate::subspace::SectorBasis;

/// `P_C = Π_i (I + S_i)/2`, summed over the stabilizer group.
pub fn codespace_projector(code: &SubsystemCode) -> Result<OperatorMatrix> {
    let n = code.num_physical();
    dense::check_dense_limit(n, dense::DEFAULT_DENSE_LIMIT)?;
    let group = code.stabilizer_elements()?;
    let dim = 1usize << n;
    let weight = 1.0 / group.len() as f64;
    let mut p = OperatorMatrix::zeros(dim, dim);
    for g in &group {
        let (xi, zi) = g.index_masks();
        let amp = g.base_amplitude() * weight;
        for b in 0..dim {
            p[(b ^ xi, b)] += if (zi & b).count_ones() % 2 == 1 { -amp } else { amp };
        }
    }
    Ok(p)
}

/// Orthonormal basis of the codespace as the columns of a `2^n × 2^{n−s}` matrix.
pub fn codespace_basis(code: &SubsystemCode) -> Result<OperatorMatrix> {
    let n = code.num_physical();
    dense::check_dense_limit(n, dense::DEFAULT_DENSE_LIMIT)?;
    if code.stabilizers().is_empty() {
        return Ok(dense::identity(1 << n));
    }
    let signs = vec![1i8; code.num_stabilizers()];
    SectorBasis::new(code.stabilizers(), &signs)?.to_dense_columns()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectabilityMode {
    /// `P_C E P_C = 0`.
    Annihilated,
    /// `P_C E P_C` acts on the gauge subsystem only.
    GaugeOnly,
    /// `P_C E P_C` acts on the logical subsystem.
    Nontrivial,
}

#[derive(Clone, Debug, Serialize)]
pub struct DetectabilityReport {
    #[serde(serialize_with = "crate::pauli::serialize_sparse")]
    pub error: PauliOperator,
    pub detectable: bool,
    pub mode: DetectabilityMode,
    /// `‖P_C E P_C‖` for [`Annihilated`](DetectabilityMode::Annihilated),
    /// otherwise the largest commutator with a restricted bare logical.
    pub residual_norm: f64,
    /// Indices of stabilizer generators that anticommute with the error.
    pub flagged_by: Vec<usize>,
    /// Whether the dense check ran (registers within the dense limit).
    pub dense_checked: bool,
}

fn restrict(p: &PauliOperator, basis: &OperatorMatrix) -> OperatorMatrix {
    let mut image = OperatorMatrix::zeros(basis.nrows(), basis.ncols());
    for j in 0..basis.ncols() {
        let col: Vec<C64> = basis.column(j).iter().copied().collect();
        let mut out = vec![dense::ZERO; basis.nrows()];
        p.apply_add(&col, &mut out, dense::ONE);
        image.column_mut(j).copy_from_slice(&out);
    }
    basis.adjoint() * image
}

/// Classify a Pauli error against the code.
///
/// The symplectic test (anticommutes with some stabilizer generator, or lies
/// in the gauge group) is always run. Within the dense limit the mode is
/// decided from `P_C E P_C` itself: zero means annihilated, commuting with
/// every bare logical on the codespace means gauge-only.
pub fn is_detectable(code: &SubsystemCode, e: &PauliOperator, tol: f64) -> Result<DetectabilityReport> {
    if e.num_qubits() != code.num_physical() {
        return Err(Error::SizeMismatch { left: code.num_physical(), right: e.num_qubits() });
    }
    let flagged_by: Vec<usize> = code
        .stabilizers()
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.commutes_unchecked(e))
        .map(|(i, _)| i)
        .collect();
    let within_limit = code.num_physical() <= dense::DEFAULT_DENSE_LIMIT;
    let (mode, residual_norm) = if within_limit {
        let basis = codespace_basis(code)?;
        let m = restrict(e, &basis);
        let norm = dense::spectral_norm(&m);
        if norm <= tol {
            (DetectabilityMode::Annihilated, norm)
        } else {
            let worst = code
                .bare_logicals()
                .iter()
                .map(|l| dense::spectral_norm(&dense::commutator(&m, &restrict(l, &basis))))
                .fold(0.0f64, f64::max);
            if worst <= tol {
                (DetectabilityMode::GaugeOnly, worst)
            } else {
                (DetectabilityMode::Nontrivial, worst)
            }
        }
    } else if !flagged_by.is_empty() {
        (DetectabilityMode::Annihilated, 0.0)
    } else if code.gauge_span().contains(e.symplectic()) {
        (DetectabilityMode::GaugeOnly, 0.0)
    } else {
        (DetectabilityMode::Nontrivial, 0.0)
    };
    Ok(DetectabilityReport {
        error: *e,
        detectable: mode == DetectabilityMode::Annihilated,
        mode,
        residual_norm,
        flagged_by,
        dense_checked: within_limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::builtin::{builtin_412, builtin_832};
    use crate::pauli::Letter;

    #[test]
    fn projector_properties() {
        let code = builtin_412();
        let p = codespace_projector(&code).unwrap();
        assert!((dense::trace(&p).re - 4.0).abs() < 1e-12);
        assert!(dense::projector_defect(&p) < 1e-12);
        let b = codespace_basis(&code).unwrap();
        assert!((&b * b.adjoint() - &p).norm() < 1e-12);
    }

    #[test]
    fn gauge_generators_commute_with_projector() {
        let code = builtin_832();
        let p = codespace_projector(&code).unwrap();
        for g in code.gauge_generators() {
            let gd = g.to_dense().unwrap();
            assert!(dense::commutator(&p, &gd).norm() < 1e-12);
        }
    }

    #[test]
    fn classification_on_four_qubit_code() {
        let code = builtin_412();
        for q in 0..4 {
            for l in [Letter::X, Letter::Y, Letter::Z] {
                let r = is_detectable(&code, &PauliOperator::single(4, q, l), 1e-10).unwrap();
                assert!(r.detectable);
                assert!(!r.flagged_by.is_empty());
            }
        }
        let gauge = PauliOperator::parse_sparse("X1 X2", 4).unwrap();
        let r = is_detectable(&code, &gauge, 1e-10).unwrap();
        assert_eq!(r.mode, DetectabilityMode::GaugeOnly);
        assert!(!r.detectable);
        let logical = builtin_832().logical_x(0);
        let r = is_detectable(&builtin_832(), &logical, 1e-10).unwrap();
        assert_eq!(r.mode, DetectabilityMode::Nontrivial);
    }
}
