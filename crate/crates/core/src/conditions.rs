//! Checks of the suppression conditions: commutation with the encoded
//! Hamiltonian, the diagonal-block condition `Σ_a Π_a V Π_a P = cP`, its
//! per-block form, Condition 1, the stabilizer sign condition and the
//! ground-space-in-codespace property.

use serde::Serialize;

use crate::code::{codespace_projector, SubsystemCode};
use crate::dense::{self, OperatorMatrix, C64};
use crate::error::{Error, Result};
use crate::f2::BinaryMatrix;
use crate::hamiltonian::Hamiltonian;
use crate::pauli::PauliOperator;
use crate::spectral::{group_eigenvalues, SpectralDecomposition, DEFAULT_DEGENERACY_TOL};
use crate::subspace::SectorBasis;

pub const DEFAULT_S_SAMPLES: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
pub const DEFAULT_TOL: f64 = 1e-9;

/// Registers up to this size are checked with a full dense eigensolve.
pub const DENSE_GROUND_LIMIT: usize = 10;

#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    pub label: String,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorSpectra {
    pub error: String,
    pub penalty: Vec<f64>,
    pub conjugated: Vec<f64>,
    pub shared: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub condition: String,
    pub satisfied: bool,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub block_constants: Vec<f64>,
    pub residuals: Vec<Residual>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub spectra: Vec<ErrorSpectra>,
}

impl ConditionReport {
    fn new(condition: &str, tolerance: f64) -> Self {
        Self {
            condition: condition.into(),
            satisfied: true,
            tolerance,
            constant: None,
            block_constants: Vec::new(),
            residuals: Vec::new(),
            witness: None,
            spectra: Vec::new(),
        }
    }

    fn residual(&mut self, label: impl Into<String>, value: f64) {
        self.residuals.push(Residual { label: label.into(), value });
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.value).fold(0.0, f64::max)
    }
}

fn require_projector(p: &OperatorMatrix) -> Result<()> {
    let defect = dense::projector_defect(p);
    if defect > 1e-8 {
        return Err(Error::NotProjector(defect));
    }
    Ok(())
}

fn trace_re(a: &OperatorMatrix) -> f64 {
    dense::trace(a).re
}

/// Largest `‖[H̄_S(s), H_p]‖` and `‖[H̄_S(s), P]‖` over the sampled `s`.
pub fn check_commutation(
    hbar: &Hamiltonian,
    h_p: &Hamiltonian,
    p: &OperatorMatrix,
    s_samples: &[f64],
    tol: f64,
) -> Result<ConditionReport> {
    let mut report = ConditionReport::new("commutation", tol);
    let hp = h_p.to_dense(0.0)?;
    let mut worst_hp = (0.0f64, 0.0f64);
    let mut worst_p = (0.0f64, 0.0f64);
    for &s in s_samples {
        let h = hbar.to_dense(s)?;
        let a = dense::spectral_norm(&dense::commutator(&h, &hp));
        let b = dense::spectral_norm(&dense::commutator(&h, p));
        if a > worst_hp.0 {
            worst_hp = (a, s);
        }
        if b > worst_p.0 {
            worst_p = (b, s);
        }
    }
    report.residual("[H_S, H_p]", worst_hp.0);
    report.residual("[H_S, P]", worst_p.0);
    report.satisfied = worst_hp.0 <= tol && worst_p.0 <= tol;
    if !report.satisfied {
        let (norm, s, what) = if worst_hp.0 >= worst_p.0 {
            (worst_hp.0, worst_hp.1, "H_p")
        } else {
            (worst_p.0, worst_p.1, "P")
        };
        report.witness = Some(format!("‖[H_S({s}), {what}]‖ = {norm:.6e}"));
    }
    Ok(report)
}

/// `R = Σ_a Π_a V Π_a P` and the least-squares `c` with `R ≈ cP`.
pub fn diagonal_blocks(v: &OperatorMatrix, d: &SpectralDecomposition, p: &OperatorMatrix) -> OperatorMatrix {
    let mut r = OperatorMatrix::zeros(v.nrows(), v.ncols());
    for a in 0..d.len() {
        let b = d.basis(a);
        let inner = b.adjoint() * v * b;
        r += b * (inner * (b.adjoint() * p));
    }
    r
}

/// Diagonal-block condition `Σ_a Π_a V Π_a P = cP`. `c = tr(PR)/tr(P)`; satisfied when
/// `‖R − cP‖ ≤ tol`.
pub fn check_theorem1_condition(
    v: &OperatorMatrix,
    d: &SpectralDecomposition,
    p: &OperatorMatrix,
    tol: f64,
) -> Result<ConditionReport> {
    require_projector(p)?;
    let r = diagonal_blocks(v, d, p);
    let tr_p = trace_re(p);
    let c: C64 = if tr_p > 0.0 { dense::trace(&(p * &r)) / tr_p } else { dense::ZERO };
    let residual = dense::spectral_norm(&(&r - p * c));
    let mut report = ConditionReport::new("theorem1", tol);
    report.constant = Some(c.re);
    report.residual("‖R − cP‖", residual);
    report.residual("Im c", c.im.abs());
    report.satisfied = residual <= tol && c.im.abs() <= tol;
    if !report.satisfied {
        report.witness = Some(format!("diagonal blocks leave ‖R − cP‖ = {residual:.6e}"));
    }
    Ok(report)
}

fn distinct(values: &[f64], abs_tol: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for &v in values {
        if out.last().is_none_or(|&l| v - l > abs_tol) {
            out.push(v);
        }
    }
    out
}

/// Condition 1: `h_p·p` and `σ h_p σ·p` have no common eigenvalue on the
/// support of `p`, for every error `σ`.
pub fn check_condition1(
    h_p: &Hamiltonian,
    p: &OperatorMatrix,
    errors: &[PauliOperator],
    tol: f64,
) -> Result<ConditionReport> {
    require_projector(p)?;
    let hp = h_p.to_dense(0.0)?;
    let comm = dense::spectral_norm(&dense::commutator(&hp, p));
    if comm > tol.max(1e-10) {
        return Err(Error::PenaltyProjectorCommutator(comm));
    }
    let basis = dense::projector_range(p);
    let scale = dense::hermitian_norm(&hp).max(1.0);
    let abs_tol = tol.max(DEFAULT_DEGENERACY_TOL) * scale;
    let spectrum_on = |m: &OperatorMatrix| {
        let compressed = basis.adjoint() * m * &basis;
        distinct(&dense::hermitian_eigenvalues(&compressed), abs_tol)
    };
    let penalty = spectrum_on(&hp);
    let mut report = ConditionReport::new("condition1", tol);
    for sigma in errors {
        let conj = h_p.conjugated_by(sigma)?.to_dense(0.0)?;
        let leak = dense::spectral_norm(&dense::commutator(&conj, p));
        let conjugated = spectrum_on(&conj);
        let shared: Vec<f64> = penalty
            .iter()
            .copied()
            .filter(|a| conjugated.iter().any(|b| (a - b).abs() <= abs_tol))
            .collect();
        report.residual(format!("[σ h_p σ, p] for {}", sigma.to_sparse_string()), leak);
        if !shared.is_empty() && report.satisfied {
            report.satisfied = false;
            report.witness = Some(format!("{} shares eigenvalue {:.6}", sigma.to_sparse_string(), shared[0]));
        }
        report.spectra.push(ErrorSpectra { error: sigma.to_sparse_string(), penalty: penalty.clone(), conjugated, shared });
    }
    Ok(report)
}

/// One block of a block-encoded model.
#[derive(Clone, Debug)]
pub struct Block {
    /// Global labels of the block's system qubits, used for the overlap check.
    pub qubits: Vec<usize>,
    /// Penalty `h_p` on the block's own qubits.
    pub penalty: Hamiltonian,
    /// Code projector `p` on the block's own qubits.
    pub projector: OperatorMatrix,
    /// Coupling `v` on the block's qubits followed by `bath_qubits` bath qubits.
    pub coupling: OperatorMatrix,
    pub bath_qubits: usize,
}

pub(crate) fn check_disjoint<'a>(supports: impl IntoIterator<Item = &'a [usize]>) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for qubits in supports {
        for &q in qubits {
            if !seen.insert(q) {
                return Err(Error::OverlappingBlocks(q + 1));
            }
        }
    }
    Ok(())
}

/// Per-block `π_a v π_a p = c p` for every eigenvalue `a` of `h_p`, with one
/// constant `c` per block fitted by least squares over `a`.
pub fn check_block_condition(blocks: &[Block], tol: f64) -> Result<ConditionReport> {
    check_disjoint(blocks.iter().map(|b| b.qubits.as_slice()))?;
    let mut report = ConditionReport::new("block", tol);
    for (i, block) in blocks.iter().enumerate() {
        let (c, residual) = block_constant(block)?;
        report.block_constants.push(c);
        report.residual(format!("block {}", i + 1), residual);
        if residual > tol && report.satisfied {
            report.satisfied = false;
            report.witness = Some(format!("block {} residual {residual:.6e}", i + 1));
        }
    }
    report.constant = Some(report.block_constants.iter().sum());
    Ok(report)
}

pub(crate) fn block_constant(block: &Block) -> Result<(f64, f64)> {
    require_projector(&block.projector)?;
    let bath_dim = 1usize << block.bath_qubits;
    let id_b = dense::identity(bath_dim);
    let d = SpectralDecomposition::new(&block.penalty.to_dense(0.0)?, DEFAULT_DEGENERACY_TOL)?;
    let p = dense::kron(&block.projector, &id_b);
    if block.coupling.nrows() != p.nrows() {
        return Err(Error::InvalidArgument("block coupling dimension does not match its qubits and bath".into()));
    }
    let tr_p = trace_re(&p);
    let terms: Vec<OperatorMatrix> = (0..d.len())
        .map(|a| {
            let pi = dense::kron(&d.projector(a), &id_b);
            &pi * &block.coupling * &pi * &p
        })
        .collect();
    let c = if tr_p > 0.0 {
        terms.iter().map(|r| trace_re(&(&p * r))).sum::<f64>() / (terms.len() as f64 * tr_p)
    } else {
        0.0
    };
    let residual = terms
        .iter()
        .map(|r| dense::spectral_norm(&(r - &p * C64::new(c, 0.0))))
        .fold(0.0, f64::max);
    Ok((c, residual))
}

/// `a_ij = 1` when stabilizer `i` anticommutes with error `j`.
pub fn anticommutation_matrix(stabilizers: &[PauliOperator], errors: &[PauliOperator]) -> Result<BinaryMatrix> {
    let mut m = BinaryMatrix::zeros(stabilizers.len(), errors.len());
    for (i, s) in stabilizers.iter().enumerate() {
        for (j, e) in errors.iter().enumerate() {
            m.set(i, j, !s.commutes(e)?);
        }
    }
    Ok(m)
}

/// `Σ_i α_i ≠ Σ_i α_i (−1)^{a_ij}` for every column `j`.
pub fn stabilizer_sign_condition(alphas: &[f64], anticomm: &BinaryMatrix) -> Result<ConditionReport> {
    if alphas.len() != anticomm.rows() {
        return Err(Error::InvalidArgument(format!(
            "{} coefficients for {} stabilizer rows",
            alphas.len(),
            anticomm.rows()
        )));
    }
    let tol = 1e-12;
    let mut report = ConditionReport::new("stabilizer_sign", tol);
    let total: f64 = alphas.iter().sum();
    for j in 0..anticomm.cols() {
        let flipped: f64 = alphas
            .iter()
            .enumerate()
            .map(|(i, a)| if anticomm.get(i, j) { -a } else { *a })
            .sum();
        let gap = (total - flipped).abs();
        report.residual(format!("column {}", j + 1), gap);
        if gap <= tol && report.satisfied {
            report.satisfied = false;
            report.witness = Some(format!("column {}: Σα = Σα(−1)^a = {total}", j + 1));
        }
    }
    Ok(report)
}

/// `‖(I − P_C) Π_ground‖` for a penalty on the code's physical qubits.
///
/// Up to [`DENSE_GROUND_LIMIT`] qubits the penalty is diagonalized densely.
/// Larger registers are split into stabilizer sectors (the penalty must
/// commute with every stabilizer); the residual is then `1` if the ground
/// energy occurs in any sector other than the codespace and `0` otherwise.
pub fn ground_in_codespace(h_p: &Hamiltonian, code: &SubsystemCode, tol: f64) -> Result<ConditionReport> {
    let n = code.num_physical();
    if h_p.num_qubits() != n {
        return Err(Error::SizeMismatch { left: n, right: h_p.num_qubits() });
    }
    let mut report = ConditionReport::new("ground_in_codespace", tol);
    if n <= DENSE_GROUND_LIMIT || code.stabilizers().is_empty() {
        let d = SpectralDecomposition::new(&h_p.to_dense(0.0)?, DEFAULT_DEGENERACY_TOL)?;
        let pc = codespace_projector(code)?;
        let ground = d.basis(0);
        let leak = dense::spectral_norm(&(ground - &pc * ground));
        report.residual("‖(I − P_C) Π_ground‖", leak);
        report.constant = Some(d.eigenvalues()[0]);
        report.satisfied = leak <= tol;
    } else {
        for s in code.stabilizers() {
            if !h_p.commutes_with_pauli(s)? {
                return Err(Error::InvalidArgument(format!(
                    "penalty does not commute with stabilizer {}; sector method unavailable",
                    s.to_sparse_string()
                )));
            }
        }
        let sectors = SectorBasis::all_sectors(code.stabilizers())?;
        let minima: Vec<f64> = sectors
            .iter()
            .map(|b| b.restrict(h_p, 0.0).map(|m| dense::hermitian_eigenvalues(&m)[0]))
            .collect::<Result<_>>()?;
        let ground = minima.iter().copied().fold(f64::INFINITY, f64::min);
        let range = h_p.coefficient_norm(0.0).max(1.0);
        let leak = if minima[1..].iter().any(|&m| m - ground <= DEFAULT_DEGENERACY_TOL * range) { 1.0 } else { 0.0 };
        for (b, m) in sectors.iter().zip(&minima) {
            report.residual(format!("sector {:?} minimum", b.signs()), *m);
        }
        report.residual("‖(I − P_C) Π_ground‖", leak);
        report.constant = Some(ground);
        report.satisfied = leak <= tol && (minima[0] - ground).abs() <= DEFAULT_DEGENERACY_TOL * range;
    }
    if !report.satisfied {
        report.witness = Some("ground space leaves the codespace".into());
    }
    Ok(report)
}

/// Sum of all gauge generators, each with coefficient `coeff`.
pub fn gauge_sum_penalty(code: &SubsystemCode, coeff: f64) -> Result<Hamiltonian> {
    Hamiltonian::from_paulis(code.num_physical(), coeff, code.gauge_generators())
}

/// `Σ_i α_i S_i` over the stabilizer generators.
pub fn stabilizer_penalty(code: &SubsystemCode, alphas: &[f64]) -> Result<Hamiltonian> {
    if alphas.len() != code.num_stabilizers() {
        return Err(Error::InvalidArgument("one coefficient per stabilizer generator".into()));
    }
    let mut h = Hamiltonian::new(code.num_physical());
    for (a, s) in alphas.iter().zip(code.stabilizers()) {
        h.push(*a, *s, Default::default())?;
    }
    Ok(h)
}

/// `I − P_C` written as a Pauli sum over the stabilizer group.
pub fn projector_penalty(code: &SubsystemCode) -> Result<Hamiltonian> {
    let group = code.stabilizer_elements()?;
    let w = 1.0 / group.len() as f64;
    let mut h = Hamiltonian::new(code.num_physical());
    h.push(1.0, PauliOperator::identity(code.num_physical()), Default::default())?;
    for g in &group {
        h.push(-w, *g, Default::default())?;
    }
    Ok(h.simplified())
}

/// Distinct eigenvalues of `m` compressed onto the range of `p`.
pub fn spectrum_on_support(m: &OperatorMatrix, p: &OperatorMatrix) -> Vec<f64> {
    let basis = dense::projector_range(p);
    let values = dense::hermitian_eigenvalues(&(basis.adjoint() * m * &basis));
    group_eigenvalues(&values, DEFAULT_DEGENERACY_TOL).into_iter().map(|g| g.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::builtin::{builtin_412, builtin_832};
    use crate::pauli::Letter;

    fn single_qubit_paulis(n: usize) -> Vec<PauliOperator> {
        (0..n)
            .flat_map(|q| [Letter::X, Letter::Y, Letter::Z].map(|l| PauliOperator::single(n, q, l)))
            .collect()
    }

    #[test]
    fn commutation_identity_and_violation() {
        let code = builtin_412();
        let p = codespace_projector(&code).unwrap();
        let hp = gauge_sum_penalty(&code, 1.0).unwrap();
        let id = Hamiltonian::new(4).with_term(1.0, PauliOperator::identity(4)).unwrap();
        assert!(check_commutation(&id, &hp, &p, &DEFAULT_S_SAMPLES, 1e-10).unwrap().satisfied);

        let x1 = Hamiltonian::new(2).with_term(1.0, PauliOperator::single(2, 0, Letter::X)).unwrap();
        let zz = Hamiltonian::new(2).with_term(0.7, PauliOperator::uniform(2, &[0, 1], Letter::Z)).unwrap();
        let r = check_commutation(&x1, &zz, &dense::identity(4), &DEFAULT_S_SAMPLES, 1e-10).unwrap();
        assert!(!r.satisfied);
        assert!((r.residuals[0].value - 1.4).abs() < 1e-12);
    }

    #[test]
    fn theorem1_identity_gives_unit_constant() {
        let code = builtin_412();
        let hp = gauge_sum_penalty(&code, 1.0).unwrap().to_dense(0.0).unwrap();
        let d = SpectralDecomposition::new(&hp, DEFAULT_DEGENERACY_TOL).unwrap();
        let p = d.ground_projector();
        let r = check_theorem1_condition(&dense::identity(16), &d, &p, 1e-10).unwrap();
        assert!(r.satisfied);
        assert!((r.constant.unwrap() - 1.0).abs() < 1e-12);
        let x = code.logical_x(0).to_dense().unwrap();
        assert!(!check_theorem1_condition(&x, &d, &p, 1e-10).unwrap().satisfied);
        assert!(matches!(
            check_theorem1_condition(&x, &d, &(&p * C64::new(2.0, 0.0)), 1e-10),
            Err(Error::NotProjector(_))
        ));
    }

    #[test]
    fn condition1_on_builtins() {
        let code = builtin_412();
        let p = codespace_projector(&code).unwrap();
        let r = check_condition1(&gauge_sum_penalty(&code, 1.0).unwrap(), &p, &single_qubit_paulis(4), 1e-9).unwrap();
        assert!(r.satisfied);
        let s8 = 8f64.sqrt();
        assert!((r.spectra[0].penalty[0] + s8).abs() < 1e-9 && (r.spectra[0].penalty[1] - s8).abs() < 1e-9);

        let code = builtin_832();
        let p = codespace_projector(&code).unwrap();
        let r = check_condition1(&gauge_sum_penalty(&code, 1.0).unwrap(), &p, &single_qubit_paulis(8), 1e-9).unwrap();
        assert!(r.satisfied);
        assert_eq!(r.spectra.len(), 24);
    }

    #[test]
    fn mixed_sign_stabilizer_penalty_fails() {
        let code = builtin_412();
        let p = codespace_projector(&code).unwrap();
        let h = stabilizer_penalty(&code, &[1.0, -1.0]).unwrap();
        let r = check_condition1(&h, &p, &single_qubit_paulis(4), 1e-9).unwrap();
        assert!(!r.satisfied);
        assert!(r.witness.unwrap().starts_with('Y'));
    }

    #[test]
    fn sign_condition_arithmetic() {
        let a = BinaryMatrix::from_rows(&[[1u8], [1]]).unwrap();
        assert!(!stabilizer_sign_condition(&[1.0, -1.0], &a).unwrap().satisfied);
        assert!(stabilizer_sign_condition(&[1.0, 1.0], &a).unwrap().satisfied);
        let empty = BinaryMatrix::zeros(2, 0);
        assert!(stabilizer_sign_condition(&[1.0, -1.0], &empty).unwrap().satisfied);
    }

    #[test]
    fn ground_space_checks() {
        let code = builtin_412();
        let hp = gauge_sum_penalty(&code, -1.0).unwrap();
        assert!(ground_in_codespace(&hp, &code, 1e-9).unwrap().satisfied);
        let flipped = projector_penalty(&code).unwrap().scaled(-1.0);
        assert!(!ground_in_codespace(&flipped, &code, 1e-9).unwrap().satisfied);
        assert!(ground_in_codespace(&projector_penalty(&code).unwrap(), &code, 1e-9).unwrap().satisfied);
    }

    #[test]
    fn projector_penalty_matches_dense() {
        let code = builtin_832();
        let h = projector_penalty(&code).unwrap().to_dense(0.0).unwrap();
        let p = codespace_projector(&code).unwrap();
        assert!((h - (dense::identity(256) - p)).norm() < 1e-12);
    }
}
