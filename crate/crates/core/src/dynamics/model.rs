use serde::{Deserialize, Serialize};

use super::{evolve, evolve_hamiltonian, TimeGrid};
use crate::code::SubsystemCode;
use crate::dense::{self, OperatorMatrix, C64};
use crate::error::{Error, Result};
use crate::hamiltonian::{Hamiltonian, ScheduleGroup};
use crate::pauli::PauliOperator;
use crate::spectral::{SpectralDecomposition, DEFAULT_DEGENERACY_TOL};

/// One interaction term `coeff · E ⊗ B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub coeff: f64,
    pub system: PauliOperator,
    pub bath: PauliOperator,
}

/// `H(t) = H̄_S(t/T) + H_B + E_p H_p + V` on the system register followed by
/// the bath register.
#[derive(Clone, Debug)]
pub struct SystemBathModel {
    pub code: SubsystemCode,
    pub system: Hamiltonian,
    pub bath: Hamiltonian,
    pub couplings: Vec<Coupling>,
    pub penalty: Hamiltonian,
    pub penalty_strength: f64,
    pub total_time: f64,
}

impl SystemBathModel {
    pub fn new(
        code: SubsystemCode,
        system: Hamiltonian,
        bath: Hamiltonian,
        couplings: Vec<Coupling>,
        penalty: Hamiltonian,
        penalty_strength: f64,
        total_time: f64,
    ) -> Result<Self> {
        let n = code.num_physical();
        for h in [&system, &penalty] {
            if h.num_qubits() != n {
                return Err(Error::SizeMismatch { left: n, right: h.num_qubits() });
            }
        }
        let m = bath.num_qubits();
        for c in &couplings {
            if c.system.num_qubits() != n || c.bath.num_qubits() != m {
                return Err(Error::InvalidArgument("coupling does not match the system and bath registers".into()));
            }
            if !c.system.is_hermitian() || !c.bath.is_hermitian() {
                return Err(Error::NonHermitian(1.0));
            }
        }
        dense::check_dense_limit(n + m, dense::DEFAULT_DENSE_LIMIT)?;
        if !(penalty_strength >= 0.0) || !(total_time >= 0.0) {
            return Err(Error::InvalidArgument("penalty strength and total time must be non-negative".into()));
        }
        Ok(Self { code, system, bath, couplings, penalty, penalty_strength, total_time })
    }

    pub fn with_penalty_strength(&self, e_p: f64) -> Self {
        Self { penalty_strength: e_p, ..self.clone() }
    }

    pub fn num_system(&self) -> usize {
        self.code.num_physical()
    }

    pub fn num_bath(&self) -> usize {
        self.bath.num_qubits()
    }

    pub fn num_qubits(&self) -> usize {
        self.num_system() + self.num_bath()
    }

    pub fn bath_dim(&self) -> usize {
        1 << self.num_bath()
    }

    /// `V = Σ_j coeff_j E_j ⊗ B_j`.
    pub fn interaction(&self) -> Result<Hamiltonian> {
        let mut v = Hamiltonian::new(self.num_qubits());
        for c in &self.couplings {
            v.push(c.coeff, c.system.tensor(&c.bath), ScheduleGroup::Constant)?;
        }
        Ok(v.simplified())
    }

    /// `H_0 = H̄_S + H_B`.
    pub fn h0(&self) -> Result<Hamiltonian> {
        let n = self.num_system();
        let positions: Vec<usize> = (n..self.num_qubits()).collect();
        self.system.extended(self.num_bath()).sum(&self.bath.embedded(self.num_qubits(), &positions))
    }

    pub fn penalty_full(&self) -> Hamiltonian {
        self.penalty.extended(self.num_bath())
    }

    /// `H_0 + E_p H_p + V` (or without `V`).
    pub fn hamiltonian(&self, with_interaction: bool) -> Result<Hamiltonian> {
        let mut h = self.h0()?.sum(&self.penalty_full().scaled(self.penalty_strength))?;
        if with_interaction {
            h = h.sum(&self.interaction()?)?;
        }
        Ok(h.simplified())
    }

    /// `O ⊗ I_bath`.
    pub fn lift(&self, op: &OperatorMatrix) -> OperatorMatrix {
        if self.num_bath() == 0 {
            return op.clone();
        }
        dense::kron(op, &dense::identity(self.bath_dim()))
    }

    pub fn dense_interaction(&self) -> Result<OperatorMatrix> {
        self.interaction()?.to_dense(0.0)
    }

    pub fn penalty_decomposition(&self) -> Result<SpectralDecomposition> {
        SpectralDecomposition::new(&self.penalty.to_dense(0.0)?, DEFAULT_DEGENERACY_TOL)
    }

    pub fn u_v(&self, grid: &TimeGrid) -> Result<OperatorMatrix> {
        evolve_hamiltonian(&self.hamiltonian(true)?, grid)
    }

    pub fn u_0(&self, grid: &TimeGrid) -> Result<OperatorMatrix> {
        evolve_hamiltonian(&self.h0()?, grid)
    }

    /// `U_p(t) = exp(−i E_p H_p t) ⊗ I_bath`.
    pub fn u_p(&self, t: f64) -> Result<OperatorMatrix> {
        let hp = self.penalty.to_dense(0.0)? * C64::new(self.penalty_strength, 0.0);
        Ok(self.lift(&dense::exp_hermitian(&hp, t)))
    }

    /// `e^{−icT} U_0(T) U_p(T)`.
    pub fn target_unitary_theorem1(&self, grid: &TimeGrid, c: f64) -> Result<OperatorMatrix> {
        let phase = C64::from_polar(1.0, -c * grid.total_time);
        Ok(self.u_0(grid)? * self.u_p(grid.total_time)? * phase)
    }

    /// `W = Σ_{a∈I} Π_a V Π_a` after checking `Σ_{a∈I} Π_a = P`.
    pub fn theorem2_w(&self, index_set: &[usize], p: &OperatorMatrix) -> Result<OperatorMatrix> {
        let d = self.penalty_decomposition()?;
        let dim = 1usize << self.num_system();
        let mut sum = OperatorMatrix::zeros(dim, dim);
        for &a in index_set {
            if a >= d.len() {
                return Err(Error::InvalidArgument(format!("index {a} beyond {} penalty eigenvalues", d.len())));
            }
            sum += d.projector(a);
        }
        let p_sys = if p.nrows() == dim { p.clone() } else { self.system_part(p)? };
        let mismatch = dense::spectral_norm(&(&sum - &p_sys));
        if mismatch > 1e-8 {
            return Err(Error::IndexSetMismatch(mismatch));
        }
        let v = self.dense_interaction()?;
        let mut w = OperatorMatrix::zeros(v.nrows(), v.ncols());
        for &a in index_set {
            let pi = self.lift(&d.projector(a));
            w += &pi * &v * &pi;
        }
        Ok(w)
    }

    /// `T exp(−i ∫ H_0 + E_p H_p + W)`.
    pub fn target_unitary_theorem2(&self, grid: &TimeGrid, index_set: &[usize], p: &OperatorMatrix) -> Result<OperatorMatrix> {
        let w = self.theorem2_w(index_set, p)?;
        self.evolve_with(&w, grid)
    }

    /// Evolution under `H_0 + E_p H_p + X` for a constant dense `X`.
    pub fn evolve_with(&self, extra: &OperatorMatrix, grid: &TimeGrid) -> Result<OperatorMatrix> {
        let h = self.hamiltonian(false)?;
        let grid = if h.has_schedule() { *grid } else { TimeGrid { num_steps: 1, ..*grid } };
        evolve(|t| Ok(h.to_dense(grid.s_at(t))? + extra), &grid)
    }

    /// Recover `P_S` from `P_S ⊗ I_bath`.
    fn system_part(&self, p: &OperatorMatrix) -> Result<OperatorMatrix> {
        let bd = self.bath_dim();
        let dim = 1usize << self.num_system();
        if p.nrows() != dim * bd {
            return Err(Error::SizeMismatch { left: p.nrows(), right: dim * bd });
        }
        let sys = OperatorMatrix::from_fn(dim, dim, |i, j| p[(i * bd, j * bd)]);
        if (self.lift(&sys) - p).norm() > 1e-8 {
            return Err(Error::InvalidArgument("projector is not of the form P_S ⊗ I".into()));
        }
        Ok(sys)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::builtin::builtin_412;
    use crate::conditions::gauge_sum_penalty;
    use crate::pauli::Letter;

    fn memory_model(e_p: f64) -> SystemBathModel {
        let code = builtin_412();
        let mut bath = Hamiltonian::new(1);
        bath.push(0.5, PauliOperator::single(1, 0, Letter::Z), ScheduleGroup::Constant).unwrap();
        let couplings = (0..4)
            .map(|q| Coupling {
                coeff: 0.1,
                system: PauliOperator::single(4, q, Letter::X),
                bath: PauliOperator::single(1, 0, Letter::X),
            })
            .collect();
        let penalty = gauge_sum_penalty(&code, 1.0).unwrap();
        SystemBathModel::new(code, Hamiltonian::new(4), bath, couplings, penalty, e_p, 1.0).unwrap()
    }

    #[test]
    fn theorem1_target_limits() {
        let grid = TimeGrid::new(1.0, 10).unwrap();
        let m = memory_model(0.0);
        let u0 = m.u_0(&grid).unwrap();
        assert!((m.target_unitary_theorem1(&grid, 0.0).unwrap() - u0).norm() < 1e-12);

        let mut quiet = memory_model(3.0);
        quiet.bath = Hamiltonian::new(1);
        let up = quiet.u_p(1.0).unwrap();
        assert!((quiet.target_unitary_theorem1(&grid, 0.0).unwrap() - up).norm() < 1e-12);
    }

    #[test]
    fn theorem2_w_vanishes_on_ground_sector() {
        let m = memory_model(5.0);
        let d = m.penalty_decomposition().unwrap();
        let p = m.lift(&d.ground_projector());
        let w = m.theorem2_w(&[0], &p).unwrap();
        assert!((&w * &p).norm() < 1e-12);
        let all: Vec<usize> = (0..d.len()).collect();
        let full = m.theorem2_w(&all, &dense::identity(32)).unwrap();
        let v = m.dense_interaction().unwrap();
        let dephased: OperatorMatrix = (0..d.len())
            .map(|a| {
                let pi = m.lift(&d.projector(a));
                &pi * &v * &pi
            })
            .fold(OperatorMatrix::zeros(32, 32), |acc, x| acc + x);
        assert!((full - dephased).norm() < 1e-12);
        assert!(matches!(m.theorem2_w(&[1], &p), Err(Error::IndexSetMismatch(_))));
    }
}
