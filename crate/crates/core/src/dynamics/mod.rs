//! Time-ordered evolution of system–bath models, target unitaries, `K(t)`,
//! error bounds, the gauge-traced semi-distance and penalty sweeps.

mod bounds;
mod model;
mod semi;
mod sweep;
pub mod swap;

pub use bounds::{
    block_bounds, bound_eq5a, bound_eq5b, compute_k, k_quadrature, naive_bound, BlockBound, BlockModel, CouplingBlock,
    KData,
};
pub use model::{Coupling, SystemBathModel};
pub use semi::{gauge_unitary, semi_distance, validate_density};
pub use sweep::{loglog_slope, penalty_sweep, run_point, EvolutionResult, SweepOptions, Theorem};

use serde::{Deserialize, Serialize};

use crate::dense::{self, OperatorMatrix, StateVector, C64};
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;

pub const DEFAULT_STEPS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub total_time: f64,
    pub num_steps: usize,
}

impl TimeGrid {
    pub fn new(total_time: f64, num_steps: usize) -> Result<Self> {
        if num_steps == 0 || !(total_time >= 0.0) {
            return Err(Error::InvalidArgument(format!("bad time grid T={total_time}, steps={num_steps}")));
        }
        Ok(Self { total_time, num_steps })
    }

    pub fn dt(&self) -> f64 {
        self.total_time / self.num_steps as f64
    }

    /// Schedule parameter `s = t/T`.
    pub fn s_at(&self, t: f64) -> f64 {
        if self.total_time > 0.0 {
            (t / self.total_time).clamp(0.0, 1.0)
        } else {
            0.0
        }
    }

    pub fn midpoints(&self) -> impl Iterator<Item = f64> + '_ {
        let dt = self.dt();
        (0..self.num_steps).map(move |i| (i as f64 + 0.5) * dt)
    }

    /// `count` equally spaced times in `[0, T]`, endpoints included.
    pub fn sample_times(&self, count: usize) -> Vec<f64> {
        let count = count.max(2);
        (0..count).map(|i| self.total_time * i as f64 / (count - 1) as f64).collect()
    }

    pub fn halved(&self) -> Self {
        Self { num_steps: (self.num_steps / 2).max(1), ..*self }
    }

    pub fn scaled_steps(&self, factor: f64) -> Self {
        Self { num_steps: ((self.num_steps as f64 * factor.max(1.0)).ceil() as usize).max(1), ..*self }
    }
}

/// Midpoint product `Π_k exp(−i H(t_k) Δt)`, later steps on the left.
pub fn evolve<F>(mut h_of_t: F, grid: &TimeGrid) -> Result<OperatorMatrix>
where
    F: FnMut(f64) -> Result<OperatorMatrix>,
{
    let mut u: Option<OperatorMatrix> = None;
    let dt = grid.dt();
    for t in grid.midpoints() {
        let h = h_of_t(t)?;
        let scale = h.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
        let defect = dense::hermiticity_defect(&h);
        if defect > 1e-10 * scale {
            return Err(Error::NonHermitian(defect));
        }
        let step = dense::exp_hermitian(&h, dt);
        u = Some(match u {
            None => step,
            Some(prev) => step * prev,
        });
    }
    Ok(u.expect("grid has at least one step"))
}

/// Evolution under a scheduled Hamiltonian with `s = t/T`. Time-independent
/// Hamiltonians use one exact step.
pub fn evolve_hamiltonian(h: &Hamiltonian, grid: &TimeGrid) -> Result<OperatorMatrix> {
    let grid = if h.has_schedule() { *grid } else { TimeGrid { num_steps: 1, ..*grid } };
    evolve(|t| h.to_dense(grid.s_at(t)), &grid)
}

/// Bessel functions `J_0(x) … J_{kmax}(x)` by downward recurrence.
fn bessel_j(x: f64, kmax: usize) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; kmax + 1];
        out[0] = 1.0;
        return out;
    }
    let start = kmax + 20 + (x.abs() as usize);
    let mut values = vec![0.0; start + 2];
    values[start] = 1e-300;
    for k in (1..=start).rev() {
        values[k - 1] = 2.0 * k as f64 / x * values[k] - values[k + 1];
        if values[k - 1].abs() > 1e250 {
            for v in values.iter_mut().skip(k - 1) {
                *v *= 1e-250;
            }
        }
    }
    let norm = values[0] + 2.0 * values.iter().skip(2).step_by(2).sum::<f64>();
    values.truncate(kmax + 1);
    values.iter().map(|v| v / norm).collect()
}

/// `exp(−i H τ) ψ` by a Chebyshev expansion, where `bound ≥ ‖H‖`.
fn chebyshev_step(h: &Hamiltonian, s: f64, bound: f64, tau: f64, psi: &[C64]) -> Vec<C64> {
    let x = bound * tau;
    let kmax = (x + 10.0 * x.cbrt() + 20.0).ceil() as usize;
    let j = bessel_j(x, kmax);
    let scale = C64::new(1.0 / bound, 0.0);
    let apply = |v: &[C64], out: &mut [C64]| {
        h.apply(s, v, out);
        out.iter_mut().for_each(|o| *o *= scale);
    };
    let mut prev = psi.to_vec();
    let mut cur = vec![dense::ZERO; psi.len()];
    apply(&prev, &mut cur);
    let mut acc: Vec<C64> = prev.iter().map(|a| a * j[0]).collect();
    let mut phase = C64::new(0.0, -1.0);
    for (a, c) in acc.iter_mut().zip(&cur) {
        *a += c * phase * 2.0 * j[1];
    }
    let mut next = vec![dense::ZERO; psi.len()];
    for jk in j.iter().skip(2) {
        apply(&cur, &mut next);
        for (n, p) in next.iter_mut().zip(&prev) {
            *n = *n * 2.0 - p;
        }
        phase *= C64::new(0.0, -1.0);
        for (a, c) in acc.iter_mut().zip(&next) {
            *a += c * phase * 2.0 * jk;
        }
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    acc
}

const MAX_CHEBYSHEV_ARGUMENT: f64 = 100.0;

/// Midpoint time-ordered propagation of a state, with each step applied
/// matrix-free by a Chebyshev expansion.
pub fn propagate_state(h: &Hamiltonian, grid: &TimeGrid, psi: &StateVector) -> Result<StateVector> {
    if psi.len() != 1 << h.num_qubits() {
        return Err(Error::SizeMismatch { left: psi.len(), right: 1 << h.num_qubits() });
    }
    let grid = if h.has_schedule() { *grid } else { TimeGrid { num_steps: 1, ..*grid } };
    let dt = grid.dt();
    let mut v: Vec<C64> = psi.iter().copied().collect();
    for t in grid.midpoints() {
        let s = grid.s_at(t);
        let bound = h.coefficient_norm(s);
        if bound == 0.0 {
            continue;
        }
        let pieces = (bound * dt / MAX_CHEBYSHEV_ARGUMENT).ceil().max(1.0) as usize;
        for _ in 0..pieces {
            v = chebyshev_step(h, s, bound, dt / pieces as f64, &v);
        }
    }
    Ok(StateVector::from_vec(v))
}

/// `‖(U_V − U_W) P‖`.
pub fn deviation(u_v: &OperatorMatrix, u_w: &OperatorMatrix, p: &OperatorMatrix) -> Result<f64> {
    if u_v.shape() != u_w.shape() || u_v.ncols() != p.nrows() {
        return Err(Error::SizeMismatch { left: u_v.nrows(), right: p.nrows() });
    }
    Ok(dense::spectral_norm(&((u_v - u_w) * p)))
}

pub fn unitarity_defect(u: &OperatorMatrix) -> f64 {
    dense::spectral_norm(&(u.adjoint() * u - dense::identity(u.nrows())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::ScheduleGroup;
    use crate::pauli::{Letter, PauliOperator};

    #[test]
    fn constant_z_for_pi_is_minus_identity() {
        let z = PauliOperator::single(1, 0, Letter::Z).to_dense().unwrap();
        let u = evolve(|_| Ok(z.clone()), &TimeGrid::new(std::f64::consts::PI, 3).unwrap()).unwrap();
        assert!((u + dense::identity(2)).norm() < 1e-12);
        let zero = evolve(|_| Ok(OperatorMatrix::zeros(2, 2)), &TimeGrid::new(1.0, 5).unwrap()).unwrap();
        assert!((zero - dense::identity(2)).norm() < 1e-12);
    }

    #[test]
    fn commuting_pieces_agree_across_step_counts() {
        let mut h = Hamiltonian::new(2);
        h.push(0.8, PauliOperator::single(2, 0, Letter::Z), ScheduleGroup::OneMinusS).unwrap();
        h.push(-0.3, PauliOperator::uniform(2, &[0, 1], Letter::Z), ScheduleGroup::S).unwrap();
        let a = evolve_hamiltonian(&h, &TimeGrid::new(2.0, 1).unwrap()).unwrap();
        let b = evolve_hamiltonian(&h, &TimeGrid::new(2.0, 2).unwrap()).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn chebyshev_matches_dense_propagator() {
        let mut h = Hamiltonian::new(3);
        h.push(1.0, PauliOperator::parse_sparse("X1 X2", 3).unwrap(), ScheduleGroup::OneMinusS).unwrap();
        h.push(0.6, PauliOperator::parse_sparse("Z2 Z3", 3).unwrap(), ScheduleGroup::S).unwrap();
        h.push(40.0, PauliOperator::parse_sparse("Y1 Y3", 3).unwrap(), ScheduleGroup::Constant).unwrap();
        let grid = TimeGrid::new(3.0, 30).unwrap();
        let u = evolve_hamiltonian(&h, &grid).unwrap();
        let mut psi = StateVector::zeros(8);
        psi[3] = C64::new(0.6, 0.0);
        psi[5] = C64::new(0.0, 0.8);
        let expect = &u * &psi;
        let got = propagate_state(&h, &grid, &psi).unwrap();
        assert!((got - expect).norm() < 1e-10);
        assert!(unitarity_defect(&u) < 1e-10);
    }

    #[test]
    fn deviation_extremes() {
        let u = PauliOperator::single(1, 0, Letter::X).to_dense().unwrap();
        let id = dense::identity(2);
        assert_eq!(deviation(&u, &u, &id).unwrap(), 0.0);
        assert!((deviation(&u, &(-&u), &id).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bessel_identity() {
        assert!(bessel_j(2.404825557695773, 10)[0].abs() < 1e-12);
        let j = bessel_j(7.3, 40);
        let sum: f64 = j[0] * j[0] + 2.0 * j[1..].iter().map(|v| v * v).sum::<f64>();
        assert!((sum - 1.0).abs() < 1e-12);
    }
}
