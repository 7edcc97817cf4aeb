use serde::Serialize;

use super::model::{Coupling, SystemBathModel};
use super::TimeGrid;
use crate::conditions::check_disjoint;
use crate::dense::{self, OperatorMatrix, C64};
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::spectral::{SpectralDecomposition, DEFAULT_DEGENERACY_TOL};

const MIN_K_SAMPLES: usize = 201;
const MAX_K_SAMPLES: usize = 20001;

/// `∫_0^t e^{iωτ} dτ`.
fn phase_integral(omega: f64, t: f64) -> C64 {
    if omega == 0.0 {
        return C64::new(t, 0.0);
    }
    (C64::from_polar(1.0, omega * t) - 1.0) / C64::new(0.0, omega)
}

/// Enough samples to resolve the fastest oscillation of `K(t)` about 16 times per period.
fn sample_count(spread: f64, e_p: f64, total_time: f64) -> usize {
    let periods = spread * e_p * total_time / std::f64::consts::TAU;
    ((16.0 * periods).ceil() as usize + 1).clamp(MIN_K_SAMPLES, MAX_K_SAMPLES)
}

/// `K(t)` sampled on `[0, T]` with the quantities entering the bounds.
#[derive(Clone, Debug)]
pub struct KData {
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    pub commutator_norms: Vec<f64>,
    pub k_final: OperatorMatrix,
    pub sup_norm: f64,
    pub sup_commutator: f64,
    pub final_norm: f64,
    pub v_norm: f64,
    pub w_norm: f64,
    pub vw_norm: f64,
    pub h0_sup_norm: f64,
    pub total_time: f64,
    pub penalty_eigenvalues: Vec<f64>,
}

impl KData {
    /// The first-order bound with `‖[K, H_0]‖` replaced by `2‖K‖‖H_0‖`.
    pub fn envelope_5a(&self) -> f64 {
        let t = self.total_time;
        self.final_norm + t * (self.v_norm + self.w_norm) * self.sup_norm + 2.0 * t * self.sup_norm * self.h0_sup_norm
    }
}

/// Spectral pieces `Π_a (V − W) Π_{a′} P` keyed by eigenvalue pair.
struct BlockPieces {
    omegas: Vec<f64>,
    pieces: Vec<OperatorMatrix>,
}

fn off_diagonal_pieces(
    d: &SpectralDecomposition,
    lift: impl Fn(&OperatorMatrix) -> OperatorMatrix,
    diff: &OperatorMatrix,
    p: &OperatorMatrix,
    e_p: f64,
) -> Result<BlockPieces> {
    let bases: Vec<OperatorMatrix> = (0..d.len()).map(|a| lift(d.basis(a))).collect();
    let right: Vec<OperatorMatrix> = bases.iter().map(|b| b.adjoint() * p).collect();
    let mut diagonal = OperatorMatrix::zeros(diff.nrows(), diff.ncols());
    let mut omegas = Vec::new();
    let mut pieces = Vec::new();
    for (a, ba) in bases.iter().enumerate() {
        let left = ba.adjoint() * diff;
        for (b, bb) in bases.iter().enumerate() {
            let piece = ba * (&left * bb) * &right[b];
            if a == b {
                diagonal += piece;
            } else if piece.norm() > 0.0 {
                omegas.push((d.eigenvalues()[a] - d.eigenvalues()[b]) * e_p);
                pieces.push(piece);
            }
        }
    }
    let surviving = dense::spectral_norm(&diagonal);
    if surviving > 1e-9 * dense::spectral_norm(diff).max(1.0) {
        return Err(Error::SurvivingDiagonalBlocks(surviving));
    }
    Ok(BlockPieces { omegas, pieces })
}

impl BlockPieces {
    fn k_at(&self, t: f64, dim: usize) -> OperatorMatrix {
        let mut k = OperatorMatrix::zeros(dim, dim);
        for (omega, piece) in self.omegas.iter().zip(&self.pieces) {
            k += piece * phase_integral(*omega, t);
        }
        k
    }
}

/// `K(t) = ∫_0^t U_p†(τ)(V − W)U_p(τ) dτ P` from the penalty spectrum.
///
/// Requires `Σ_a Π_a (V − W) Π_a P = 0`.
pub fn compute_k(model: &SystemBathModel, grid: &TimeGrid, w: &OperatorMatrix, p: &OperatorMatrix) -> Result<KData> {
    let d = model.penalty_decomposition()?;
    let v = model.dense_interaction()?;
    let diff = &v - w;
    let pieces = off_diagonal_pieces(&d, |b| model.lift(b), &diff, p, model.penalty_strength)?;
    let values = d.eigenvalues();
    let spread = values.last().unwrap_or(&0.0) - values.first().unwrap_or(&0.0);
    let times = grid.sample_times(sample_count(spread, model.penalty_strength, grid.total_time));
    let h0 = model.h0()?;
    let constant_h0 = (!h0.has_schedule()).then(|| h0.to_dense(0.0)).transpose()?;
    let dim = v.nrows();
    let mut norms = Vec::with_capacity(times.len());
    let mut commutator_norms = Vec::with_capacity(times.len());
    let mut h0_sup_norm = 0.0f64;
    let mut k_final = OperatorMatrix::zeros(dim, dim);
    for &t in &times {
        let k = pieces.k_at(t, dim);
        let h = match &constant_h0 {
            Some(h) => h.clone(),
            None => h0.to_dense(grid.s_at(t))?,
        };
        h0_sup_norm = h0_sup_norm.max(dense::hermitian_norm(&h));
        norms.push(dense::spectral_norm(&k));
        commutator_norms.push(dense::spectral_norm(&dense::commutator(&k, &h)));
        k_final = k;
    }
    let final_norm = *norms.last().unwrap_or(&0.0);
    Ok(KData {
        sup_norm: norms.iter().copied().fold(0.0, f64::max),
        sup_commutator: commutator_norms.iter().copied().fold(0.0, f64::max),
        final_norm,
        times,
        norms,
        commutator_norms,
        k_final,
        v_norm: dense::hermitian_norm(&v),
        w_norm: dense::spectral_norm(w),
        vw_norm: dense::spectral_norm(&diff),
        h0_sup_norm,
        total_time: grid.total_time,
        penalty_eigenvalues: values.to_vec(),
    })
}

/// `K(t)` by composite Simpson quadrature with `intervals` subintervals and
/// `U_p` from a Taylor-series exponential.
pub fn k_quadrature(model: &SystemBathModel, w: &OperatorMatrix, p: &OperatorMatrix, t: f64, intervals: usize) -> Result<OperatorMatrix> {
    let intervals = intervals.max(2).next_multiple_of(2);
    let hp = model.lift(&model.penalty.to_dense(0.0)?);
    let generator = &hp * C64::new(0.0, -model.penalty_strength);
    let diff = model.dense_interaction()? - w;
    let h = t / intervals as f64;
    let step = dense::expm(&(&generator * C64::new(h, 0.0)));
    let mut u = dense::identity(hp.nrows());
    let mut acc = OperatorMatrix::zeros(hp.nrows(), hp.ncols());
    for i in 0..=intervals {
        let weight = if i == 0 || i == intervals {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += (u.adjoint() * &diff * &u) * C64::new(weight * h / 3.0, 0.0);
        u = &step * u;
    }
    Ok(acc * p)
}

/// First-order bound `‖K(T)‖ + T(‖V‖ + ‖W‖) sup‖K‖ + T sup‖[K, H_0]‖`, with sups over
/// the sample times.
pub fn bound_eq5a(k: &KData) -> f64 {
    let t = k.total_time;
    k.final_norm + t * (k.v_norm + k.w_norm) * k.sup_norm + t * k.sup_commutator
}

/// Spectral bound on `sup‖K‖`: `(2/E_p) Σ_{a≠a′} ‖V − W‖ / |λ_a − λ_{a′}|` over ordered pairs of
/// distinct eigenvalues.
pub fn bound_eq5b(vw_norm: f64, eigenvalues: &[f64], e_p: f64) -> Result<f64> {
    if e_p == 0.0 {
        return Err(Error::ZeroPenalty);
    }
    let mut sum = 0.0;
    for (a, la) in eigenvalues.iter().enumerate() {
        for (b, lb) in eigenvalues.iter().enumerate() {
            if a != b {
                sum += 1.0 / (la - lb).abs();
            }
        }
    }
    Ok(2.0 * vw_norm * sum / e_p)
}

/// The first-order bound with every `K` norm replaced by the spectral bound and the
/// commutator by `2‖K‖‖H_0‖` using the global `H_0`.
pub fn naive_bound(k: &KData, bound_5b: f64) -> f64 {
    let t = k.total_time;
    bound_5b * (1.0 + t * (k.v_norm + k.w_norm) + 2.0 * t * k.h0_sup_norm)
}

/// A code block of a block-encoded model.
#[derive(Clone, Debug)]
pub struct CouplingBlock {
    /// System qubits of the block, in the order used by `penalty` and `projector`.
    pub qubits: Vec<usize>,
    pub penalty: Hamiltonian,
    pub projector: OperatorMatrix,
}

/// System and bath Hamiltonians with couplings, each supported on one block.
#[derive(Clone, Debug)]
pub struct BlockModel {
    pub blocks: Vec<CouplingBlock>,
    pub system: Hamiltonian,
    pub bath: Hamiltonian,
    pub couplings: Vec<Coupling>,
    pub penalty_strength: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockBound {
    pub total: f64,
    pub per_block: Vec<f64>,
    pub v_norm_bound: f64,
}

fn mask_of(qubits: &[usize]) -> u64 {
    qubits.iter().fold(0, |m, &q| m | 1 << q)
}

fn touches(h: &Hamiltonian, mask: u64) -> Hamiltonian {
    let mut out = Hamiltonian::new(h.num_qubits());
    for t in h.terms() {
        if (t.pauli.x_mask() | t.pauli.z_mask()) & mask != 0 {
            out.push(t.coeff, t.pauli, t.group).expect("copied term is Hermitian");
        }
    }
    out
}

/// Per-block bound: for every coupling `v_j` in block `ī`,
/// `‖K_j(T)‖ + T(‖V‖ + ‖W‖) sup‖K_j‖ + 2T sup‖K_j‖ (‖h̄_{S,j}‖ + ‖h_{B,j}‖)`,
/// summed over `j` and `ī`. `K_j` is computed on the block's qubits and the
/// bath qubits `v_j` touches; `h̄_{S,j}` and `h_{B,j}` are the terms sharing
/// support with `v_j`, normed by `Σ|coeff|`. `‖V‖` is bounded by `Σ|coeff|`
/// over all couplings and `W = 0`.
pub fn block_bounds(model: &BlockModel, grid: &TimeGrid) -> Result<BlockBound> {
    check_disjoint(model.blocks.iter().map(|b| b.qubits.as_slice()))?;
    let v_norm: f64 = model.couplings.iter().map(|c| c.coeff.abs()).sum();
    let t_total = grid.total_time;
    let mut per_block = vec![0.0; model.blocks.len()];
    let decompositions: Vec<SpectralDecomposition> = model
        .blocks
        .iter()
        .map(|b| SpectralDecomposition::new(&b.penalty.to_dense(0.0)?, DEFAULT_DEGENERACY_TOL))
        .collect::<Result<_>>()?;

    for c in &model.couplings {
        let sys_support = c.system.support();
        let Some(bi) = model.blocks.iter().position(|b| sys_support.iter().all(|q| b.qubits.contains(q))) else {
            return Err(Error::TermCrossesBlocks { term: c.system.to_sparse_string() });
        };
        let block = &model.blocks[bi];
        let d = &decompositions[bi];
        let bath_support = c.bath.support();
        let local_system = c.system.restricted(&block.qubits).expect("support checked");
        let local_bath = c.bath.restricted(&bath_support).expect("support of itself");
        let v = local_system.tensor(&local_bath).to_dense()? * C64::new(c.coeff, 0.0);
        let bath_dim = 1usize << bath_support.len();
        let id_b = dense::identity(bath_dim);
        let lift = |m: &OperatorMatrix| dense::kron(m, &id_b);
        let p = lift(&block.projector);

        for a in 0..d.len() {
            let pi = lift(&d.projector(a));
            let residual = dense::spectral_norm(&(&pi * &v * &pi * &p));
            if residual > 1e-9 {
                return Err(Error::BlockConditionViolated { block: bi + 1, residual });
            }
        }
        let pieces = off_diagonal_pieces(d, lift, &v, &p, model.penalty_strength)?;
        let values = d.eigenvalues();
        let spread = values.last().unwrap_or(&0.0) - values.first().unwrap_or(&0.0);
        let times = grid.sample_times(sample_count(spread, model.penalty_strength, t_total));
        let mut sup_k = 0.0f64;
        let mut final_k = 0.0;
        for &t in &times {
            final_k = dense::spectral_norm(&pieces.k_at(t, v.nrows()));
            sup_k = sup_k.max(final_k);
        }
        let hs = touches(&model.system, mask_of(&sys_support));
        let hs_norm = hs.coefficient_norm(0.0).max(hs.coefficient_norm(1.0));
        let hb_norm = touches(&model.bath, mask_of(&bath_support)).coefficient_norm(0.0);
        per_block[bi] += final_k + t_total * v_norm * sup_k + 2.0 * t_total * sup_k * (hs_norm + hb_norm);
    }
    Ok(BlockBound { total: per_block.iter().sum(), per_block, v_norm_bound: v_norm })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eq5b_arithmetic() {
        assert!((bound_eq5b(1.0, &[0.0, 1.0], 10.0).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(bound_eq5b(0.0, &[0.0, 1.0], 10.0).unwrap(), 0.0);
        assert!(matches!(bound_eq5b(1.0, &[0.0, 1.0], 0.0), Err(Error::ZeroPenalty)));
    }

    #[test]
    fn phase_integral_limits() {
        assert_eq!(phase_integral(0.0, 2.0), C64::new(2.0, 0.0));
        let z = phase_integral(std::f64::consts::TAU, 1.0);
        assert!(z.norm() < 1e-12);
    }
}
