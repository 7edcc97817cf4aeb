//! Adiabatic state transfer from logical qubit 1 to logical qubit 3 under
//! `H(s) = (1−s)(X₂X₃ + Z₂Z₃) + s(X₁X₂ + Z₁Z₂)`, bare or encoded.

use serde::{Deserialize, Serialize};

use super::{propagate_state, TimeGrid};
use crate::code::{codespace_projector, encode_hamiltonian, encode_state, encoding_unitary, RepresentativePolicy, SlotLayout, SubsystemCode};
use crate::conditions::gauge_sum_penalty;
use crate::dense::{self, OperatorMatrix, StateVector, C64};
use crate::error::{Error, Result};
use crate::hamiltonian::{Hamiltonian, ScheduleGroup};
use crate::pauli::{Letter, PauliOperator};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SwapConfig {
    pub total_time: f64,
    pub num_steps: usize,
    pub penalty_strength: f64,
    /// `g` in `V = g Σ_q (X_q ⊗ X_b + Z_q ⊗ Z_b)`.
    pub noise_strength: f64,
    /// `ω` in `H_B = ω Σ_b Z_b / 2`.
    pub bath_frequency: f64,
    pub bath_qubits: usize,
    /// Transferred state `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub theta: f64,
    pub phi: f64,
    pub policy: RepresentativePolicy,
}

impl Default for SwapConfig {
    fn default() -> Self {
        Self {
            total_time: 10.0,
            num_steps: 400,
            penalty_strength: 0.0,
            noise_strength: 0.0,
            bath_frequency: 1.0,
            bath_qubits: 1,
            theta: 1.1,
            phi: 0.7,
            policy: RepresentativePolicy::MinWeight,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SwapResult {
    pub total_time: f64,
    pub num_steps: usize,
    pub penalty_strength: f64,
    pub noise_strength: f64,
    /// `⟨ψ|ρ₃|ψ⟩` after projecting onto the codespace; not renormalized.
    pub fidelity: f64,
    pub codespace_population: f64,
}

/// The three-qubit transfer Hamiltonian.
pub fn swap_logical_hamiltonian() -> Hamiltonian {
    let mut h = Hamiltonian::new(3);
    for letter in [Letter::X, Letter::Z] {
        h.push(1.0, PauliOperator::uniform(3, &[1, 2], letter), ScheduleGroup::OneMinusS).expect("Hermitian");
        h.push(1.0, PauliOperator::uniform(3, &[0, 1], letter), ScheduleGroup::S).expect("Hermitian");
    }
    h
}

fn transferred_state(cfg: &SwapConfig) -> StateVector {
    let (half_s, half_c) = (cfg.theta / 2.0).sin_cos();
    StateVector::from_vec(vec![C64::new(half_c, 0.0), C64::from_polar(half_s, cfg.phi)])
}

/// `|ψ⟩₁ ⊗ (|01⟩ − |10⟩)/√2` on the three logical qubits.
fn initial_logical(cfg: &SwapConfig) -> StateVector {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = StateVector::from_vec(vec![dense::ZERO, C64::new(r, 0.0), C64::new(-r, 0.0), dense::ZERO]);
    transferred_state(cfg).kronecker(&singlet)
}

fn qubit_fidelity(state: &StateVector, num_qubits: usize, qubit: usize, target: &StateVector) -> f64 {
    let rho = dense::partial_trace(&dense::outer(state), num_qubits, &[qubit]);
    (target.adjoint() * rho * target)[(0, 0)].re
}

/// Transfer without encoding, penalty or bath.
pub fn run_unencoded_swap(cfg: &SwapConfig) -> Result<SwapResult> {
    let grid = TimeGrid::new(cfg.total_time, cfg.num_steps)?;
    let out = propagate_state(&swap_logical_hamiltonian(), &grid, &initial_logical(cfg))?;
    Ok(SwapResult {
        total_time: cfg.total_time,
        num_steps: cfg.num_steps,
        penalty_strength: 0.0,
        noise_strength: 0.0,
        fidelity: qubit_fidelity(&out, 3, 2, &transferred_state(cfg)),
        codespace_population: 1.0,
    })
}

/// Lowest-energy gauge state of `penalty` on the codespace, in gauge-slot coordinates.
pub fn penalty_ground_gauge_state(code: &SubsystemCode, penalty: &Hamiltonian, u_enc: &OperatorMatrix) -> Result<StateVector> {
    let layout = SlotLayout::of(code);
    let k = layout.logical.len();
    let r = layout.gauge.len();
    let m = u_enc.adjoint() * penalty.to_dense(0.0)? * u_enc;
    let h_g = OperatorMatrix::from_fn(1 << r, 1 << r, |i, j| m[(i << k, j << k)]);
    let (_, vectors) = dense::hermitian_eigen(&h_g);
    Ok(vectors.column(0).into_owned())
}

/// Encoded transfer with a `+1` gauge-sum penalty and a qubit bath coupled
/// through `X ⊗ X` and `Z ⊗ Z` on every physical qubit.
pub fn run_encoded_swap(code: &SubsystemCode, cfg: &SwapConfig) -> Result<SwapResult> {
    if code.num_logical() != 3 {
        return Err(Error::InvalidArgument(format!("transfer needs three logical qubits, {} has {}", code.name(), code.num_logical())));
    }
    let n = code.num_physical();
    let m = cfg.bath_qubits;
    let total = n + m;
    let grid = TimeGrid::new(cfg.total_time, cfg.num_steps)?;
    let u_enc = encoding_unitary(code)?;
    let layout = SlotLayout::of(code);
    let penalty = gauge_sum_penalty(code, 1.0)?;

    let mut h = encode_hamiltonian(&swap_logical_hamiltonian(), code, cfg.policy)?.extended(m);
    h = h.sum(&penalty.extended(m).scaled(cfg.penalty_strength))?;
    for b in 0..m {
        h.push(cfg.bath_frequency / 2.0, PauliOperator::single(total, n + b, Letter::Z), ScheduleGroup::Constant)?;
        if cfg.noise_strength != 0.0 {
            for q in 0..n {
                for letter in [Letter::X, Letter::Z] {
                    h.push(cfg.noise_strength, PauliOperator::uniform(total, &[q, n + b], letter), ScheduleGroup::Constant)?;
                }
            }
        }
    }
    let h = h.simplified();

    let gauge = penalty_ground_gauge_state(code, &penalty, &u_enc)?;
    let system = encode_state(&u_enc, &layout, &gauge, &initial_logical(cfg))?;
    let mut bath = StateVector::zeros(1 << m);
    bath[0] = dense::ONE;
    let out = propagate_state(&h, &grid, &system.kronecker(&bath))?;

    let id_b = dense::identity(1 << m);
    let projected = dense::kron(&codespace_projector(code)?, &id_b) * out;
    let decoded = dense::kron(&u_enc.adjoint(), &id_b) * &projected;
    Ok(SwapResult {
        total_time: cfg.total_time,
        num_steps: cfg.num_steps,
        penalty_strength: cfg.penalty_strength,
        noise_strength: cfg.noise_strength,
        fidelity: qubit_fidelity(&decoded, total, layout.logical.start + 2, &transferred_state(cfg)),
        codespace_population: projected.norm_squared(),
    })
}

/// Double `T` (and the step count) from `cfg.total_time` until the noiseless
/// encoded fidelity reaches `target`.
pub fn calibrate_time(code: &SubsystemCode, cfg: &SwapConfig, target: f64, max_doublings: usize) -> Result<SwapResult> {
    let mut trial = SwapConfig { noise_strength: 0.0, ..cfg.clone() };
    let mut last = run_encoded_swap(code, &trial)?;
    for _ in 0..max_doublings {
        if last.fidelity >= target {
            break;
        }
        trial.total_time *= 2.0;
        trial.num_steps *= 2;
        last = run_encoded_swap(code, &trial)?;
    }
    Ok(last)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_transfer_is_adiabatic() {
        let r = run_unencoded_swap(&SwapConfig { total_time: 5.0, num_steps: 200, ..Default::default() }).unwrap();
        assert!(r.fidelity > 0.999, "{}", r.fidelity);
        let none = run_unencoded_swap(&SwapConfig { total_time: 0.0, num_steps: 1, ..Default::default() }).unwrap();
        assert!((none.fidelity - 0.5).abs() < 1e-12);
    }
}
