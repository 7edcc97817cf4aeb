//! Encoded Hamiltonians and the encoding unitary.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{lightest_representative, SubsystemCode};
use crate::dense::{self, OperatorMatrix, StateVector, C64};
use crate::error::{Error, Result};
use crate::f2;
use crate::hamiltonian::Hamiltonian;
use crate::pauli::{Letter, PauliOperator};

/// Which physical representative stands in for a logical Pauli.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepresentativePolicy {
    /// Product of the code's bare logical generators.
    #[default]
    Canonical,
    /// The canonical product times the stabilizer element that minimizes
    /// physical weight (exhaustive over the stabilizer group when `s ≤ 10`).
    MinWeight,
}

const MIN_WEIGHT_MAX_STABILIZERS: usize = 10;

/// Map a Pauli on the `k` logical qubits to a physical bare logical operator,
/// keeping its exact phase.
pub fn encode_pauli(p: &PauliOperator, code: &SubsystemCode, policy: RepresentativePolicy) -> Result<PauliOperator> {
    let n = code.num_physical();
    let k = code.num_logical();
    let mut out = PauliOperator::identity(n).with_phase(p.phase_exponent());
    for q in 0..p.num_qubits() {
        let letter = p.letter(q);
        if letter == Letter::I {
            continue;
        }
        if q >= k {
            return Err(Error::UnmappableTerm(p.to_sparse_string()));
        }
        let (x, z) = code.logical_pairs()[q];
        let image = match letter {
            Letter::X => x,
            Letter::Z => z,
            // Y = i·X·Z
            Letter::Y => x.mul_unchecked(&z).mul_unchecked(&PauliOperator::identity(n).with_phase(1)),
            Letter::I => unreachable!(),
        };
        out = out.mul_unchecked(&image);
    }
    if policy == RepresentativePolicy::MinWeight && code.num_stabilizers() <= MIN_WEIGHT_MAX_STABILIZERS {
        let group = code.stabilizer_elements()?;
        out = lightest_representative(&out, &group).0;
    }
    Ok(out)
}

/// Replace every term of a logical Hamiltonian by its encoded representative.
/// Schedule groups carry over unchanged.
pub fn encode_hamiltonian(h: &Hamiltonian, code: &SubsystemCode, policy: RepresentativePolicy) -> Result<Hamiltonian> {
    let mut out = Hamiltonian::new(code.num_physical());
    for t in h.terms() {
        let p = encode_pauli(&t.pauli, code, policy)?;
        out.push(t.coeff, p, t.group)?;
    }
    Ok(out)
}

/// Positions of the unencoded register: `s` ancillas, then `r` gauge qubits,
/// then `k` logical qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotLayout {
    pub ancilla: Range<usize>,
    pub gauge: Range<usize>,
    pub logical: Range<usize>,
}

impl SlotLayout {
    pub fn of(code: &SubsystemCode) -> Self {
        let s = code.num_stabilizers();
        let r = code.num_gauge_qubits();
        let k = code.num_logical();
        Self { ancilla: 0..s, gauge: s..s + r, logical: s + r..s + r + k }
    }
}

fn synthesis_error(a: &PauliOperator, b: &PauliOperator, reason: &str) -> Error {
    Error::Synthesis { first: a.to_sparse_string(), second: b.to_sparse_string(), reason: reason.into() }
}

/// Images of the single-qubit `Z` and `X` operators on each slot, in
/// [`SlotLayout`] order. Ancilla `X` images are destabilizers.
fn slot_images(code: &SubsystemCode) -> Result<(Vec<PauliOperator>, Vec<PauliOperator>)> {
    let n = code.num_physical();
    let mut z_images: Vec<PauliOperator> = code.stabilizers().to_vec();
    z_images.extend(code.gauge_pairs().iter().map(|p| p.1));
    z_images.extend(code.logical_pairs().iter().map(|p| p.1));
    let mut paired_x: Vec<PauliOperator> = code.gauge_pairs().iter().map(|p| p.0).collect();
    paired_x.extend(code.logical_pairs().iter().map(|p| p.0));
    let s = code.num_stabilizers();

    for (i, a) in z_images.iter().enumerate() {
        for b in &z_images[i + 1..] {
            if !a.commutes_unchecked(b) {
                return Err(synthesis_error(a, b, "must commute"));
            }
        }
    }
    for (i, a) in paired_x.iter().enumerate() {
        for (j, z) in z_images[s..].iter().enumerate() {
            if a.commutes_unchecked(z) == (i == j) {
                return Err(synthesis_error(a, z, if i == j { "must anticommute" } else { "must commute" }));
            }
        }
        for b in &paired_x[i + 1..] {
            if !a.commutes_unchecked(b) {
                return Err(synthesis_error(a, b, "must commute"));
            }
        }
    }

    // Destabilizer d_i: anticommutes with S_i only among all other images.
    let constraints: Vec<PauliOperator> = z_images.iter().chain(paired_x.iter()).copied().collect();
    let rows: Vec<u128> = constraints.iter().map(|c| f2::swap_halves(c.symplectic())).collect();
    let mut destabilizers: Vec<u128> = Vec::with_capacity(s);
    for i in 0..s {
        let rhs: Vec<bool> = (0..constraints.len()).map(|j| j == i).collect();
        let d = f2::solve(&rows, &rhs).ok_or_else(|| synthesis_error(&z_images[i], &z_images[i], "has no destabilizer"))?;
        destabilizers.push(d);
    }
    for i in 0..s {
        for j in 0..i {
            if f2::symplectic_product(destabilizers[i], destabilizers[j]) {
                destabilizers[i] ^= z_images[j].symplectic();
            }
        }
    }
    let mut x_images: Vec<PauliOperator> =
        destabilizers.iter().map(|&d| PauliOperator::from_symplectic(n, d, 0)).collect();
    x_images.extend(paired_x);
    Ok((z_images, x_images))
}

/// Clifford unitary `U_enc` with `U_enc Z_j U_enc† = (S, Z′, Z̄)_j` and
/// `U_enc X_j U_enc† = (D, X′, X̄)_j` in [`SlotLayout`] order.
///
/// Column `b` is `Π_j X-image_j^{b_j} |ψ₀⟩`, where `|ψ₀⟩` is the joint `+1`
/// eigenstate of all `Z` images.
pub fn encoding_unitary(code: &SubsystemCode) -> Result<OperatorMatrix> {
    let n = code.num_physical();
    dense::check_dense_limit(n, dense::DEFAULT_DENSE_LIMIT)?;
    let (z_images, x_images) = slot_images(code)?;
    let dim = 1usize << n;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut psi: Vec<C64> = (0..dim).map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
    for z in &z_images {
        let mut out = psi.iter().map(|a| a * 0.5).collect::<Vec<_>>();
        z.apply_add(&psi, &mut out, C64::new(0.5, 0.0));
        psi = out;
    }
    let norm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-8 {
        return Err(Error::Synthesis {
            first: "Z images".into(),
            second: "their joint +1 eigenspace".into(),
            reason: "is empty".into(),
        });
    }
    let pivot = psi.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or(dense::ONE);
    let fix = pivot.conj() / (pivot.norm() * norm);
    let psi: Vec<C64> = psi.iter().map(|a| a * fix).collect();

    let mut u = OperatorMatrix::zeros(dim, dim);
    u.column_mut(0).copy_from_slice(&psi);
    for b in 1..dim {
        let low = b.trailing_zeros() as usize;
        let prev: Vec<C64> = u.column(b & (b - 1)).iter().copied().collect();
        let mut out = vec![dense::ZERO; dim];
        x_images[n - 1 - low].apply_add(&prev, &mut out, dense::ONE);
        u.column_mut(b).copy_from_slice(&out);
    }
    Ok(u)
}

/// Unencoded state `|0…0⟩_ancilla ⊗ |gauge⟩ ⊗ |logical⟩` mapped through `U_enc`.
pub fn encode_state(
    u_enc: &OperatorMatrix,
    layout: &SlotLayout,
    gauge: &StateVector,
    logical: &StateVector,
) -> Result<StateVector> {
    let s = layout.ancilla.len();
    if gauge.len() != 1 << layout.gauge.len() || logical.len() != 1 << layout.logical.len() {
        return Err(Error::InvalidArgument("slot state dimensions do not match the code".into()));
    }
    let mut ancilla = StateVector::zeros(1 << s);
    ancilla[0] = dense::ONE;
    let full = ancilla.kronecker(gauge).kronecker(logical);
    Ok(u_enc * full)
}
