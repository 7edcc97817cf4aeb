//! Penalty spectrum of the protected Ising chain `[[2N+2, N, 2]]`.
//!
//! The penalty `H_p = −(Σ_i X_{2i−1}X_{2i} + Σ_i Z_{2i}Z_{2i+1} + Z_1Z_{2N+2})`
//! commutes with the two stabilizers `ΠX` and `ΠZ`. In the sector with
//! eigenvalues `(s_x, s_z)` it is unitarily equivalent to `2^N` copies of
//! the `N`-qubit Hamiltonian
//! `−(Σ X_i + s_x ΠX_i + Z_1 + Σ Z_iZ_{i+1} + s_z Z_N)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::dense;
use crate::error::{Error, Result};
use crate::hamiltonian::{Hamiltonian, ScheduleGroup};
use crate::pauli::{Letter, PauliOperator};
use crate::spectral::{group_eigenvalues, SpectralDecomposition, DEFAULT_DEGENERACY_TOL};

/// Largest `N` accepted by the sector method.
pub const MAX_SECTOR_CHAIN: usize = 14;

pub const SECTORS: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// Chain penalty on `2N+2` qubits, every term with coefficient `−1`.
pub fn chain_penalty(big_n: usize) -> Result<Hamiltonian> {
    if big_n == 0 {
        return Err(Error::InvalidArgument("chain length must be at least 1".into()));
    }
    let n = 2 * big_n + 2;
    let mut h = Hamiltonian::new(n);
    for i in 0..=big_n {
        h.push(-1.0, PauliOperator::uniform(n, &[2 * i, 2 * i + 1], Letter::X), ScheduleGroup::Constant)?;
    }
    for i in 0..big_n {
        h.push(-1.0, PauliOperator::uniform(n, &[2 * i + 1, 2 * i + 2], Letter::Z), ScheduleGroup::Constant)?;
    }
    h.push(-1.0, PauliOperator::uniform(n, &[0, n - 1], Letter::Z), ScheduleGroup::Constant)?;
    Ok(h)
}

/// The `N`-qubit sector Hamiltonian for stabilizer signs `(s_x, s_z)`.
pub fn chain_sector_hamiltonian(big_n: usize, s_x: i8, s_z: i8) -> Result<Hamiltonian> {
    if big_n == 0 || big_n > MAX_SECTOR_CHAIN {
        return Err(Error::InvalidArgument(format!("chain length {big_n} outside 1..={MAX_SECTOR_CHAIN}")));
    }
    if s_x.abs() != 1 || s_z.abs() != 1 {
        return Err(Error::InvalidArgument("sector signs must be ±1".into()));
    }
    let n = big_n;
    let all: Vec<usize> = (0..n).collect();
    let mut h = Hamiltonian::new(n);
    for q in 0..n {
        h.push(-1.0, PauliOperator::single(n, q, Letter::X), ScheduleGroup::Constant)?;
    }
    h.push(-f64::from(s_x), PauliOperator::uniform(n, &all, Letter::X), ScheduleGroup::Constant)?;
    h.push(-1.0, PauliOperator::single(n, 0, Letter::Z), ScheduleGroup::Constant)?;
    for q in 0..n - 1 {
        h.push(-1.0, PauliOperator::uniform(n, &[q, q + 1], Letter::Z), ScheduleGroup::Constant)?;
    }
    h.push(-f64::from(s_z), PauliOperator::single(n, n - 1, Letter::Z), ScheduleGroup::Constant)?;
    Ok(h.simplified())
}

pub fn chain_penalty_spectrum(big_n: usize, s_x: i8, s_z: i8) -> Result<SpectralDecomposition> {
    let h = chain_sector_hamiltonian(big_n, s_x, s_z)?;
    SpectralDecomposition::new(&h.to_dense_with_limit(0.0, MAX_SECTOR_CHAIN)?, DEFAULT_DEGENERACY_TOL)
}

fn sector_eigenvalues(big_n: usize, s_x: i8, s_z: i8) -> Result<Vec<f64>> {
    let h = chain_sector_hamiltonian(big_n, s_x, s_z)?;
    Ok(dense::hermitian_eigenvalues(&h.to_dense_with_limit(0.0, MAX_SECTOR_CHAIN)?))
}

/// Full penalty spectrum assembled from the four sectors, each sector
/// eigenvalue repeated `2^N` times. Sorted ascending.
pub fn chain_sector_union(big_n: usize) -> Result<Vec<f64>> {
    let copies = 1usize << big_n;
    let mut all = Vec::with_capacity(4 * copies << big_n);
    for (s_x, s_z) in SECTORS {
        for v in sector_eigenvalues(big_n, s_x, s_z)? {
            all.extend(std::iter::repeat_n(v, copies));
        }
    }
    all.sort_by(f64::total_cmp);
    Ok(all)
}

#[derive(Clone, Debug, Serialize)]
pub struct GapRow {
    #[serde(rename = "N")]
    pub big_n: usize,
    pub ground_energy: f64,
    pub ground_sector: (i8, i8),
    pub gap: f64,
    pub scaled_gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapScan {
    pub rows: Vec<GapRow>,
    /// Mean of `gap·(N+1)`.
    pub scaled_mean: f64,
    /// Largest `|gap·(N+1) − mean| / mean`.
    pub scaled_spread: f64,
}

/// Ground energy and gap of the chain penalty for one `N`.
pub fn chain_gap(big_n: usize) -> Result<GapRow> {
    let spectra: Vec<((i8, i8), Vec<f64>)> = SECTORS
        .par_iter()
        .map(|&(s_x, s_z)| sector_eigenvalues(big_n, s_x, s_z).map(|e| ((s_x, s_z), e)))
        .collect::<Result<_>>()?;
    let mut all: Vec<f64> = spectra.iter().flat_map(|(_, e)| e.iter().copied()).collect();
    all.sort_by(f64::total_cmp);
    let groups = group_eigenvalues(&all, DEFAULT_DEGENERACY_TOL);
    let ground = groups[0].0;
    let gap = groups.get(1).map_or(0.0, |g| g.0 - ground);
    let ground_sector = spectra
        .iter()
        .min_by(|a, b| a.1[0].total_cmp(&b.1[0]))
        .map(|(s, _)| *s)
        .unwrap_or((1, 1));
    Ok(GapRow { big_n, ground_energy: ground, ground_sector, gap, scaled_gap: gap * (big_n + 1) as f64 })
}

pub fn chain_gap_scan(range: impl IntoIterator<Item = usize>) -> Result<GapScan> {
    let rows: Vec<GapRow> = range.into_iter().map(chain_gap).collect::<Result<_>>()?;
    let scaled: Vec<f64> = rows.iter().map(|r| r.scaled_gap).collect();
    let mean = if scaled.is_empty() { 0.0 } else { scaled.iter().sum::<f64>() / scaled.len() as f64 };
    let spread = scaled.iter().map(|v| ((v - mean) / mean).abs()).fold(0.0, f64::max);
    Ok(GapScan { rows, scaled_mean: mean, scaled_spread: spread })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::builtin::builtin_chain;
    use crate::conditions::ground_in_codespace;

    fn dense_spectrum(h: &Hamiltonian) -> Vec<f64> {
        dense::hermitian_eigenvalues(&h.to_dense(0.0).unwrap())
    }

    #[test]
    fn sector_union_matches_dense() {
        for big_n in 1..=3 {
            let direct = dense_spectrum(&chain_penalty(big_n).unwrap());
            let union = chain_sector_union(big_n).unwrap();
            assert_eq!(direct.len(), union.len());
            for (a, b) in direct.iter().zip(&union) {
                assert!((a - b).abs() < 1e-8, "N={big_n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn ground_sector_is_plus_plus() {
        for big_n in 1..=6 {
            assert_eq!(chain_gap(big_n).unwrap().ground_sector, (1, 1));
        }
    }

    #[test]
    fn golden_gaps() {
        let expect = [(2, 0.5358983850), (3, 0.3978247345), (4, 0.3167688810)];
        for (big_n, gap) in expect {
            assert!((chain_gap(big_n).unwrap().gap - gap).abs() < 1e-8);
        }
    }

    #[test]
    fn penalty_is_negated_gauge_sum() {
        let code = builtin_chain(3).unwrap();
        let gauge = Hamiltonian::from_paulis(8, -1.0, code.gauge_generators()).unwrap();
        let a = gauge.to_dense(0.0).unwrap();
        let b = chain_penalty(3).unwrap().to_dense(0.0).unwrap();
        assert!((a - b).norm() < 1e-12);
        assert!(ground_in_codespace(&chain_penalty(3).unwrap(), &code, 1e-9).unwrap().satisfied);
    }

    #[test]
    fn positive_zz_sign_leaves_codespace_for_even_n() {
        let big_n = 2;
        let code = builtin_chain(big_n).unwrap();
        let h = chain_penalty(big_n).unwrap();
        let mut flipped = Hamiltonian::new(h.num_qubits());
        for t in h.terms() {
            let q = t.pauli.support()[0];
            let c = if t.pauli.letter(q) == Letter::Z { 1.0 } else { -1.0 };
            flipped.push(c, t.pauli, t.group).unwrap();
        }
        assert!(!ground_in_codespace(&flipped, &code, 1e-9).unwrap().satisfied);
        for (a, b) in dense_spectrum(&flipped).iter().zip(dense_spectrum(&h)) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
