//! The codes used in the examples, with fixed generator and logical choices.
//!
//! Qubit labels below are 1-based, as in the sparse text form.
//!
//! * `[[4,1,2]]`: qubits on a 2×2 grid, row-major. `S = ⟨X1X2X3X4, Z1Z2Z3Z4⟩`,
//!   `G = ⟨X3X4, Z2Z4, X1X2, Z1Z3⟩`, gauge pair `X′ = X1X2, Z′ = Z1Z3`,
//!   logical `X̄ = X1X3, Z̄ = Z1Z2`.
//! * `[[8,3,2]]`: the cyclic two-band 4×4 A-matrix. Qubits `2i−1 = (i,i)` and
//!   `2i = (i,i+1)` for rows 1–3, then `7 = (4,4)`, `8 = (4,1)`. Gauge
//!   generators `X1X2, X3X4, X5X6, X7X8, Z2Z3, Z4Z5, Z6Z7, Z8Z1`; logicals
//!   `X̄ = (X1X8, X1X2X3X8, X4X5)`, `Z̄ = (Z1Z2, Z3Z4Z5Z6, Z5Z6)`.
//! * chain `[[2N+2,N,2]]` with `a = N+1`: qubits `2i−1 = (i,i)`, `2i = (i,i+1)`
//!   for `i ≤ N`, then `2a−1 = (a,a)`, `2a = (a,1)`. Gauge generators
//!   `X_{2i−1}X_{2i}` (`i ≤ a`), `Z_{2i}Z_{2i+1}` (`i ≤ N`) and `Z1Z_{2a}`;
//!   logicals `X̄_i = X_{2i}X_{2i+1}`, `Z̄_i = Π_{j≤i} Z_{2j−1}Z_{2j}`.
//!
//! Gauge pairs for the last two are found by symplectic Gram-Schmidt on the
//! gauge generators.

use super::{symplectic_gram_schmidt, PauliPair, SubsystemCode};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliOperator};

fn sparse(text: &str, n: usize) -> PauliOperator {
    PauliOperator::parse_sparse(text, n).expect("builtin operator text")
}

fn all(n: usize, letter: Letter) -> PauliOperator {
    PauliOperator::uniform(n, &(0..n).collect::<Vec<_>>(), letter)
}

fn gram_schmidt_pairs(generators: &[PauliOperator]) -> Vec<PauliPair> {
    let n = generators[0].num_qubits();
    let (pairs, _) = symplectic_gram_schmidt(generators.iter().map(|g| g.symplectic()).collect());
    pairs
        .into_iter()
        .map(|(a, b)| (PauliOperator::from_symplectic(n, a, 0), PauliOperator::from_symplectic(n, b, 0)))
        .collect()
}

pub fn builtin_412() -> SubsystemCode {
    let n = 4;
    let gauge = ["X3 X4", "Z2 Z4", "X1 X2", "Z1 Z3"].map(|t| sparse(t, n)).to_vec();
    SubsystemCode::from_parts(
        "412",
        n,
        vec![all(n, Letter::X), all(n, Letter::Z)],
        gauge,
        vec![(sparse("X1 X2", n), sparse("Z1 Z3", n))],
        vec![(sparse("X1 X3", n), sparse("Z1 Z2", n))],
        2,
        Some(vec![(0, 0), (0, 1), (1, 0), (1, 1)]),
    )
    .expect("the [[4,1,2]] code is consistent")
}

pub fn builtin_832() -> SubsystemCode {
    let n = 8;
    let gauge: Vec<PauliOperator> = ["X1 X2", "X3 X4", "X5 X6", "X7 X8", "Z2 Z3", "Z4 Z5", "Z6 Z7", "Z8 Z1"]
        .map(|t| sparse(t, n))
        .to_vec();
    let logicals = vec![
        (sparse("X1 X8", n), sparse("Z1 Z2", n)),
        (sparse("X1 X2 X3 X8", n), sparse("Z3 Z4 Z5 Z6", n)),
        (sparse("X4 X5", n), sparse("Z5 Z6", n)),
    ];
    let geometry = vec![(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (3, 0)];
    SubsystemCode::from_parts(
        "832",
        n,
        vec![all(n, Letter::X), all(n, Letter::Z)],
        gauge.clone(),
        gram_schmidt_pairs(&gauge),
        logicals,
        2,
        Some(geometry),
    )
    .expect("the [[8,3,2]] code is consistent")
}

/// The `[[2N+2, N, 2]]` chain code.
pub fn builtin_chain(big_n: usize) -> Result<SubsystemCode> {
    if big_n < 2 {
        return Err(Error::InvalidArgument(format!("chain code needs N >= 2, got {big_n}")));
    }
    let a = big_n + 1;
    let n = 2 * a;
    if n > crate::pauli::MAX_QUBITS {
        return Err(Error::TooManyQubits { got: n, max: crate::pauli::MAX_QUBITS });
    }
    // 0-based: qubit 2i−2 is (i−1,i−1) and 2i−1 is (i−1,i) for 1-based row i.
    let mut geometry = Vec::with_capacity(n);
    for i in 0..big_n {
        geometry.push((i, i));
        geometry.push((i, i + 1));
    }
    geometry.push((a - 1, a - 1));
    geometry.push((a - 1, 0));

    let mut gauge = Vec::new();
    for i in 0..a {
        gauge.push(PauliOperator::uniform(n, &[2 * i, 2 * i + 1], Letter::X));
    }
    for i in 0..big_n {
        gauge.push(PauliOperator::uniform(n, &[2 * i + 1, 2 * i + 2], Letter::Z));
    }
    gauge.push(PauliOperator::uniform(n, &[0, n - 1], Letter::Z));

    let logicals = (0..big_n)
        .map(|i| {
            let x = PauliOperator::uniform(n, &[2 * i + 1, 2 * i + 2], Letter::X);
            let z = PauliOperator::uniform(n, &(0..2 * i + 2).collect::<Vec<_>>(), Letter::Z);
            (x, z)
        })
        .collect();
    SubsystemCode::from_parts(
        format!("chain-{big_n}"),
        n,
        vec![all(n, Letter::X), all(n, Letter::Z)],
        gauge.clone(),
        gram_schmidt_pairs(&gauge),
        logicals,
        2,
        Some(geometry),
    )
}

/// `count` independent copies of `[[4,1,2]]`.
pub fn builtin_412_blocks(count: usize) -> Result<SubsystemCode> {
    let blocks = vec![builtin_412(); count];
    Ok(SubsystemCode::direct_sum(&blocks)?.with_name(format!("412x{count}")))
}

/// Look up `"412"`, `"832"`, `"chain-N"` or `"412xM"`.
pub fn by_name(name: &str) -> Result<SubsystemCode> {
    match name {
        "412" => Ok(builtin_412()),
        "832" => Ok(builtin_832()),
        _ => {
            if let Some(rest) = name.strip_prefix("chain-") {
                let big_n = rest.parse().map_err(|_| Error::Config(format!("bad chain length in {name:?}")))?;
                builtin_chain(big_n)
            } else if let Some(rest) = name.strip_prefix("412x") {
                let m = rest.parse().map_err(|_| Error::Config(format!("bad block count in {name:?}")))?;
                builtin_412_blocks(m)
            } else {
                Err(Error::Config(format!("unknown builtin code {name:?}")))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::CodeParams;

    #[test]
    fn builtin_parameters() {
        assert_eq!(builtin_412().params(), CodeParams { n: 4, k: 1, d: 2 });
        assert_eq!(builtin_832().params(), CodeParams { n: 8, k: 3, d: 2 });
        for big_n in 2..=6 {
            let c = builtin_chain(big_n).unwrap();
            assert_eq!(c.params(), CodeParams { n: 2 * big_n + 2, k: big_n, d: 2 });
            assert_eq!(c.num_gauge_qubits(), big_n);
        }
        assert!(builtin_chain(1).is_err());
    }

    #[test]
    fn stabilizers_and_logicals_as_written() {
        let c = builtin_412();
        assert_eq!(c.stabilizers()[0].to_string(), "+XXXX");
        assert_eq!(c.stabilizers()[1].to_string(), "+ZZZZ");
        assert_eq!(builtin_832().logical_x(2).to_sparse_string(), "X4 X5");
    }

    #[test]
    fn brute_force_distances() {
        assert_eq!(builtin_412().brute_force_distance(), Some(2));
        assert_eq!(builtin_832().brute_force_distance(), Some(2));
        assert_eq!(builtin_chain(2).unwrap().brute_force_distance(), Some(2));
    }

    #[test]
    fn names() {
        assert_eq!(by_name("chain-4").unwrap().params().n, 10);
        assert_eq!(by_name("412x2").unwrap().params(), CodeParams { n: 8, k: 2, d: 2 });
        assert!(by_name("713").is_err());
    }
}
