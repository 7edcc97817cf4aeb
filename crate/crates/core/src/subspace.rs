//! Sparse orthonormal bases of stabilizer sectors.
//!
//! A Hamiltonian that commutes with a set of stabilizer generators is block
//! diagonal in their joint eigenspaces. Restricting to one sector at a time
//! keeps eigensolves at `2^{n−s}` instead of `2^n`.

use crate::dense::{self, OperatorMatrix, StateVector, C64};
use crate::error::{Error, Result};
use crate::f2::Span;
use crate::hamiltonian::Hamiltonian;
use crate::pauli::PauliOperator;

/// Largest register for which a sector basis is built.
pub const MAX_SECTOR_QUBITS: usize = 24;

type SparseVector = Vec<(usize, C64)>;

#[derive(Clone, Debug)]
pub struct SectorBasis {
    num_qubits: usize,
    signs: Vec<i8>,
    vectors: Vec<SparseVector>,
    owner: Vec<(u32, u32)>,
}

const UNOWNED: (u32, u32) = (u32::MAX, u32::MAX);

/// All `2^s` products of the signed generators, as `(x index mask, z index mask, amplitude)`.
fn signed_group(stabilizers: &[PauliOperator], signs: &[i8]) -> Vec<(usize, usize, C64)> {
    let n = stabilizers[0].num_qubits();
    let s = stabilizers.len();
    let mut out = Vec::with_capacity(1 << s);
    for m in 0u64..(1u64 << s) {
        let mut g = PauliOperator::identity(n);
        for i in 0..s {
            if m >> i & 1 == 1 {
                let gi = if signs[i] < 0 { stabilizers[i].negated() } else { stabilizers[i] };
                g = g.mul_unchecked(&gi);
            }
        }
        let (xi, zi) = g.index_masks();
        out.push((xi, zi, g.base_amplitude()));
    }
    out
}

impl SectorBasis {
    /// Basis of the joint eigenspace where generator `i` has eigenvalue `signs[i]`.
    pub fn new(stabilizers: &[PauliOperator], signs: &[i8]) -> Result<Self> {
        let Some(first) = stabilizers.first() else {
            return Err(Error::InvalidArgument("sector basis needs at least one stabilizer".into()));
        };
        let n = first.num_qubits();
        if n > MAX_SECTOR_QUBITS {
            return Err(Error::DenseLimit { qubits: n, limit: MAX_SECTOR_QUBITS });
        }
        if signs.len() != stabilizers.len() {
            return Err(Error::InvalidArgument("one sign per stabilizer generator".into()));
        }
        for (i, a) in stabilizers.iter().enumerate() {
            if !a.is_hermitian() {
                return Err(Error::NonHermitian(1.0));
            }
            for b in &stabilizers[i + 1..] {
                if !a.commutes(b)? {
                    return Err(Error::InvalidArgument("stabilizer generators must commute".into()));
                }
            }
        }
        let group = signed_group(stabilizers, signs);
        let x_span = Span::from_vectors(group.iter().map(|&(xi, _, _)| xi as u128));
        let dim = 1usize << n;
        let norm = 1.0 / group.len() as f64;
        let mut vectors = Vec::new();
        let mut owner = vec![UNOWNED; dim];
        for b in 0..dim {
            if x_span.reduce(b as u128) != b as u128 {
                continue;
            }
            let mut v: SparseVector = Vec::new();
            for &(xi, zi, amp) in &group {
                let val = if (zi & b).count_ones() % 2 == 1 { -amp } else { amp } * norm;
                let target = b ^ xi;
                match v.iter_mut().find(|(i, _)| *i == target) {
                    Some(e) => e.1 += val,
                    None => v.push((target, val)),
                }
            }
            v.retain(|(_, a)| a.norm() > 1e-14);
            let length = v.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt();
            if length < 1e-12 {
                continue;
            }
            v.sort_by_key(|&(i, _)| i);
            let index = vectors.len() as u32;
            for (pos, e) in v.iter_mut().enumerate() {
                e.1 /= length;
                owner[e.0] = (index, pos as u32);
            }
            vectors.push(v);
        }
        Ok(Self { num_qubits: n, signs: signs.to_vec(), vectors, owner })
    }

    /// Every sign pattern, `+1` sector first.
    pub fn all_sectors(stabilizers: &[PauliOperator]) -> Result<Vec<Self>> {
        let s = stabilizers.len();
        (0u64..(1u64 << s))
            .map(|m| {
                let signs: Vec<i8> = (0..s).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect();
                Self::new(stabilizers, &signs)
            })
            .collect()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// `⟨v_i|H(s)|v_j⟩` over the sector basis. `H` must commute with the
    /// stabilizers; any component leaking out of the sector is an error.
    pub fn restrict(&self, h: &Hamiltonian, s: f64) -> Result<OperatorMatrix> {
        if h.num_qubits() != self.num_qubits {
            return Err(Error::SizeMismatch { left: self.num_qubits, right: h.num_qubits() });
        }
        let terms: Vec<(usize, usize, C64)> = h
            .terms()
            .iter()
            .filter_map(|t| {
                let c = t.coeff * t.group.weight(s);
                (c != 0.0).then(|| {
                    let (xi, zi) = t.pauli.index_masks();
                    (xi, zi, t.pauli.base_amplitude() * c)
                })
            })
            .collect();
        let d = self.dim();
        let mut m = OperatorMatrix::zeros(d, d);
        for (j, v) in self.vectors.iter().enumerate() {
            for &(b, a) in v {
                for &(xi, zi, amp) in &terms {
                    let val = if (zi & b).count_ones() % 2 == 1 { -amp } else { amp } * a;
                    let (i, pos) = self.owner[b ^ xi];
                    if i == u32::MAX {
                        return Err(Error::InvalidArgument("Hamiltonian does not preserve the sector".into()));
                    }
                    m[(i as usize, j)] += self.vectors[i as usize][pos as usize].1.conj() * val;
                }
            }
        }
        Ok(m)
    }

    /// Full-register state with sector coordinates `coeffs`.
    pub fn embed(&self, coeffs: &[C64]) -> StateVector {
        let mut out = StateVector::zeros(1 << self.num_qubits);
        for (v, &c) in self.vectors.iter().zip(coeffs) {
            for &(b, a) in v {
                out[b] += a * c;
            }
        }
        out
    }

    /// Dense `2^n × dim` isometry whose columns are the basis vectors.
    pub fn to_dense_columns(&self) -> Result<OperatorMatrix> {
        dense::check_dense_limit(self.num_qubits, dense::DEFAULT_DENSE_LIMIT)?;
        let mut m = OperatorMatrix::zeros(1 << self.num_qubits, self.dim());
        for (j, v) in self.vectors.iter().enumerate() {
            for &(b, a) in v {
                m[(b, j)] = a;
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Letter;

    #[test]
    fn sectors_partition_the_space() {
        let s = [
            PauliOperator::uniform(4, &[0, 1, 2, 3], Letter::X),
            PauliOperator::uniform(4, &[0, 1, 2, 3], Letter::Z),
        ];
        let sectors = SectorBasis::all_sectors(&s).unwrap();
        assert!(sectors.iter().all(|b| b.dim() == 4));
        let mut all = OperatorMatrix::zeros(16, 0);
        for b in &sectors {
            let cols = b.to_dense_columns().unwrap();
            let gram = cols.adjoint() * &cols;
            assert!((gram - dense::identity(4)).norm() < 1e-12);
            all = OperatorMatrix::from_fn(16, all.ncols() + 4, |r, c| {
                if c < all.ncols() {
                    all[(r, c)]
                } else {
                    cols[(r, c - all.ncols())]
                }
            });
        }
        assert!((all.adjoint() * &all - dense::identity(16)).norm() < 1e-12);
    }

    #[test]
    fn restriction_matches_dense_projection() {
        let s = [PauliOperator::parse_sparse("X1 X2 X3", 3).unwrap()];
        let mut h = Hamiltonian::new(3);
        h.push(0.7, PauliOperator::parse_sparse("Z1 Z2", 3).unwrap(), Default::default()).unwrap();
        h.push(-0.4, PauliOperator::parse_sparse("X2", 3).unwrap(), Default::default()).unwrap();
        h.push(0.2, PauliOperator::parse_sparse("Y1 Y3", 3).unwrap(), Default::default()).unwrap();
        let basis = SectorBasis::new(&s, &[-1]).unwrap();
        let v = basis.to_dense_columns().unwrap();
        let expect = v.adjoint() * h.to_dense(0.0).unwrap() * &v;
        assert!((basis.restrict(&h, 0.0).unwrap() - expect).norm() < 1e-12);
    }
}
