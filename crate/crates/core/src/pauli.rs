//! n-qubit Pauli operators in symplectic bit form.
//!
//! A [`PauliOperator`] is `i^k · σ(x₀,z₀) ⊗ … ⊗ σ(x_{n−1},z_{n−1})`, where
//! `σ(0,0)=I`, `σ(1,0)=X`, `σ(0,1)=Z` and `σ(1,1)=Y`. With this convention an
//! operator is Hermitian exactly when `k` is even, and `X·Z = −i·Y` carries
//! phase exponent 3.
//!
//! Qubit `q` lives in bit `q` of the masks. Text forms index qubits from 1:
//! the dense form `"+XIZY"` lists every qubit, the sparse form `"X1 Z3 Y4"`
//! only the non-identity ones.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dense::{self, OperatorMatrix, C64};
use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 64;

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    num_qubits: usize,
    x: u64,
    z: u64,
    phase: u8,
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn popcount(v: u64) -> u32 {
    v.count_ones()
}

impl PauliOperator {
    pub fn identity(num_qubits: usize) -> Self {
        assert!(num_qubits <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        Self { num_qubits, x: 0, z: 0, phase: 0 }
    }

    pub fn new(num_qubits: usize, x: u64, z: u64, phase_exponent: u8) -> Result<Self> {
        if num_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits { got: num_qubits, max: MAX_QUBITS });
        }
        if (x | z) & !mask(num_qubits) != 0 {
            return Err(Error::InvalidArgument(format!("mask bits beyond qubit {num_qubits}")));
        }
        Ok(Self { num_qubits, x, z, phase: phase_exponent % 4 })
    }

    /// Tensor product of the given letters on the listed (0-based) qubits.
    pub fn from_sites(num_qubits: usize, sites: &[(usize, Letter)]) -> Self {
        let mut p = Self::identity(num_qubits);
        for &(q, letter) in sites {
            assert!(q < num_qubits, "qubit {q} out of range");
            let (bx, bz) = letter.bits();
            if bx {
                p.x |= 1 << q;
            }
            if bz {
                p.z |= 1 << q;
            }
        }
        p
    }

    pub fn single(num_qubits: usize, qubit: usize, letter: Letter) -> Self {
        Self::from_sites(num_qubits, &[(qubit, letter)])
    }

    /// Same letter on every listed qubit.
    pub fn uniform(num_qubits: usize, qubits: &[usize], letter: Letter) -> Self {
        let sites: Vec<_> = qubits.iter().map(|&q| (q, letter)).collect();
        Self::from_sites(num_qubits, &sites)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn phase_exponent(&self) -> u8 {
        self.phase
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        Letter::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    pub fn with_phase(mut self, phase_exponent: u8) -> Self {
        self.phase = phase_exponent % 4;
        self
    }

    pub fn negated(mut self) -> Self {
        self.phase = (self.phase + 2) % 4;
        self
    }

    /// The same letters with phase exponent zero.
    pub fn unsigned(self) -> Self {
        self.with_phase(0)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// `+1` or `−1` for Hermitian operators.
    pub fn sign(&self) -> Option<f64> {
        match self.phase {
            0 => Some(1.0),
            2 => Some(-1.0),
            _ => None,
        }
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            Err(Error::SizeMismatch { left: self.num_qubits, right: other.num_qubits })
        } else {
            Ok(())
        }
    }

    /// Exact group product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // σ(x,z) = i^{x·z} X^x Z^z, and Z^{z1} X^{x2} = (−1)^{z1·x2} X^{x2} Z^{z1}.
        let exponent = self.phase as i64
            + other.phase as i64
            + popcount(self.x & self.z) as i64
            + popcount(other.x & other.z) as i64
            + 2 * popcount(self.z & other.x) as i64
            - popcount(x & z) as i64;
        Self { num_qubits: self.num_qubits, x, z, phase: exponent.rem_euclid(4) as u8 }
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_size(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        (popcount(self.x & other.z) + popcount(self.z & other.x)) % 2 == 0
    }

    pub fn weight(&self) -> usize {
        popcount(self.x | self.z) as usize
    }

    /// Qubits where the operator acts non-trivially, ascending.
    pub fn support(&self) -> Vec<usize> {
        let m = self.x | self.z;
        (0..self.num_qubits).filter(|q| m >> q & 1 == 1).collect()
    }

    /// Symplectic vector: x in the low 64 bits, z in the high 64 bits.
    pub fn symplectic(&self) -> u128 {
        self.x as u128 | (self.z as u128) << 64
    }

    pub fn from_symplectic(num_qubits: usize, v: u128, phase_exponent: u8) -> Self {
        Self { num_qubits, x: v as u64, z: (v >> 64) as u64, phase: phase_exponent % 4 }
    }

    /// Append `extra` identity qubits after the existing ones.
    pub fn extended(&self, extra: usize) -> Self {
        assert!(self.num_qubits + extra <= MAX_QUBITS);
        Self { num_qubits: self.num_qubits + extra, ..*self }
    }

    /// Place this operator's qubit `j` at position `positions[j]` of a
    /// `num_qubits` register.
    pub fn embedded(&self, num_qubits: usize, positions: &[usize]) -> Self {
        assert_eq!(positions.len(), self.num_qubits);
        let mut out = Self::identity(num_qubits).with_phase(self.phase);
        for (j, &q) in positions.iter().enumerate() {
            out.x |= (self.x >> j & 1) << q;
            out.z |= (self.z >> j & 1) << q;
        }
        out
    }

    /// Inverse of [`embedded`](Self::embedded); `None` if the operator acts
    /// outside `positions`.
    pub fn restricted(&self, positions: &[usize]) -> Option<Self> {
        let mut covered = 0u64;
        let mut out = Self::identity(positions.len()).with_phase(self.phase);
        for (j, &q) in positions.iter().enumerate() {
            covered |= 1 << q;
            out.x |= (self.x >> q & 1) << j;
            out.z |= (self.z >> q & 1) << j;
        }
        if (self.x | self.z) & !covered != 0 {
            None
        } else {
            Some(out)
        }
    }

    /// Tensor product `self ⊗ other`, with `other` on the trailing qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        let n = self.num_qubits + other.num_qubits;
        assert!(n <= MAX_QUBITS);
        Self {
            num_qubits: n,
            x: self.x | other.x << self.num_qubits,
            z: self.z | other.z << self.num_qubits,
            phase: (self.phase + other.phase) % 4,
        }
    }

    /// Bit masks in dense-index space (qubit 0 is the most significant bit).
    pub(crate) fn index_masks(&self) -> (usize, usize) {
        let n = self.num_qubits;
        let mut xi = 0usize;
        let mut zi = 0usize;
        for q in 0..n {
            let bit = 1usize << (n - 1 - q);
            if self.x >> q & 1 == 1 {
                xi |= bit;
            }
            if self.z >> q & 1 == 1 {
                zi |= bit;
            }
        }
        (xi, zi)
    }

    /// `i^{k + |x∧z|}`: the amplitude of `P|b⟩` before the Z signs.
    pub(crate) fn base_amplitude(&self) -> C64 {
        match (self.phase as u32 + popcount(self.x & self.z)) % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        }
    }

    /// `out += scale · P · v` on a dense state of `2^n` amplitudes.
    pub fn apply_add(&self, v: &[C64], out: &mut [C64], scale: C64) {
        let (xi, zi) = self.index_masks();
        let amp = self.base_amplitude() * scale;
        for (b, &vb) in v.iter().enumerate() {
            if vb == dense::ZERO {
                continue;
            }
            let sign = if (zi & b).count_ones() % 2 == 1 { -amp } else { amp };
            out[b ^ xi] += sign * vb;
        }
    }

    pub fn to_dense(&self) -> Result<OperatorMatrix> {
        self.to_dense_with_limit(dense::DEFAULT_DENSE_LIMIT)
    }

    pub fn to_dense_with_limit(&self, limit: usize) -> Result<OperatorMatrix> {
        dense::check_dense_limit(self.num_qubits, limit)?;
        let dim = 1usize << self.num_qubits;
        let (xi, zi) = self.index_masks();
        let amp = self.base_amplitude();
        let mut m = OperatorMatrix::zeros(dim, dim);
        for b in 0..dim {
            let sign = if (zi & b).count_ones() % 2 == 1 { -amp } else { amp };
            m[(b ^ xi, b)] = sign;
        }
        Ok(m)
    }

    fn phase_prefix(&self, plus: &'static str) -> &'static str {
        match self.phase {
            0 => plus,
            1 => "+i",
            2 => "-",
            _ => "-i",
        }
    }

    /// Sparse text form, e.g. `"X1 Z3 Y4"`, `"-iX1"`, `"I"`.
    pub fn to_sparse_string(&self) -> String {
        let prefix = match self.phase {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        let body = if self.is_identity() {
            "I".to_string()
        } else {
            self.support()
                .iter()
                .map(|&q| format!("{}{}", self.letter(q).as_char(), q + 1))
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!("{prefix}{body}")
    }

    /// Parse the sparse text form on a register of `num_qubits` qubits.
    pub fn parse_sparse(text: &str, num_qubits: usize) -> Result<Self> {
        if num_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits { got: num_qubits, max: MAX_QUBITS });
        }
        let (phase, rest) = split_phase(text.trim());
        let mut p = Self::identity(num_qubits).with_phase(phase);
        let rest = rest.trim();
        if rest.is_empty() {
            return Err(Error::Parse(format!("empty Pauli string {text:?}")));
        }
        let mut seen = 0u64;
        for token in rest.split_whitespace() {
            if token == "I" {
                continue;
            }
            let mut chars = token.chars();
            let letter = chars
                .next()
                .and_then(Letter::from_char)
                .ok_or_else(|| Error::Parse(format!("bad token {token:?} in {text:?}")))?;
            let index: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::Parse(format!("bad qubit index in {token:?}")))?;
            if index == 0 || index > num_qubits {
                return Err(Error::Parse(format!("qubit {index} out of range 1..={num_qubits}")));
            }
            let q = index - 1;
            if seen >> q & 1 == 1 {
                return Err(Error::Parse(format!("qubit {index} repeated in {text:?}")));
            }
            seen |= 1 << q;
            let (bx, bz) = letter.bits();
            p.x |= (bx as u64) << q;
            p.z |= (bz as u64) << q;
        }
        Ok(p)
    }
}

fn split_phase(text: &str) -> (u8, &str) {
    for (prefix, phase) in [("+i", 1u8), ("-i", 3), ("i", 1), ("+", 0), ("-", 2)] {
        if let Some(rest) = text.strip_prefix(prefix) {
            return (phase, rest);
        }
    }
    (0, text)
}

impl fmt::Display for PauliOperator {
    /// Dense form with explicit phase, e.g. `+XIZY` or `-iZZ`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phase_prefix("+"))?;
        for q in 0..self.num_qubits {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (phase, body) = split_phase(s.trim());
        let body = body.trim();
        if body.is_empty() {
            return Err(Error::Parse(format!("empty Pauli string {s:?}")));
        }
        let n = body.chars().count();
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits { got: n, max: MAX_QUBITS });
        }
        let mut sites = Vec::with_capacity(n);
        for (q, c) in body.chars().enumerate() {
            let letter = Letter::from_char(c).ok_or_else(|| Error::Parse(format!("bad letter {c:?} in {s:?}")))?;
            sites.push((q, letter));
        }
        Ok(Self::from_sites(n, &sites).with_phase(phase))
    }
}

/// Serialize through the sparse text form instead of the dense one.
pub fn serialize_sparse<S: Serializer>(p: &PauliOperator, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_str(&p.to_sparse_string())
}

impl Serialize for PauliOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn involution() {
        let x = p("X");
        let sq = x.multiply(&x).unwrap();
        assert!(sq.is_identity());
        assert_eq!(sq.phase_exponent(), 0);
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let r = p("X").multiply(&p("Z")).unwrap();
        assert_eq!(r.letter(0), Letter::Y);
        assert_eq!(r.phase_exponent(), 3);
    }

    #[test]
    fn xx_times_zz_is_minus_yy() {
        let r = p("XX").multiply(&p("ZZ")).unwrap();
        assert_eq!(r, p("-YY"));
        // Dense oracle.
        let dense = p("XX").to_dense().unwrap() * p("ZZ").to_dense().unwrap();
        assert!((dense - r.to_dense().unwrap()).norm() < 1e-14);
    }

    #[test]
    fn commutation_examples() {
        assert!(p("XXXX").commutes(&p("ZZZZ")).unwrap());
        assert!(!p("X").commutes(&p("Z")).unwrap());
        let y2 = PauliOperator::single(2, 1, Letter::Y);
        assert!(!y2.commutes(&p("XX")).unwrap());
        let dense = crate::dense::commutator(&y2.to_dense().unwrap(), &p("XX").to_dense().unwrap());
        assert!(dense.norm() > 1.0);
    }

    #[test]
    fn size_mismatch_is_an_error() {
        assert!(matches!(p("X").multiply(&p("XX")), Err(Error::SizeMismatch { .. })));
        assert!(p("X").commutes(&p("XZ")).is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(PauliOperator::identity(5).weight(), 0);
        assert_eq!(PauliOperator::parse_sparse("X1 X8", 8).unwrap().weight(), 2);
        assert_eq!(PauliOperator::parse_sparse("Y1 Z3 X4", 4).unwrap().weight(), 3);
    }

    #[test]
    fn dense_single_qubit() {
        let z = p("Z").to_dense().unwrap();
        assert_eq!(z[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(z[(1, 1)], C64::new(-1.0, 0.0));
        let x = p("X").to_dense().unwrap();
        assert_eq!(x[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(x[(1, 0)], C64::new(1.0, 0.0));
        assert_eq!(x[(0, 0)], C64::new(0.0, 0.0));
        let xz = p("XZ").to_dense().unwrap();
        let kron = crate::dense::kron(&x, &z);
        assert!((xz - kron).norm() < 1e-15);
    }

    #[test]
    fn dense_limit_enforced() {
        let big = PauliOperator::identity(20);
        assert!(matches!(big.to_dense(), Err(Error::DenseLimit { .. })));
    }

    #[test]
    fn text_forms() {
        let a = p("-iXIZY");
        assert_eq!(a.to_string(), "-iXIZY");
        assert_eq!(a.to_sparse_string(), "-iX1 Z3 Y4");
        assert_eq!(PauliOperator::parse_sparse(&a.to_sparse_string(), 4).unwrap(), a);
        assert_eq!(PauliOperator::parse_sparse("I", 3).unwrap(), PauliOperator::identity(3));
        assert!(PauliOperator::parse_sparse("X0", 3).is_err());
        assert!(PauliOperator::parse_sparse("X1 Z1", 3).is_err());
        assert!("XQ".parse::<PauliOperator>().is_err());
    }

    #[test]
    fn embedding_round_trip() {
        let local = p("XZ");
        let global = local.embedded(5, &[1, 3]);
        assert_eq!(global.to_string(), "+IXIZI");
        assert_eq!(global.restricted(&[1, 3]), Some(local));
        assert_eq!(global.restricted(&[1, 2]), None);
    }
}
