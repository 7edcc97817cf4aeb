//! Linear algebra over F2: binary matrices for A-matrix codes, and bit-packed
//! symplectic vectors (`u128`, x in the low word, z in the high word) for
//! Pauli group computations.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Brute-force row-space enumeration is capped at `2^MAX_ENUMERATION_ROWS`.
pub const MAX_ENUMERATION_ROWS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        Self { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from rows of 0/1 entries. All rows must have the same length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::Parse(format!("row {} has {} entries, expected {cols}", i + 1, row.len())));
            }
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => m.set(i, j, true),
                    other => return Err(Error::Parse(format!("entry {other} is not binary"))),
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.data[r * self.words + c / 64];
        if value {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    /// Number of nonzero entries.
    pub fn hamming_weight(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Nonzero entries in row-major order.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.hamming_weight());
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.push((r, c));
                }
            }
        }
        out
    }

    /// Rank over F2 by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<u64>> = (0..self.rows).map(|r| self.row_words(r).to_vec()).collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let (w, b) = (c / 64, c % 64);
            let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] >> b & 1 == 1) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row[w] >> b & 1 == 1 {
                    row.iter_mut().zip(&pivot).for_each(|(a, p)| *a ^= p);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Minimum Hamming weight over all nonzero F2 combinations of rows.
    ///
    /// Enumerates the `2^rows − 1` combinations in Gray-code order. Returns
    /// `None` when the row space is `{0}`.
    pub fn min_nonzero_weight_rowspace(&self) -> Result<Option<usize>> {
        if self.rows > MAX_ENUMERATION_ROWS {
            return Err(Error::TooManyRows { got: self.rows, max: MAX_ENUMERATION_ROWS });
        }
        let mut acc = vec![0u64; self.words];
        let mut best: Option<usize> = None;
        for i in 1u64..(1u64 << self.rows) {
            let flip = i.trailing_zeros() as usize;
            acc.iter_mut().zip(self.row_words(flip)).for_each(|(a, r)| *a ^= r);
            let w: usize = acc.iter().map(|x| x.count_ones() as usize).sum();
            if w > 0 && best.is_none_or(|b| w < b) {
                best = Some(w);
            }
        }
        Ok(best)
    }

    /// Basis of `{v : M v = 0}`, each vector given as its list of bits.
    pub fn nullspace(&self) -> Vec<Vec<bool>> {
        let mut rows: Vec<Vec<bool>> = (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c)).collect()).collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&i| rows[i][c]) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row[c] {
                    row.iter_mut().zip(&pivot).for_each(|(a, p)| *a ^= *p);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![false; self.cols];
                v[f] = true;
                for (r, &pc) in pivots.iter().enumerate() {
                    if rows[r][f] {
                        v[pc] = true;
                    }
                }
                v
            })
            .collect()
    }

    /// Plain-text form: one row per line, characters `0`/`1`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.push(if self.get(r, c) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }
}

impl FromStr for BinaryMatrix {
    type Err = Error;

    /// Parses the plain-text form. Blank lines and surrounding whitespace are
    /// ignored; an input with no rows is rejected.
    fn from_str(text: &str) -> Result<Self> {
        let rows: Vec<Vec<u8>> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| match c {
                        '0' => Ok(0u8),
                        '1' => Ok(1u8),
                        other => Err(Error::Parse(format!("unexpected character {other:?} in A-matrix"))),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        if rows.is_empty() {
            return Err(Error::Parse("A-matrix text has no rows".into()));
        }
        Self::from_rows(&rows)
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

// ---------------------------------------------------------------------------
// Symplectic vectors

pub fn swap_halves(v: u128) -> u128 {
    v.rotate_left(64)
}

/// Symplectic form `x_a·z_b + z_a·x_b (mod 2)`; `true` means anticommuting.
pub fn symplectic_product(a: u128, b: u128) -> bool {
    (a & swap_halves(b)).count_ones() % 2 == 1
}

pub fn dot(a: u128, b: u128) -> bool {
    (a & b).count_ones() % 2 == 1
}

pub fn valid_mask(num_qubits: usize) -> u128 {
    let low: u128 = if num_qubits == 64 { u64::MAX as u128 } else { (1u128 << num_qubits) - 1 };
    low | low << 64
}

/// Echelon-form span of F2 vectors, reduced on the highest set bit.
#[derive(Clone, Debug, Default)]
pub struct Span {
    basis: Vec<u128>,
}

impl Span {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors(vectors: impl IntoIterator<Item = u128>) -> Self {
        let mut s = Self::new();
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn reduce(&self, mut v: u128) -> u128 {
        for &b in &self.basis {
            let lead = 127 - b.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    /// Adds `v`; returns `false` if it was already in the span.
    pub fn insert(&mut self, v: u128) -> bool {
        let r = self.reduce(v);
        if r == 0 {
            return false;
        }
        let lead = 127 - r.leading_zeros();
        for b in self.basis.iter_mut() {
            if *b >> lead & 1 == 1 {
                *b ^= r;
            }
        }
        let pos = self.basis.partition_point(|&b| b.leading_zeros() < r.leading_zeros());
        self.basis.insert(pos, r);
        true
    }

    pub fn contains(&self, v: u128) -> bool {
        self.reduce(v) == 0
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Basis of `{d : dot(row, d) = 0 for every row}` restricted to `valid` bits.
pub fn kernel(rows: &[u128], valid: u128) -> Vec<u128> {
    let (reduced, pivots) = rref(rows.iter().map(|&r| (r, false)).collect());
    let mut out = Vec::new();
    for f in 0..128u32 {
        if valid >> f & 1 == 0 || pivots.contains(&f) {
            continue;
        }
        let mut v = 1u128 << f;
        for (i, &pc) in pivots.iter().enumerate() {
            if reduced[i].0 >> f & 1 == 1 {
                v |= 1u128 << pc;
            }
        }
        out.push(v);
    }
    out
}

/// Some `d` with `dot(rows[i], d) = rhs[i]` for all `i`, if one exists.
pub fn solve(rows: &[u128], rhs: &[bool]) -> Option<u128> {
    let (reduced, pivots) = rref(rows.iter().copied().zip(rhs.iter().copied()).collect());
    let mut d = 0u128;
    for (i, &(row, b)) in reduced.iter().enumerate() {
        if i < pivots.len() {
            if b {
                d |= 1u128 << pivots[i];
            }
        } else if row == 0 && b {
            return None;
        }
    }
    Some(d)
}

/// Reduced row echelon form over the 128 columns, pivoting on the lowest
/// available column. Returns the rows (pivot rows first) and pivot columns.
fn rref(mut rows: Vec<(u128, bool)>) -> (Vec<(u128, bool)>, Vec<u32>) {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..128u32 {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i].0 >> c & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row.0 >> c & 1 == 1 {
                row.0 ^= pivot.0;
                row.1 ^= pivot.1;
            }
        }
        pivots.push(c);
        rank += 1;
    }
    (rows, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> BinaryMatrix {
        BinaryMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn ranks() {
        assert_eq!(m(&[&[1, 1], &[1, 1]]).rank(), 1);
        assert_eq!(BinaryMatrix::identity(4).rank(), 4);
        let swap = m(&[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[1, 0, 0, 1]]);
        assert_eq!(swap.rank(), 3);
    }

    #[test]
    fn min_weights() {
        assert_eq!(m(&[&[1, 1], &[1, 1]]).min_nonzero_weight_rowspace().unwrap(), Some(2));
        assert_eq!(BinaryMatrix::identity(3).min_nonzero_weight_rowspace().unwrap(), Some(1));
        let chain4 = m(&[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[1, 0, 0, 1]]);
        assert_eq!(chain4.min_nonzero_weight_rowspace().unwrap(), Some(2));
        assert_eq!(BinaryMatrix::zeros(2, 3).min_nonzero_weight_rowspace().unwrap(), None);
        assert!(matches!(
            BinaryMatrix::zeros(21, 2).min_nonzero_weight_rowspace(),
            Err(Error::TooManyRows { .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let a: BinaryMatrix = "110\n011\n".parse().unwrap();
        assert_eq!(a.to_text(), "110\n011\n");
        assert!("".parse::<BinaryMatrix>().is_err());
        assert!("12\n".parse::<BinaryMatrix>().is_err());
        assert!("11\n1\n".parse::<BinaryMatrix>().is_err());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = m(&[&[1, 1, 0, 1], &[0, 1, 1, 1]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            for r in 0..a.rows() {
                let s = (0..a.cols()).filter(|&c| a.get(r, c) && v[c]).count();
                assert_eq!(s % 2, 0);
            }
        }
    }

    #[test]
    fn solve_and_kernel() {
        let rows = [0b011u128, 0b110];
        let d = solve(&rows, &[true, false]).unwrap();
        assert!(dot(rows[0], d));
        assert!(!dot(rows[1], d));
        assert!(solve(&[0b1, 0b1], &[true, false]).is_none());
        let k = kernel(&rows, 0b111);
        assert_eq!(k, vec![0b111]);
    }

    #[test]
    fn span_membership() {
        let mut s = Span::new();
        assert!(s.insert(0b101));
        assert!(s.insert(0b011));
        assert!(!s.insert(0b110));
        assert!(s.contains(0b110));
        assert!(!s.contains(0b001));
        assert_eq!(s.dim(), 2);
    }
}
