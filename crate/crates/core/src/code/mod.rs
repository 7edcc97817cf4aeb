//! Stabilizer subsystem codes.
//!
//! A [`SubsystemCode`] carries the stabilizer generators `S`, the gauge group
//! generators `G`, and the canonical conjugate pairs of gauge operators
//! `(X′_i, Z′_i)` and bare logical operators `(X̄_i, Z̄_i)`. Codes come from a
//! binary A-matrix ([`code_from_a_matrix`]), from an explicit gauge generator
//! list ([`SubsystemCode::from_gauge_generators`]), or from the builtins in
//! [`builtin`].

mod amatrix;
pub mod builtin;
mod detect;
mod encode;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2::{self, Span};
use crate::pauli::{Letter, PauliOperator};

pub use amatrix::{code_from_a_matrix, formula_params, read_a_matrix};
pub use detect::{
    codespace_basis, codespace_projector, is_detectable, DetectabilityMode, DetectabilityReport,
};
pub use encode::{encode_hamiltonian, encode_pauli, encode_state, encoding_unitary, RepresentativePolicy, SlotLayout};

/// Largest stabilizer group that is enumerated element by element.
pub const MAX_ENUMERATED_STABILIZERS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{},{}]]", self.n, self.k, self.d)
    }
}

pub type PauliPair = (PauliOperator, PauliOperator);

#[derive(Clone, Debug)]
pub struct SubsystemCode {
    name: String,
    num_physical: usize,
    stabilizers: Vec<PauliOperator>,
    gauge_generators: Vec<PauliOperator>,
    gauge_pairs: Vec<PauliPair>,
    logical_pairs: Vec<PauliPair>,
    distance: usize,
    geometry: Option<Vec<(usize, usize)>>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidCode(msg.into())
}

impl SubsystemCode {
    /// Assemble a code from explicit generator sets and check every
    /// commutation relation a subsystem code must satisfy.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        name: impl Into<String>,
        num_physical: usize,
        stabilizers: Vec<PauliOperator>,
        gauge_generators: Vec<PauliOperator>,
        gauge_pairs: Vec<PauliPair>,
        logical_pairs: Vec<PauliPair>,
        distance: usize,
        geometry: Option<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        let code = Self {
            name: name.into(),
            num_physical,
            stabilizers,
            gauge_generators,
            gauge_pairs,
            logical_pairs,
            distance,
            geometry,
        };
        code.validate()?;
        Ok(code)
    }

    /// The code with no stabilizers and no gauge qubits: every physical qubit
    /// is a logical qubit.
    pub fn trivial(n: usize) -> Self {
        let logical_pairs = (0..n)
            .map(|q| (PauliOperator::single(n, q, Letter::X), PauliOperator::single(n, q, Letter::Z)))
            .collect();
        Self {
            name: format!("trivial-{n}"),
            num_physical: n,
            stabilizers: Vec::new(),
            gauge_generators: Vec::new(),
            gauge_pairs: Vec::new(),
            logical_pairs,
            distance: 1,
            geometry: None,
        }
    }

    /// Derive the stabilizer group, gauge pairs and bare logicals of the
    /// gauge group generated by `gauge_generators`.
    ///
    /// The stabilizer is the center of `G`. Gauge and logical pairs come from
    /// symplectic Gram-Schmidt in input order; for CSS generator sets the X-type
    /// candidates go first so every pair is (X-type, Z-type). The distance is
    /// found by [`brute_force_distance`](Self::brute_force_distance).
    pub fn from_gauge_generators(
        name: impl Into<String>,
        num_physical: usize,
        gauge_generators: Vec<PauliOperator>,
        geometry: Option<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        let n = num_physical;
        for g in &gauge_generators {
            check_operator(g, n)?;
        }
        let vectors: Vec<u128> = gauge_generators.iter().map(|g| g.symplectic()).collect();
        let x_only = |v: &u128| v >> 64 == 0;
        let z_only = |v: &u128| *v as u64 == 0;
        let css = vectors.iter().all(|v| x_only(v) || z_only(v));

        let (stabilizer_vectors, gauge_candidates, logical_candidates) = if css {
            let gx: Vec<u128> = vectors.iter().copied().filter(|v| x_only(v)).collect();
            let gz: Vec<u128> = vectors.iter().copied().filter(|v| !x_only(v)).collect();
            let mut center = commuting_subspace(&gx, &gz);
            center.extend(commuting_subspace(&gz, &gx));
            let low = f2::valid_mask(n) & (u64::MAX as u128);
            let mut logicals = f2::kernel(&swapped(&gz), low);
            logicals.extend(f2::kernel(&swapped(&gx), low << 64));
            let mut ordered = gx;
            ordered.extend(gz);
            (center, ordered, logicals)
        } else {
            let center = commuting_subspace(&vectors, &vectors);
            let logicals = f2::kernel(&swapped(&vectors), f2::valid_mask(n));
            (center, vectors.clone(), logicals)
        };

        let stabilizers: Vec<PauliOperator> =
            stabilizer_vectors.iter().map(|&v| PauliOperator::from_symplectic(n, v, 0)).collect();
        let (gauge_vecs, _) = symplectic_gram_schmidt(gauge_candidates);
        let (logical_vecs, _) = symplectic_gram_schmidt(logical_candidates);
        let to_pair = |(a, b): (u128, u128)| (PauliOperator::from_symplectic(n, a, 0), PauliOperator::from_symplectic(n, b, 0));
        let gauge_pairs = gauge_vecs.into_iter().map(to_pair).collect();
        let mut logical_pairs: Vec<PauliPair> = logical_vecs.into_iter().map(to_pair).collect();
        if stabilizers.len() <= 10 {
            let group = stabilizer_group(&stabilizers);
            for pair in &mut logical_pairs {
                pair.0 = lightest_representative(&pair.0, &group).0;
                pair.1 = lightest_representative(&pair.1, &group).0;
            }
        }
        let mut code = Self {
            name: name.into(),
            num_physical: n,
            stabilizers,
            gauge_generators,
            gauge_pairs,
            logical_pairs,
            distance: 0,
            geometry,
        };
        code.validate()?;
        code.distance = code.brute_force_distance().unwrap_or(0);
        Ok(code)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_physical(&self) -> usize {
        self.num_physical
    }

    pub fn stabilizers(&self) -> &[PauliOperator] {
        &self.stabilizers
    }

    pub fn gauge_generators(&self) -> &[PauliOperator] {
        &self.gauge_generators
    }

    pub fn gauge_pairs(&self) -> &[PauliPair] {
        &self.gauge_pairs
    }

    pub fn logical_pairs(&self) -> &[PauliPair] {
        &self.logical_pairs
    }

    pub fn geometry(&self) -> Option<&[(usize, usize)]> {
        self.geometry.as_deref()
    }

    pub fn num_stabilizers(&self) -> usize {
        self.stabilizers.len()
    }

    pub fn num_gauge_qubits(&self) -> usize {
        self.gauge_pairs.len()
    }

    pub fn num_logical(&self) -> usize {
        self.logical_pairs.len()
    }

    pub fn params(&self) -> CodeParams {
        CodeParams { n: self.num_physical, k: self.num_logical(), d: self.distance }
    }

    pub fn logical_x(&self, i: usize) -> PauliOperator {
        self.logical_pairs[i].0
    }

    pub fn logical_z(&self, i: usize) -> PauliOperator {
        self.logical_pairs[i].1
    }

    /// Every bare logical operator in the pairs, X̄ then Z̄ for each pair.
    pub fn bare_logicals(&self) -> Vec<PauliOperator> {
        self.logical_pairs.iter().flat_map(|&(x, z)| [x, z]).collect()
    }

    pub(crate) fn with_distance(mut self, d: usize) -> Self {
        self.distance = d;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Span of the gauge group (stabilizers included), ignoring phases.
    pub fn gauge_span(&self) -> Span {
        Span::from_vectors(
            self.gauge_generators
                .iter()
                .chain(self.stabilizers.iter())
                .chain(self.gauge_pairs.iter().flat_map(|(a, b)| [a, b]))
                .map(|p| p.symplectic()),
        )
    }

    /// All `2^s` elements of the stabilizer group with their exact signs.
    pub fn stabilizer_elements(&self) -> Result<Vec<PauliOperator>> {
        if self.stabilizers.len() > MAX_ENUMERATED_STABILIZERS {
            return Err(Error::TooManyRows { got: self.stabilizers.len(), max: MAX_ENUMERATED_STABILIZERS });
        }
        Ok(stabilizer_group(&self.stabilizers))
    }

    /// Minimum weight of a Pauli that commutes with every stabilizer but is
    /// not in the gauge group. Searches weights in increasing order up to
    /// `n`; `None` when no such operator exists (`k = 0`).
    pub fn brute_force_distance(&self) -> Option<usize> {
        if self.num_logical() == 0 {
            return None;
        }
        let n = self.num_physical;
        let span = self.gauge_span();
        let stabs: Vec<u128> = self.stabilizers.iter().map(|s| s.symplectic()).collect();
        let letters = [(1u128, 0u128), (1, 1), (0, 1)];
        for w in 1..=n {
            let mut support: Vec<usize> = (0..w).collect();
            loop {
                let total = 3usize.pow(w as u32);
                for code in 0..total {
                    let mut v = 0u128;
                    let mut c = code;
                    for &q in &support {
                        let (bx, bz) = letters[c % 3];
                        v |= bx << q | bz << (64 + q);
                        c /= 3;
                    }
                    if stabs.iter().all(|&s| !f2::symplectic_product(s, v)) && !span.contains(v) {
                        return Some(w);
                    }
                }
                if !next_combination(&mut support, n) {
                    break;
                }
            }
        }
        None
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_physical;
        if n == 0 || n > crate::pauli::MAX_QUBITS {
            return Err(Error::TooManyQubits { got: n, max: crate::pauli::MAX_QUBITS });
        }
        let everything = self
            .stabilizers
            .iter()
            .chain(&self.gauge_generators)
            .chain(self.gauge_pairs.iter().flat_map(|(a, b)| [a, b]))
            .chain(self.logical_pairs.iter().flat_map(|(a, b)| [a, b]));
        for p in everything {
            check_operator(p, n)?;
        }
        let mut stab_span = Span::new();
        for (i, s) in self.stabilizers.iter().enumerate() {
            if s.is_identity() || !stab_span.insert(s.symplectic()) {
                return Err(invalid(format!("stabilizer generator {} is dependent on the others", s.to_sparse_string())));
            }
            for t in &self.stabilizers[i + 1..] {
                if !s.commutes_unchecked(t) {
                    return Err(invalid(format!("stabilizers {} and {} anticommute", s.to_sparse_string(), t.to_sparse_string())));
                }
            }
            let others = self
                .gauge_generators
                .iter()
                .chain(self.gauge_pairs.iter().flat_map(|(a, b)| [a, b]))
                .chain(self.logical_pairs.iter().flat_map(|(a, b)| [a, b]));
            for o in others {
                if !s.commutes_unchecked(o) {
                    return Err(invalid(format!("stabilizer {} anticommutes with {}", s.to_sparse_string(), o.to_sparse_string())));
                }
            }
        }
        check_conjugate_pairs(&self.gauge_pairs, "gauge")?;
        check_conjugate_pairs(&self.logical_pairs, "logical")?;
        for &(lx, lz) in &self.logical_pairs {
            for g in self.gauge_generators.iter().chain(self.gauge_pairs.iter().flat_map(|(a, b)| [a, b])) {
                for l in [lx, lz] {
                    if !l.commutes_unchecked(g) {
                        return Err(invalid(format!(
                            "logical {} anticommutes with gauge operator {}",
                            l.to_sparse_string(),
                            g.to_sparse_string()
                        )));
                    }
                }
            }
        }
        let generated = Span::from_vectors(self.gauge_generators.iter().map(|g| g.symplectic()));
        if !self.gauge_generators.is_empty() {
            for p in self.stabilizers.iter().chain(self.gauge_pairs.iter().flat_map(|(a, b)| [a, b])) {
                if !generated.contains(p.symplectic()) {
                    return Err(invalid(format!("{} is not in the gauge group", p.to_sparse_string())));
                }
            }
            if generated.dim() != self.stabilizers.len() + 2 * self.gauge_pairs.len() {
                return Err(invalid(format!(
                    "gauge group has dimension {}, expected s + 2r = {}",
                    generated.dim(),
                    self.stabilizers.len() + 2 * self.gauge_pairs.len()
                )));
            }
        }
        let count = self.stabilizers.len() + self.gauge_pairs.len() + self.logical_pairs.len();
        if count != n {
            return Err(invalid(format!("s + r + k = {count} but n = {n}")));
        }
        if let Some(geo) = &self.geometry {
            if geo.len() != n {
                return Err(invalid("geometry must give one position per qubit"));
            }
        }
        Ok(())
    }

    /// Serializable description: generators in sparse text form.
    pub fn to_json_value(&self) -> serde_json::Value {
        let sparse = |ps: &[PauliOperator]| ps.iter().map(|p| p.to_sparse_string()).collect::<Vec<_>>();
        let pairs = |ps: &[PauliPair]| {
            ps.iter()
                .map(|(a, b)| serde_json::json!({ "x": a.to_sparse_string(), "z": b.to_sparse_string() }))
                .collect::<Vec<_>>()
        };
        let geometry = self
            .geometry
            .as_ref()
            .map(|g| g.iter().map(|&(r, c)| [r + 1, c + 1]).collect::<Vec<_>>());
        serde_json::json!({
            "name": self.name,
            "params": { "n": self.num_physical, "k": self.num_logical(), "d": self.distance },
            "stabilizers": sparse(&self.stabilizers),
            "gauge_generators": sparse(&self.gauge_generators),
            "gauge_pairs": pairs(&self.gauge_pairs),
            "logical_pairs": pairs(&self.logical_pairs),
            "geometry": geometry,
        })
    }

    /// Independent copies of `blocks` side by side (block encoding). Block `b`
    /// occupies qubits `offset_b .. offset_b + n_b`.
    pub fn direct_sum(blocks: &[SubsystemCode]) -> Result<Self> {
        let n: usize = blocks.iter().map(|b| b.num_physical).sum();
        if n > crate::pauli::MAX_QUBITS {
            return Err(Error::TooManyQubits { got: n, max: crate::pauli::MAX_QUBITS });
        }
        let mut out = Self {
            name: blocks.iter().map(|b| b.name.as_str()).collect::<Vec<_>>().join("+"),
            num_physical: n,
            stabilizers: Vec::new(),
            gauge_generators: Vec::new(),
            gauge_pairs: Vec::new(),
            logical_pairs: Vec::new(),
            distance: blocks.iter().map(|b| b.distance).min().unwrap_or(0),
            geometry: None,
        };
        let mut offset = 0;
        for b in blocks {
            let positions: Vec<usize> = (offset..offset + b.num_physical).collect();
            let place = |p: &PauliOperator| p.embedded(n, &positions);
            out.stabilizers.extend(b.stabilizers.iter().map(place));
            out.gauge_generators.extend(b.gauge_generators.iter().map(place));
            out.gauge_pairs.extend(b.gauge_pairs.iter().map(|(x, z)| (place(x), place(z))));
            out.logical_pairs.extend(b.logical_pairs.iter().map(|(x, z)| (place(x), place(z))));
            offset += b.num_physical;
        }
        out.validate()?;
        Ok(out)
    }
}

impl fmt::Display for SubsystemCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ps: &mut dyn Iterator<Item = &PauliOperator>| {
            ps.map(|p| p.to_sparse_string()).collect::<Vec<_>>().join(", ")
        };
        writeln!(f, "{} {}", self.name, self.params())?;
        writeln!(f, "  stabilizers: {}", join(&mut self.stabilizers.iter()))?;
        writeln!(f, "  gauge generators: {}", join(&mut self.gauge_generators.iter()))?;
        for (i, (x, z)) in self.gauge_pairs.iter().enumerate() {
            writeln!(f, "  gauge pair {}: X' = {}, Z' = {}", i + 1, x.to_sparse_string(), z.to_sparse_string())?;
        }
        for (i, (x, z)) in self.logical_pairs.iter().enumerate() {
            writeln!(f, "  logical {}: X = {}, Z = {}", i + 1, x.to_sparse_string(), z.to_sparse_string())?;
        }
        Ok(())
    }
}

fn check_operator(p: &PauliOperator, n: usize) -> Result<()> {
    if p.num_qubits() != n {
        return Err(Error::SizeMismatch { left: n, right: p.num_qubits() });
    }
    if !p.is_hermitian() {
        return Err(invalid(format!("{} is not Hermitian", p.to_sparse_string())));
    }
    Ok(())
}

fn check_conjugate_pairs(pairs: &[PauliPair], what: &str) -> Result<()> {
    for (i, &(xi, zi)) in pairs.iter().enumerate() {
        for (j, &(xj, zj)) in pairs.iter().enumerate() {
            let bad = |a: &PauliOperator, b: &PauliOperator, expect_anti: bool| {
                (a.commutes_unchecked(b) == expect_anti).then(|| {
                    invalid(format!(
                        "{what} operators {} and {} should {}",
                        a.to_sparse_string(),
                        b.to_sparse_string(),
                        if expect_anti { "anticommute" } else { "commute" }
                    ))
                })
            };
            if let Some(e) = bad(&xi, &zj, i == j) {
                return Err(e);
            }
            if i < j {
                if let Some(e) = bad(&xi, &xj, false).or_else(|| bad(&zi, &zj, false)) {
                    return Err(e);
                }
            }
        }
    }
    Ok(())
}

fn swapped(vs: &[u128]) -> Vec<u128> {
    vs.iter().map(|&v| f2::swap_halves(v)).collect()
}

/// Elements of `span(basis)` that commute with every vector in `with`,
/// returned as an independent set.
fn commuting_subspace(basis: &[u128], with: &[u128]) -> Vec<u128> {
    let mut independent = Vec::new();
    let mut span = Span::new();
    for &b in basis {
        if span.insert(b) {
            independent.push(b);
        }
    }
    assert!(independent.len() <= 128);
    let rows: Vec<u128> = with
        .iter()
        .map(|&w| {
            independent
                .iter()
                .enumerate()
                .fold(0u128, |acc, (i, &b)| if f2::symplectic_product(b, w) { acc | 1 << i } else { acc })
        })
        .collect();
    let valid = if independent.len() == 128 { u128::MAX } else { (1u128 << independent.len()) - 1 };
    f2::kernel(&rows, valid)
        .into_iter()
        .map(|c| {
            independent
                .iter()
                .enumerate()
                .filter(|(i, _)| c >> i & 1 == 1)
                .fold(0u128, |acc, (_, &b)| acc ^ b)
        })
        .collect()
}

/// Symplectic Gram-Schmidt. Returns conjugate pairs `(a_i, b_i)` with
/// `⟨a_i, b_j⟩ = δ_ij` and the leftover isotropic vectors.
pub(crate) fn symplectic_gram_schmidt(candidates: Vec<u128>) -> (Vec<(u128, u128)>, Vec<u128>) {
    let mut rest: Vec<u128> = candidates.into_iter().filter(|&v| v != 0).collect();
    let mut pairs = Vec::new();
    let mut isotropic = Vec::new();
    while !rest.is_empty() {
        let a = rest.remove(0);
        match rest.iter().position(|&b| f2::symplectic_product(a, b)) {
            None => {
                if a != 0 {
                    isotropic.push(a);
                }
            }
            Some(j) => {
                let b = rest.remove(j);
                for c in rest.iter_mut() {
                    let mut v = *c;
                    if f2::symplectic_product(v, b) {
                        v ^= a;
                    }
                    if f2::symplectic_product(*c, a) {
                        v ^= b;
                    }
                    *c = v;
                }
                rest.retain(|&v| v != 0);
                pairs.push((a, b));
            }
        }
    }
    (pairs, isotropic)
}

/// All products of the generators, with exact phases, in binary counting order.
pub(crate) fn stabilizer_group(stabilizers: &[PauliOperator]) -> Vec<PauliOperator> {
    let n = stabilizers.first().map_or(0, |s| s.num_qubits());
    let mut out = vec![PauliOperator::identity(n)];
    for s in stabilizers {
        let len = out.len();
        for i in 0..len {
            let p = out[i].mul_unchecked(s);
            out.push(p);
        }
    }
    out
}

/// `p·g` of least weight over `g` in `group`; ties keep the earliest `g`.
pub(crate) fn lightest_representative(p: &PauliOperator, group: &[PauliOperator]) -> (PauliOperator, usize) {
    let mut best = *p;
    let mut best_index = 0;
    for (i, g) in group.iter().enumerate() {
        let q = p.mul_unchecked(g);
        if q.weight() < best.weight() {
            best = q;
            best_index = i;
        }
    }
    (best, best_index)
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ops(list: &[&str], n: usize) -> Vec<PauliOperator> {
        list.iter().map(|s| PauliOperator::parse_sparse(s, n).unwrap()).collect()
    }

    #[test]
    fn four_qubit_code_from_generators() {
        let g = ops(&["X1 X2", "X3 X4", "Z1 Z3", "Z2 Z4"], 4);
        let code = SubsystemCode::from_gauge_generators("412", 4, g, None).unwrap();
        assert_eq!(code.params(), CodeParams { n: 4, k: 1, d: 2 });
        let stabs: Vec<String> = code.stabilizers().iter().map(|s| s.to_sparse_string()).collect();
        assert_eq!(stabs, vec!["X1 X2 X3 X4", "Z1 Z2 Z3 Z4"]);
        assert_eq!(code.num_gauge_qubits(), 1);
    }

    #[test]
    fn trivial_code() {
        let t = SubsystemCode::trivial(3);
        assert_eq!(t.params(), CodeParams { n: 3, k: 3, d: 1 });
        assert_eq!(t.brute_force_distance(), Some(1));
    }

    #[test]
    fn rejects_broken_pairs() {
        let n = 2;
        let x = PauliOperator::parse_sparse("X1", n).unwrap();
        let z2 = PauliOperator::parse_sparse("Z2", n).unwrap();
        let err = SubsystemCode::from_parts("bad", n, vec![], vec![], vec![], vec![(x, z2)], 1, None);
        assert!(matches!(err, Err(Error::InvalidCode(_))));
    }

    #[test]
    fn gram_schmidt_pairs_are_canonical() {
        let g = ops(&["X1 X2", "X2 X3", "Z1 Z2", "Z2 Z3", "X1 X2 X3"], 3);
        let (pairs, iso) = symplectic_gram_schmidt(g.iter().map(|p| p.symplectic()).collect());
        for (i, &(a, b)) in pairs.iter().enumerate() {
            assert!(f2::symplectic_product(a, b));
            for &(c, d) in &pairs[i + 1..] {
                assert!(!f2::symplectic_product(a, c) && !f2::symplectic_product(a, d));
                assert!(!f2::symplectic_product(b, c) && !f2::symplectic_product(b, d));
            }
        }
        assert_eq!(pairs.len(), 2);
        assert_eq!(iso.len(), 1);
    }

    #[test]
    fn combinations() {
        let mut c = vec![0, 1];
        let mut count = 1;
        while next_combination(&mut c, 4) {
            count += 1;
        }
        assert_eq!(count, 6);
    }
}
