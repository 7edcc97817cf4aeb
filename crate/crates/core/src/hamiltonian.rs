//! Real linear combinations of Pauli operators with an optional linear
//! schedule in `s ∈ [0, 1]`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dense::{self, OperatorMatrix, C64};
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;

/// Weight function attached to a term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScheduleGroup {
    #[default]
    #[serde(rename = "const")]
    Constant,
    #[serde(rename = "1-s")]
    OneMinusS,
    #[serde(rename = "s")]
    S,
}

impl ScheduleGroup {
    pub fn weight(self, s: f64) -> f64 {
        match self {
            ScheduleGroup::Constant => 1.0,
            ScheduleGroup::OneMinusS => 1.0 - s,
            ScheduleGroup::S => s,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScheduleGroup::Constant => "const",
            ScheduleGroup::OneMinusS => "1-s",
            ScheduleGroup::S => "s",
        }
    }
}

/// `coeff · pauli`, with the Pauli stored sign-free (phase exponent 0).
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub pauli: PauliOperator,
    pub group: ScheduleGroup,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    num_qubits: usize,
    terms: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRecord {
    coeff: f64,
    pauli: String,
    #[serde(default)]
    group: ScheduleGroup,
}

impl Hamiltonian {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, terms: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff · pauli`. A `−1` phase on `pauli` is folded into the
    /// coefficient; `±i` phases are rejected.
    pub fn push(&mut self, coeff: f64, pauli: PauliOperator, group: ScheduleGroup) -> Result<()> {
        if pauli.num_qubits() != self.num_qubits {
            return Err(Error::SizeMismatch { left: self.num_qubits, right: pauli.num_qubits() });
        }
        let sign = pauli.sign().ok_or(Error::NonHermitian(1.0))?;
        self.terms.push(Term { coeff: coeff * sign, pauli: pauli.unsigned(), group });
        Ok(())
    }

    pub fn with_term(mut self, coeff: f64, pauli: PauliOperator) -> Result<Self> {
        self.push(coeff, pauli, ScheduleGroup::Constant)?;
        Ok(self)
    }

    pub fn from_paulis(num_qubits: usize, coeff: f64, paulis: &[PauliOperator]) -> Result<Self> {
        let mut h = Self::new(num_qubits);
        for p in paulis {
            h.push(coeff, *p, ScheduleGroup::Constant)?;
        }
        Ok(h)
    }

    /// All terms with their schedule weight at `s` folded in.
    pub fn at(&self, s: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { coeff: t.coeff * t.group.weight(s), pauli: t.pauli, group: ScheduleGroup::Constant })
            .collect();
        Self { num_qubits: self.num_qubits, terms }.simplified()
    }

    pub fn group(&self, group: ScheduleGroup) -> Self {
        let terms = self.terms.iter().filter(|t| t.group == group).cloned().collect();
        Self { num_qubits: self.num_qubits, terms }
    }

    pub fn has_schedule(&self) -> bool {
        self.terms.iter().any(|t| t.group != ScheduleGroup::Constant)
    }

    /// Merge repeated `(pauli, group)` pairs and drop zero coefficients.
    pub fn simplified(&self) -> Self {
        let mut index: HashMap<(u128, ScheduleGroup), usize> = HashMap::new();
        let mut terms: Vec<Term> = Vec::new();
        for t in &self.terms {
            let key = (t.pauli.symplectic(), t.group);
            match index.get(&key) {
                Some(&i) => terms[i].coeff += t.coeff,
                None => {
                    index.insert(key, terms.len());
                    terms.push(t.clone());
                }
            }
        }
        terms.retain(|t| t.coeff != 0.0);
        Self { num_qubits: self.num_qubits, terms }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let terms = self.terms.iter().map(|t| Term { coeff: t.coeff * factor, ..t.clone() }).collect();
        Self { num_qubits: self.num_qubits, terms }
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::SizeMismatch { left: self.num_qubits, right: other.num_qubits });
        }
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    /// `σ H σ` for a Pauli `σ`: anticommuting terms change sign.
    pub fn conjugated_by(&self, sigma: &PauliOperator) -> Result<Self> {
        let mut out = self.clone();
        for t in &mut out.terms {
            if !t.pauli.commutes(sigma)? {
                t.coeff = -t.coeff;
            }
        }
        Ok(out)
    }

    /// `H ⊗ I` on `extra` trailing qubits.
    pub fn extended(&self, extra: usize) -> Self {
        let terms = self.terms.iter().map(|t| Term { pauli: t.pauli.extended(extra), ..t.clone() }).collect();
        Self { num_qubits: self.num_qubits + extra, terms }
    }

    /// Place qubit `j` at `positions[j]` of a `num_qubits` register.
    pub fn embedded(&self, num_qubits: usize, positions: &[usize]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { pauli: t.pauli.embedded(num_qubits, positions), ..t.clone() })
            .collect();
        Self { num_qubits, terms }
    }

    /// `Σ|coeff|` at schedule point `s`, an upper bound on the spectral norm.
    pub fn coefficient_norm(&self, s: f64) -> f64 {
        self.terms.iter().map(|t| (t.coeff * t.group.weight(s)).abs()).sum()
    }

    pub fn commutes_with_pauli(&self, p: &PauliOperator) -> Result<bool> {
        for t in &self.terms {
            if !t.pauli.commutes(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Dense matrix at schedule point `s`.
    pub fn to_dense(&self, s: f64) -> Result<OperatorMatrix> {
        self.to_dense_with_limit(s, dense::DEFAULT_DENSE_LIMIT)
    }

    pub fn to_dense_with_limit(&self, s: f64, limit: usize) -> Result<OperatorMatrix> {
        dense::check_dense_limit(self.num_qubits, limit)?;
        let dim = 1usize << self.num_qubits;
        let mut m = OperatorMatrix::zeros(dim, dim);
        for t in &self.terms {
            let c = t.coeff * t.group.weight(s);
            if c == 0.0 {
                continue;
            }
            let (xi, zi) = t.pauli.index_masks();
            let amp = t.pauli.base_amplitude() * c;
            for b in 0..dim {
                let sign = if (zi & b).count_ones() % 2 == 1 { -amp } else { amp };
                m[(b ^ xi, b)] += sign;
            }
        }
        Ok(m)
    }

    /// `out = H(s)·v` without forming the matrix.
    pub fn apply(&self, s: f64, v: &[C64], out: &mut [C64]) {
        out.iter_mut().for_each(|o| *o = dense::ZERO);
        for t in &self.terms {
            let c = t.coeff * t.group.weight(s);
            if c != 0.0 {
                t.pauli.apply_add(v, out, C64::new(c, 0.0));
            }
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let records: Vec<TermRecord> = self
            .terms
            .iter()
            .map(|t| TermRecord { coeff: t.coeff, pauli: t.pauli.to_sparse_string(), group: t.group })
            .collect();
        serde_json::to_value(records).expect("term records serialize")
    }

    /// Reads the JSON list form `[{"coeff": 1.0, "pauli": "X1 X2", "group": "s"}, …]`.
    pub fn from_json_value(value: &serde_json::Value, num_qubits: usize) -> Result<Self> {
        let records: Vec<TermRecord> = serde_json::from_value(value.clone())?;
        let mut h = Self::new(num_qubits);
        for r in records {
            let p = PauliOperator::parse_sparse(&r.pauli, num_qubits)?;
            h.push(r.coeff, p, r.group)?;
        }
        Ok(h)
    }
}

impl fmt::Display for Hamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let group = match t.group {
                ScheduleGroup::Constant => String::new(),
                g => format!("[{}]", g.name()),
            };
            write!(f, "{}{}·{}", group, t.coeff, t.pauli.to_sparse_string())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Letter;

    #[test]
    fn sign_is_folded_into_coefficient() {
        let mut h = Hamiltonian::new(2);
        let minus_yy = PauliOperator::uniform(2, &[0, 1], Letter::X)
            .multiply(&PauliOperator::uniform(2, &[0, 1], Letter::Z))
            .unwrap();
        h.push(1.5, minus_yy, ScheduleGroup::Constant).unwrap();
        assert_eq!(h.terms()[0].coeff, -1.5);
        assert_eq!(h.terms()[0].pauli.phase_exponent(), 0);
        assert!(h.push(1.0, PauliOperator::single(2, 0, Letter::X).with_phase(1), ScheduleGroup::S).is_err());
    }

    #[test]
    fn schedule_weights() {
        let x = PauliOperator::single(1, 0, Letter::X);
        let z = PauliOperator::single(1, 0, Letter::Z);
        let mut h = Hamiltonian::new(1);
        h.push(2.0, x, ScheduleGroup::OneMinusS).unwrap();
        h.push(4.0, z, ScheduleGroup::S).unwrap();
        let m = h.to_dense(0.25).unwrap();
        assert!((m[(0, 1)].re - 1.5).abs() < 1e-15);
        assert!((m[(0, 0)].re - 1.0).abs() < 1e-15);
        assert_eq!(h.at(0.0).terms().len(), 1);
    }

    #[test]
    fn apply_matches_dense() {
        let mut h = Hamiltonian::new(3);
        h.push(0.3, PauliOperator::parse_sparse("X1 Y2", 3).unwrap(), ScheduleGroup::Constant).unwrap();
        h.push(-1.1, PauliOperator::parse_sparse("Z2 Z3", 3).unwrap(), ScheduleGroup::S).unwrap();
        let v: Vec<C64> = (0..8).map(|i| C64::new(i as f64, 1.0 - i as f64)).collect();
        let mut out = vec![dense::ZERO; 8];
        h.apply(0.6, &v, &mut out);
        let expect = h.to_dense(0.6).unwrap() * crate::dense::StateVector::from_vec(v);
        for (a, b) in out.iter().zip(expect.iter()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn json_round_trip() {
        let mut h = Hamiltonian::new(4);
        h.push(-1.0, PauliOperator::parse_sparse("X1 X2", 4).unwrap(), ScheduleGroup::OneMinusS).unwrap();
        h.push(0.5, PauliOperator::parse_sparse("Z3", 4).unwrap(), ScheduleGroup::Constant).unwrap();
        let back = Hamiltonian::from_json_value(&h.to_json_value(), 4).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn conjugation_flips_anticommuting_terms() {
        let h = Hamiltonian::new(2)
            .with_term(1.0, PauliOperator::parse_sparse("X1 X2", 2).unwrap())
            .unwrap()
            .with_term(1.0, PauliOperator::parse_sparse("Z1 Z2", 2).unwrap())
            .unwrap();
        let c = h.conjugated_by(&PauliOperator::single(2, 0, Letter::Z)).unwrap();
        assert_eq!(c.terms()[0].coeff, -1.0);
        assert_eq!(c.terms()[1].coeff, 1.0);
    }
}
