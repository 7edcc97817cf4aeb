//! Declarative experiments: JSON spec in, CSV table and JSON result out.
//!
//! Exit codes: `0` when every condition and expectation holds, `1` when a
//! condition or expectation fails, `2` for usage or configuration errors.

mod runners;
mod spec;

pub use runners::run;
pub use spec::{
    validate_config, ChainSpec, CheckName, CodeSource, CouplingSpec, EpSpec, Expectation, ExperimentKind, ExperimentSpec,
    GridSpec, HamiltonianSpec, InitialState, NoiseSpec, OutputSpec, PenaltyKind, PenaltySpec, ProjectorChoice, SwapSpec,
    SCHEMA,
};

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::conditions::ConditionReport;
use crate::error::Result;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Num(v) => v.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv))?;
        }
        w.into_inner().map_err(|e| std::io::Error::other(e.to_string()).into())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpectationOutcome {
    pub metric: String,
    pub value: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub equals: Option<f64>,
    pub passed: bool,
    pub provenance: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentResult {
    pub name: String,
    pub kind: ExperimentKind,
    pub seed: u64,
    pub spec: Value,
    pub metrics: BTreeMap<String, f64>,
    pub reports: Vec<ConditionReport>,
    pub details: Value,
    pub table: Table,
    pub expectations: Vec<ExpectationOutcome>,
    pub conditions_passed: bool,
    pub passed: bool,
    /// Not reproducible; excluded from determinism comparisons.
    pub wall_time_seconds: f64,
}

impl ExperimentResult {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_VIOLATION
        }
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.get(name).copied()
    }

    /// Write the CSV table and pretty JSON into `dir`, each through a temporary
    /// file and rename. Returns `(csv, json)` paths.
    pub fn write_outputs(&self, dir: &Path, outputs: Option<&OutputSpec>) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let csv_name = outputs.and_then(|o| o.csv.clone()).unwrap_or_else(|| format!("{}.csv", self.name));
        let json_name = outputs.and_then(|o| o.json.clone()).unwrap_or_else(|| format!("{}.json", self.name));
        let csv_path = dir.join(csv_name);
        let json_path = dir.join(json_name);
        write_atomic(&csv_path, &self.table.to_csv()?)?;
        let mut json = serde_json::to_vec_pretty(self)?;
        json.push(b'\n');
        write_atomic(&json_path, &json)?;
        Ok((csv_path, json_path))
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub(crate) fn evaluate_expectations(expectations: &[Expectation], metrics: &BTreeMap<String, f64>) -> Vec<ExpectationOutcome> {
    expectations
        .iter()
        .map(|e| {
            let value = metrics.get(&e.metric).copied();
            let passed = value.is_some_and(|v| {
                let tol = e.tol.unwrap_or(1e-9);
                e.min.is_none_or(|m| v >= m)
                    && e.max.is_none_or(|m| v <= m)
                    && e.equals.is_none_or(|x| (v - x).abs() <= tol)
            });
            ExpectationOutcome {
                metric: e.metric.clone(),
                value,
                min: e.min,
                max: e.max,
                equals: e.equals,
                passed,
                provenance: e.provenance.clone(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting_and_specials() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![Cell::Text("x, y".into()), Cell::Num(f64::INFINITY)]);
        t.push(vec![Cell::Empty, Cell::Num(0.25)]);
        assert_eq!(String::from_utf8(t.to_csv().unwrap()).unwrap(), "a,b\n\"x, y\",inf\n,0.25\n");
    }

    #[test]
    fn expectation_bounds() {
        let metrics = BTreeMap::from([("slope".to_string(), -1.05)]);
        let e = |min: Option<f64>, max: Option<f64>| Expectation {
            metric: "slope".into(),
            min,
            max,
            equals: None,
            tol: None,
            provenance: "1/E_p scaling".into(),
        };
        assert!(evaluate_expectations(&[e(Some(-1.2), Some(-0.8))], &metrics)[0].passed);
        assert!(!evaluate_expectations(&[e(Some(-1.0), None)], &metrics)[0].passed);
        let missing = Expectation { metric: "gap".into(), ..e(None, None) };
        assert!(!evaluate_expectations(&[missing], &metrics)[0].passed);
    }
}
