use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::code::{builtin, code_from_a_matrix, read_a_matrix, RepresentativePolicy, SubsystemCode};
use crate::dynamics::Theorem;
use crate::error::{Error, Result};
use crate::f2::BinaryMatrix;

/// The published experiment schema.
pub const SCHEMA: &str = include_str!("../../schema/experiment.schema.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    CodeInspect,
    CheckConditions,
    Spectrum,
    GapScan,
    Simulate,
    Sweep,
    SwapGate,
    Chain,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::CodeInspect => "code-inspect",
            Self::CheckConditions => "check-conditions",
            Self::Spectrum => "spectrum",
            Self::GapScan => "gap-scan",
            Self::Simulate => "simulate",
            Self::Sweep => "sweep",
            Self::SwapGate => "swap-gate",
            Self::Chain => "chain",
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSource {
    pub builtin: Option<String>,
    pub a_matrix: Option<PathBuf>,
    pub a_matrix_rows: Option<Vec<Vec<u8>>>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    pub logical: Option<Value>,
    pub physical: Option<Value>,
    #[serde(default)]
    pub policy: RepresentativePolicy,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PenaltyKind {
    #[default]
    GaugeSum,
    Stabilizer,
    Projector,
    Terms,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltySpec {
    pub kind: PenaltyKind,
    #[serde(default = "one")]
    pub coeff: f64,
    pub alphas: Option<Vec<f64>>,
    pub terms: Option<Value>,
}

impl Default for PenaltySpec {
    fn default() -> Self {
        Self { kind: PenaltyKind::GaugeSum, coeff: 1.0, alphas: None, terms: None }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingSpec {
    pub coeff: f64,
    pub system: String,
    pub bath: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSpec {
    pub bath_qubits: usize,
    pub bath_frequency: f64,
    pub strength: f64,
    pub letters: Vec<String>,
    /// 1-based system qubits; all when absent.
    pub qubits: Option<Vec<usize>>,
    /// Explicit couplings, used instead of `strength`/`letters` when present.
    pub couplings: Option<Vec<CouplingSpec>>,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self {
            bath_qubits: 1,
            bath_frequency: 1.0,
            strength: 0.0,
            letters: vec!["X".into(), "Y".into(), "Z".into()],
            qubits: None,
            couplings: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpSpec {
    pub values: Option<Vec<f64>>,
    /// Multiples of `‖V‖`.
    pub relative: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub total_time: f64,
    #[serde(default = "default_steps")]
    pub num_steps: usize,
    #[serde(default = "yes")]
    pub scale_steps: bool,
}

fn default_steps() -> usize {
    crate::dynamics::DEFAULT_STEPS
}

fn yes() -> bool {
    true
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectorChoice {
    #[default]
    Ground,
    Codespace,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    #[default]
    Zero,
    Plus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    Commutation,
    Theorem1,
    Condition1,
    StabilizerSign,
    GroundInCodespace,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    pub n: Option<usize>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub dense_check_max: Option<usize>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwapSpec {
    pub total_time: Option<f64>,
    pub num_steps: Option<usize>,
    pub noise_strength: Option<f64>,
    pub bath_frequency: Option<f64>,
    pub bath_qubits: Option<usize>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub policy: Option<RepresentativePolicy>,
    pub e_p_relative: Option<Vec<f64>>,
    pub calibrate_target: Option<f64>,
    pub max_doublings: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub metric: String,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub equals: Option<f64>,
    pub tol: Option<f64>,
    pub provenance: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub csv: Option<String>,
    pub json: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub name: Option<String>,
    pub description: Option<String>,
    #[serde(default)]
    pub seed: u64,
    pub code: Option<CodeSource>,
    pub hamiltonian: Option<HamiltonianSpec>,
    pub penalty: Option<PenaltySpec>,
    pub noise: Option<NoiseSpec>,
    pub e_p: Option<EpSpec>,
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub projector: ProjectorChoice,
    #[serde(default)]
    pub theorem: Theorem,
    #[serde(default)]
    pub initial_state: InitialState,
    pub checks: Option<Vec<CheckName>>,
    pub chain: Option<ChainSpec>,
    pub swap: Option<SwapSpec>,
    #[serde(default)]
    pub expectations: Vec<Expectation>,
    pub outputs: Option<OutputSpec>,
    /// Directory of the config file, for resolving relative paths.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

fn compiled_schema() -> &'static jsonschema::Validator {
    static VALIDATOR: OnceLock<jsonschema::Validator> = OnceLock::new();
    VALIDATOR.get_or_init(|| {
        let schema: Value = serde_json::from_str(SCHEMA).expect("shipped schema is valid JSON");
        jsonschema::validator_for(&schema).expect("shipped schema compiles")
    })
}

/// Check a raw config against the schema; every violation is listed.
pub fn validate_config(value: &Value) -> Result<()> {
    let messages: Vec<String> = compiled_schema()
        .iter_errors(value)
        .map(|e| format!("{}: {}", e.instance_path(), e))
        .collect();
    if messages.is_empty() {
        Ok(())
    } else {
        Err(Error::Config(messages.join("; ")))
    }
}

impl ExperimentSpec {
    pub fn from_value(value: Value) -> Result<Self> {
        validate_config(&value)?;
        serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_value(value)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut spec = Self::from_str(&text)?;
        spec.base_dir = path.parent().map(Path::to_path_buf);
        Ok(spec)
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.kind.name().to_string())
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        match &self.base_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.to_path_buf(),
        }
    }

    pub fn build_code(&self) -> Result<SubsystemCode> {
        let source = self.code.as_ref().ok_or_else(|| Error::Config("experiment needs a \"code\" section".into()))?;
        match (&source.builtin, &source.a_matrix, &source.a_matrix_rows) {
            (Some(name), None, None) => builtin::by_name(name),
            (None, Some(path), None) => code_from_a_matrix(&read_a_matrix(self.resolve(path))?),
            (None, None, Some(rows)) => code_from_a_matrix(&BinaryMatrix::from_rows(rows)?),
            _ => Err(Error::Config("\"code\" needs exactly one of builtin, a_matrix, a_matrix_rows".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn schema_rejects_unknown_and_missing_fields() {
        assert!(ExperimentSpec::from_value(json!({"kind": "code-inspect", "code": {"builtin": "412"}})).is_ok());
        assert!(matches!(ExperimentSpec::from_value(json!({"kind": "code-inspect", "colour": 1})), Err(Error::Config(_))));
        assert!(matches!(ExperimentSpec::from_value(json!({"code": {"builtin": "412"}})), Err(Error::Config(_))));
        let no_provenance = json!({"kind": "gap-scan", "expectations": [{"metric": "x", "max": 1.0}]});
        assert!(matches!(ExperimentSpec::from_value(no_provenance), Err(Error::Config(_))));
    }

    #[test]
    fn empty_matrix_is_a_schema_error() {
        let v = json!({"kind": "code-inspect", "code": {"a_matrix_rows": []}});
        assert!(matches!(ExperimentSpec::from_value(v), Err(Error::Config(_))));
    }
}
