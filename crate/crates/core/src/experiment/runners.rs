use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::spec::{CheckName, ExperimentKind, ExperimentSpec, InitialState, PenaltyKind, ProjectorChoice};
use super::{evaluate_expectations, Cell, ExperimentResult, Table};
use crate::chain::{chain_gap, chain_gap_scan, chain_penalty, chain_penalty_spectrum, chain_sector_union, SECTORS};
use crate::code::{
    builtin, codespace_basis, codespace_projector, encode_hamiltonian, encode_state, encoding_unitary, is_detectable,
    RepresentativePolicy, SlotLayout, SubsystemCode,
};
use crate::conditions::{
    anticommutation_matrix, check_commutation, check_condition1, check_theorem1_condition, gauge_sum_penalty,
    ground_in_codespace, projector_penalty, stabilizer_penalty, stabilizer_sign_condition, ConditionReport,
    DEFAULT_S_SAMPLES, DEFAULT_TOL,
};
use crate::dense::{self, OperatorMatrix, StateVector, C64};
use crate::dynamics::swap::{calibrate_time, penalty_ground_gauge_state, run_encoded_swap, run_unencoded_swap, SwapConfig};
use crate::dynamics::{
    gauge_unitary, loglog_slope, run_point, semi_distance, Coupling, SweepOptions, SystemBathModel, Theorem, TimeGrid,
};
use crate::error::{Error, Result};
use crate::hamiltonian::{Hamiltonian, ScheduleGroup};
use crate::pauli::{Letter, PauliOperator};
use crate::spectral::{group_eigenvalues, SpectralDecomposition, DEFAULT_DEGENERACY_TOL};

const GAUGE_SAMPLES: usize = 8;

#[derive(Default)]
struct Outcome {
    metrics: BTreeMap<String, f64>,
    reports: Vec<ConditionReport>,
    details: Value,
    table: Table,
    conditions_passed: Option<bool>,
}

impl Outcome {
    fn metric(&mut self, name: &str, value: f64) {
        self.metrics.insert(name.into(), value);
    }

    fn flag(&mut self, name: &str, value: bool) {
        self.metric(name, if value { 1.0 } else { 0.0 });
    }
}

/// Run one experiment and evaluate its expectations.
pub fn run(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    let start = Instant::now();
    let out = match spec.kind {
        ExperimentKind::CodeInspect => code_inspect(spec)?,
        ExperimentKind::CheckConditions => check_conditions(spec)?,
        ExperimentKind::Spectrum => spectrum(spec)?,
        ExperimentKind::GapScan => gap_scan(spec)?,
        ExperimentKind::Chain => chain(spec)?,
        ExperimentKind::Simulate | ExperimentKind::Sweep => sweep(spec)?,
        ExperimentKind::SwapGate => swap_gate(spec)?,
    };
    let conditions_passed = out.conditions_passed.unwrap_or_else(|| out.reports.iter().all(|r| r.satisfied));
    let expectations = evaluate_expectations(&spec.expectations, &out.metrics);
    let passed = conditions_passed && expectations.iter().all(|e| e.passed);
    Ok(ExperimentResult {
        name: spec.label(),
        kind: spec.kind,
        seed: spec.seed,
        spec: serde_json::to_value(spec)?,
        metrics: out.metrics,
        reports: out.reports,
        details: out.details,
        table: out.table,
        expectations,
        conditions_passed,
        passed,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

fn single_qubit_errors(n: usize) -> Vec<PauliOperator> {
    (0..n)
        .flat_map(|q| [Letter::X, Letter::Y, Letter::Z].map(|l| PauliOperator::single(n, q, l)))
        .collect()
}

fn parse_letter(s: &str) -> Result<Letter> {
    match s {
        "X" => Ok(Letter::X),
        "Y" => Ok(Letter::Y),
        "Z" => Ok(Letter::Z),
        _ => Err(Error::Config(format!("unknown Pauli letter {s:?}"))),
    }
}

fn build_system(spec: &ExperimentSpec, code: &SubsystemCode) -> Result<Hamiltonian> {
    let n = code.num_physical();
    let mut h = Hamiltonian::new(n);
    if let Some(hs) = &spec.hamiltonian {
        if let Some(logical) = &hs.logical {
            let bare = Hamiltonian::from_json_value(logical, code.num_logical())?;
            h = h.sum(&encode_hamiltonian(&bare, code, hs.policy)?)?;
        }
        if let Some(physical) = &hs.physical {
            h = h.sum(&Hamiltonian::from_json_value(physical, n)?)?;
        }
    }
    Ok(h.simplified())
}

fn build_penalty(spec: &ExperimentSpec, code: &SubsystemCode) -> Result<Hamiltonian> {
    let p = spec.penalty.clone().unwrap_or_default();
    let h = match p.kind {
        PenaltyKind::GaugeSum => gauge_sum_penalty(code, 1.0)?,
        PenaltyKind::Stabilizer => {
            let alphas = p.alphas.clone().unwrap_or_else(|| vec![1.0; code.num_stabilizers()]);
            stabilizer_penalty(code, &alphas)?
        }
        PenaltyKind::Projector => projector_penalty(code)?,
        PenaltyKind::Terms => {
            let terms = p.terms.as_ref().ok_or_else(|| Error::Config("penalty kind \"terms\" needs \"terms\"".into()))?;
            Hamiltonian::from_json_value(terms, code.num_physical())?
        }
    };
    Ok(h.scaled(p.coeff))
}

/// Bath Hamiltonian and couplings; `None` without a `noise` section.
fn build_noise(spec: &ExperimentSpec, code: &SubsystemCode) -> Result<Option<(Hamiltonian, Vec<Coupling>)>> {
    let Some(noise) = &spec.noise else { return Ok(None) };
    let n = code.num_physical();
    let m = noise.bath_qubits;
    let mut bath = Hamiltonian::new(m);
    for b in 0..m {
        bath.push(noise.bath_frequency / 2.0, PauliOperator::single(m, b, Letter::Z), ScheduleGroup::Constant)?;
    }
    let mut couplings = Vec::new();
    if let Some(explicit) = &noise.couplings {
        for c in explicit {
            couplings.push(Coupling {
                coeff: c.coeff,
                system: PauliOperator::parse_sparse(&c.system, n)?,
                bath: PauliOperator::parse_sparse(&c.bath, m)?,
            });
        }
    } else if noise.strength != 0.0 {
        let qubits: Vec<usize> = match &noise.qubits {
            Some(q) => q.iter().map(|&q| q - 1).collect(),
            None => (0..n).collect(),
        };
        if qubits.iter().any(|&q| q >= n) {
            return Err(Error::Config(format!("noise qubit beyond the {n} physical qubits")));
        }
        for &q in &qubits {
            for letter in &noise.letters {
                let letter = parse_letter(letter)?;
                for b in 0..m {
                    couplings.push(Coupling {
                        coeff: noise.strength,
                        system: PauliOperator::single(n, q, letter),
                        bath: PauliOperator::single(m, b, letter),
                    });
                }
            }
        }
    }
    Ok(Some((bath, couplings)))
}

fn build_model(spec: &ExperimentSpec, code: &SubsystemCode) -> Result<SystemBathModel> {
    let (bath, couplings) = build_noise(spec, code)?.unwrap_or_else(|| (Hamiltonian::new(0), Vec::new()));
    let total_time = spec.grid.as_ref().map_or(1.0, |g| g.total_time);
    SystemBathModel::new(code.clone(), build_system(spec, code)?, bath, couplings, build_penalty(spec, code)?, 0.0, total_time)
}

fn system_projector(spec: &ExperimentSpec, code: &SubsystemCode, penalty: &Hamiltonian) -> Result<OperatorMatrix> {
    match spec.projector {
        ProjectorChoice::Ground => {
            Ok(SpectralDecomposition::new(&penalty.to_dense(0.0)?, DEFAULT_DEGENERACY_TOL)?.ground_projector())
        }
        ProjectorChoice::Codespace => codespace_projector(code),
    }
}

/// Errors for the spectral checks: coupling system parts, or every
/// single-qubit Pauli without a noise section.
fn error_set(spec: &ExperimentSpec, code: &SubsystemCode) -> Result<Vec<PauliOperator>> {
    match build_noise(spec, code)? {
        None => Ok(single_qubit_errors(code.num_physical())),
        Some((_, couplings)) => {
            let mut out: Vec<PauliOperator> = Vec::new();
            for c in couplings {
                let e = c.system.unsigned();
                if !out.contains(&e) {
                    out.push(e);
                }
            }
            Ok(out)
        }
    }
}

fn code_inspect(spec: &ExperimentSpec) -> Result<Outcome> {
    let code = spec.build_code()?;
    let mut out = Outcome::default();
    let params = code.params();
    out.metric("n", params.n as f64);
    out.metric("k", params.k as f64);
    out.metric("d", params.d as f64);
    out.metric("num_stabilizers", code.num_stabilizers() as f64);
    out.metric("num_gauge_qubits", code.num_gauge_qubits() as f64);
    if params.n <= 12 {
        if let Some(d) = code.brute_force_distance() {
            out.metric("brute_force_distance", d as f64);
        }
    }
    out.table = Table::new(&["error", "detectable", "mode", "residual_norm", "flagged_by"]);
    let mut all_detectable = true;
    for e in single_qubit_errors(params.n) {
        let r = is_detectable(&code, &e, 1e-9)?;
        all_detectable &= r.detectable;
        let mode = serde_json::to_value(r.mode)?.as_str().unwrap_or_default().to_string();
        let flagged = r.flagged_by.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ");
        out.table.push(vec![e.to_sparse_string().into(), r.detectable.into(), mode.into(), r.residual_norm.into(), flagged.into()]);
    }
    out.flag("all_weight1_detectable", all_detectable);
    out.details = code.to_json_value();
    Ok(out)
}

fn check_conditions(spec: &ExperimentSpec) -> Result<Outcome> {
    let code = spec.build_code()?;
    let penalty = build_penalty(spec, &code)?;
    let p = system_projector(spec, &code, &penalty)?;
    let checks = spec.checks.clone().unwrap_or_else(|| {
        let mut c = Vec::new();
        if spec.hamiltonian.is_some() {
            c.push(CheckName::Commutation);
        }
        c.extend([CheckName::Theorem1, CheckName::Condition1, CheckName::GroundInCodespace]);
        if spec.penalty.as_ref().is_some_and(|p| p.kind == PenaltyKind::Stabilizer) {
            c.push(CheckName::StabilizerSign);
        }
        c
    });
    let errors = error_set(spec, &code)?;
    let mut out = Outcome::default();
    for check in checks {
        let report = match check {
            CheckName::Commutation => check_commutation(&build_system(spec, &code)?, &penalty, &p, &DEFAULT_S_SAMPLES, DEFAULT_TOL)?,
            CheckName::Theorem1 => {
                let model = build_model(spec, &code)?;
                let d = SpectralDecomposition::new(&model.lift(&penalty.to_dense(0.0)?), DEFAULT_DEGENERACY_TOL)?;
                let r = check_theorem1_condition(&model.dense_interaction()?, &d, &model.lift(&p), DEFAULT_TOL)?;
                out.metric("constant_c", r.constant.unwrap_or(0.0));
                r
            }
            CheckName::Condition1 => match check_condition1(&penalty, &p, &errors, DEFAULT_TOL) {
                Ok(r) => r,
                Err(Error::PenaltyProjectorCommutator(norm)) => ConditionReport {
                    condition: "condition1".into(),
                    satisfied: false,
                    tolerance: DEFAULT_TOL,
                    constant: None,
                    block_constants: Vec::new(),
                    residuals: vec![crate::conditions::Residual { label: "[h_p, p]".into(), value: norm }],
                    witness: Some(format!("penalty does not commute with the projector ({norm:.3e})")),
                    spectra: Vec::new(),
                },
                Err(e) => return Err(e),
            },
            CheckName::StabilizerSign => {
                let alphas = match &spec.penalty {
                    Some(ps) if ps.kind == PenaltyKind::Stabilizer => {
                        ps.alphas.clone().unwrap_or_else(|| vec![1.0; code.num_stabilizers()])
                    }
                    _ => return Err(Error::Config("stabilizer_sign needs a stabilizer penalty".into())),
                };
                let anticomm = anticommutation_matrix(code.stabilizers(), &errors)?;
                stabilizer_sign_condition(&alphas, &anticomm)?
            }
            CheckName::GroundInCodespace => ground_in_codespace(&penalty, &code, 1e-8)?,
        };
        out.flag(&format!("{}_satisfied", report.condition), report.satisfied);
        out.metric(&format!("{}_residual", report.condition), report.max_residual());
        out.reports.push(report);
    }
    out.metric("num_errors", errors.len() as f64);
    out.table = Table::new(&["condition", "satisfied", "max_residual", "witness"]);
    for r in &out.reports {
        out.table.push(vec![
            r.condition.as_str().into(),
            r.satisfied.into(),
            r.max_residual().into(),
            r.witness.clone().unwrap_or_default().into(),
        ]);
    }
    out.details = json!({ "penalty": penalty.to_json_value() });
    Ok(out)
}

fn spectrum(spec: &ExperimentSpec) -> Result<Outcome> {
    let code = spec.build_code()?;
    let penalty = build_penalty(spec, &code)?;
    let hp = penalty.to_dense(0.0)?;
    let d = SpectralDecomposition::new(&hp, DEFAULT_DEGENERACY_TOL)?;
    let basis = codespace_basis(&code)?;
    let on_code = dense::hermitian_eigenvalues(&(basis.adjoint() * &hp * &basis));
    let code_groups = group_eigenvalues(&on_code, DEFAULT_DEGENERACY_TOL);

    let mut out = Outcome::default();
    out.table = Table::new(&["space", "eigenvalue", "multiplicity"]);
    for (value, mult) in d.eigenvalues().iter().zip(d.multiplicities()) {
        out.table.push(vec!["full".into(), (*value).into(), mult.into()]);
    }
    for (value, _, mult) in &code_groups {
        out.table.push(vec!["codespace".into(), (*value).into(), (*mult).into()]);
    }
    out.metric("ground_energy", d.eigenvalues()[0]);
    out.metric("ground_multiplicity", d.multiplicities()[0] as f64);
    out.metric("gap", d.gap().unwrap_or(0.0));
    out.metric("num_levels", d.len() as f64);
    out.metric("max_eigenvalue", *d.eigenvalues().last().unwrap_or(&0.0));
    out.metric("codespace_levels", code_groups.len() as f64);
    out.metric("codespace_min", code_groups.first().map_or(0.0, |g| g.0));
    out.metric("codespace_max", code_groups.last().map_or(0.0, |g| g.0));
    out.details = json!({ "penalty": penalty.to_json_value() });
    Ok(out)
}

fn gap_scan(spec: &ExperimentSpec) -> Result<Outcome> {
    let chain = spec.chain.clone().unwrap_or_default();
    let (lo, hi) = (chain.n_min.unwrap_or(2), chain.n_max.unwrap_or(8));
    if lo > hi {
        return Err(Error::Config(format!("n_min {lo} exceeds n_max {hi}")));
    }
    let scan = chain_gap_scan(lo..=hi)?;
    let mut out = Outcome::default();
    out.table = Table::new(&["N", "gap", "scaled_gap", "ground_energy", "ground_sector"]);
    for r in &scan.rows {
        let sector = format!("{:+} {:+}", r.ground_sector.0, r.ground_sector.1);
        out.table.push(vec![r.big_n.into(), r.gap.into(), r.scaled_gap.into(), r.ground_energy.into(), sector.into()]);
    }
    out.metric("scaled_mean", scan.scaled_mean);
    out.metric("scaled_spread", scan.scaled_spread);
    out.metric("min_gap", scan.rows.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min));
    out.metric("rows", scan.rows.len() as f64);
    let dense_max = chain.dense_check_max.unwrap_or(0);
    if dense_max >= 1 {
        let mut worst = 0.0f64;
        for big_n in 1..=dense_max {
            let union = chain_sector_union(big_n)?;
            let full = dense::hermitian_eigenvalues(&chain_penalty(big_n)?.to_dense(0.0)?);
            worst = union.iter().zip(&full).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
        }
        out.metric("sector_dense_max_error", worst);
    }
    out.details = serde_json::to_value(&scan)?;
    Ok(out)
}

fn chain(spec: &ExperimentSpec) -> Result<Outcome> {
    let big_n = spec.chain.as_ref().and_then(|c| c.n).ok_or_else(|| Error::Config("chain needs \"chain\": {\"n\": N}".into()))?;
    let code = builtin::builtin_chain(big_n)?;
    let penalty = chain_penalty(big_n)?;
    let mut out = Outcome::default();
    let params = code.params();
    out.metric("n", params.n as f64);
    out.metric("k", params.k as f64);
    out.metric("num_gauge_generators", code.gauge_generators().len() as f64);
    out.metric("num_stabilizers", code.num_stabilizers() as f64);

    let row = chain_gap(big_n)?;
    out.metric("gap", row.gap);
    out.metric("scaled_gap", row.scaled_gap);
    out.metric("ground_energy", row.ground_energy);

    let mut bare = Hamiltonian::new(big_n);
    for i in 0..big_n {
        bare.push(1.0, PauliOperator::single(big_n, i, Letter::X), ScheduleGroup::OneMinusS)?;
    }
    for i in 0..big_n.saturating_sub(1) {
        bare.push(1.0, PauliOperator::uniform(big_n, &[i, i + 1], Letter::Z), ScheduleGroup::S)?;
    }
    let encoded = encode_hamiltonian(&bare, &code, RepresentativePolicy::MinWeight)?;
    let max_weight = encoded.terms().iter().map(|t| t.pauli.weight()).max().unwrap_or(0);
    out.metric("max_encoded_weight", max_weight as f64);
    let commutes = encoded.terms().iter().all(|t| penalty.commutes_with_pauli(&t.pauli).unwrap_or(false));
    out.flag("encoded_commutes_with_penalty", commutes);

    let report = ground_in_codespace(&penalty, &code, 1e-8)?;
    out.flag("ground_in_codespace", report.satisfied);
    out.reports.push(report);

    out.table = Table::new(&["s_x", "s_z", "lowest", "second"]);
    for (s_x, s_z) in SECTORS {
        let d = chain_penalty_spectrum(big_n, s_x, s_z)?;
        let e = d.eigenvalues();
        out.table.push(vec![Cell::Int(s_x.into()), Cell::Int(s_z.into()), e[0].into(), e.get(1).copied().into()]);
    }
    out.details = json!({ "penalty": penalty.to_json_value(), "encoded": encoded.to_json_value() });
    Ok(out)
}

fn e_p_values(spec: &ExperimentSpec, v_norm: f64) -> Result<Vec<f64>> {
    let e = spec.e_p.as_ref().ok_or_else(|| Error::Config("experiment needs an \"e_p\" section".into()))?;
    match (&e.values, &e.relative) {
        (Some(v), None) => Ok(v.clone()),
        (None, Some(r)) => Ok(r.iter().map(|x| x * v_norm).collect()),
        _ => Err(Error::Config("\"e_p\" needs exactly one of values, relative".into())),
    }
}

/// Encoded logical `|0…0⟩` or `|+…+⟩` with the penalty's lowest gauge state,
/// bath in `|0⟩`, projected onto `P`. `None` when the projection vanishes.
fn initial_state(spec: &ExperimentSpec, model: &SystemBathModel, p: &OperatorMatrix) -> Result<Option<StateVector>> {
    let code = &model.code;
    let u_enc = encoding_unitary(code)?;
    let layout = SlotLayout::of(code);
    let gauge = penalty_ground_gauge_state(code, &model.penalty, &u_enc)?;
    let k = code.num_logical();
    let logical = match spec.initial_state {
        InitialState::Zero => {
            let mut v = StateVector::zeros(1 << k);
            v[0] = dense::ONE;
            v
        }
        InitialState::Plus => StateVector::from_element(1 << k, C64::new((0.5f64).powi(k as i32).sqrt(), 0.0)),
    };
    let system = encode_state(&u_enc, &layout, &gauge, &logical)?;
    let mut bath = StateVector::zeros(model.bath_dim());
    bath[0] = dense::ONE;
    let psi = p * system.kronecker(&bath);
    let norm = psi.norm();
    Ok((norm > 1e-6).then(|| psi / C64::new(norm, 0.0)))
}

fn max_of(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, f64::max)
}

fn sweep(spec: &ExperimentSpec) -> Result<Outcome> {
    let code = spec.build_code()?;
    let model = build_model(spec, &code)?;
    let grid_spec = spec.grid.as_ref().ok_or_else(|| Error::Config("experiment needs a \"grid\" section".into()))?;
    let grid = TimeGrid::new(grid_spec.total_time, grid_spec.num_steps)?;
    let v = model.dense_interaction()?;
    let v_norm = dense::hermitian_norm(&v);
    let e_ps = e_p_values(spec, v_norm)?;

    let p_sys = system_projector(spec, &code, &model.penalty)?;
    let p = model.lift(&p_sys);
    let d = model.penalty_decomposition()?;
    let lifted = SpectralDecomposition::new(&model.lift(&model.penalty.to_dense(0.0)?), d.degeneracy_tol())?;
    let report = check_theorem1_condition(&v, &lifted, &p, DEFAULT_TOL)?;
    let c = match spec.theorem {
        Theorem::One => report.constant.unwrap_or(0.0),
        Theorem::Two => 0.0,
    };
    let mut out = Outcome::default();
    out.metric("v_norm", v_norm);
    out.metric("constant_c", c);
    out.metric("condition_residual", report.max_residual());
    out.conditions_passed = Some(spec.theorem == Theorem::Two || report.satisfied);
    let runnable = out.conditions_passed == Some(true);
    out.reports.push(report);

    out.table = Table::new(&[
        "E_p",
        "deviation",
        "bound5a",
        "bound5b",
        "supK",
        "semi_distance",
        "bound5a_envelope",
        "naive_bound",
        "final_K",
        "steps",
        "halving_change",
    ]);
    if !runnable {
        return Ok(out);
    }
    let opts = SweepOptions {
        theorem: spec.theorem,
        grid,
        projector: p.clone(),
        index_set: d.sectors_overlapping(&p_sys),
        initial_state: initial_state(spec, &model, &p)?,
        scale_steps: grid_spec.scale_steps,
        quadrature_check: true,
    };
    let rows = e_ps
        .par_iter()
        .map(|&e_p| run_point(&model.with_penalty_strength(e_p), &opts, c))
        .collect::<Result<Vec<_>>>()?;

    for r in &rows {
        out.table.push(vec![
            r.e_p.into(),
            r.deviation.into(),
            r.bound_5a.into(),
            r.bound_5b.unwrap_or(f64::INFINITY).into(),
            r.sup_k.into(),
            r.semi_distance.into(),
            r.bound_5a_envelope.into(),
            r.naive_bound.into(),
            r.final_k.into(),
            r.steps.into(),
            r.halving_change.into(),
        ]);
    }
    let positive: Vec<_> = rows.iter().filter(|r| r.e_p > 0.0).collect();
    let xs: Vec<f64> = positive.iter().map(|r| r.e_p).collect();
    if let Some(s) = loglog_slope(&xs, &positive.iter().map(|r| r.deviation).collect::<Vec<_>>()) {
        out.metric("slope", s);
    }
    if let Some(s) = loglog_slope(&xs, &positive.iter().map(|r| r.sup_k).collect::<Vec<_>>()) {
        out.metric("slope_sup_k", s);
    }
    out.metric("max_deviation_over_5a", max_of(rows.iter().map(|r| r.deviation / r.bound_5a.max(f64::MIN_POSITIVE))));
    out.metric(
        "max_sup_k_over_5b",
        max_of(positive.iter().filter_map(|r| r.bound_5b.map(|b| r.sup_k / b.max(f64::MIN_POSITIVE)))),
    );
    if positive.iter().any(|r| r.naive_bound.is_some()) {
        let ratio = positive
            .iter()
            .filter_map(|r| Some(r.naive_bound? / r.bound_5a.max(f64::MIN_POSITIVE)))
            .fold(f64::INFINITY, f64::min);
        out.metric("min_naive_over_5a", ratio);
    }
    if rows.iter().all(|r| r.semi_distance.is_some()) {
        out.metric(
            "max_semi_over_deviation",
            max_of(rows.iter().map(|r| r.semi_distance.unwrap_or(0.0) / r.deviation.max(f64::MIN_POSITIVE))),
        );
        out.metric("max_semi_distance", max_of(rows.iter().filter_map(|r| r.semi_distance)));
    }
    out.metric("max_unitarity_defect", max_of(rows.iter().map(|r| r.unitarity_defect)));
    out.metric("max_halving_change", max_of(rows.iter().map(|r| r.halving_change)));
    if rows.iter().any(|r| r.quadrature_error.is_some()) {
        out.metric("max_quadrature_error", max_of(rows.iter().filter_map(|r| r.quadrature_error)));
    }
    if let Some(last) = rows.last() {
        out.metric("deviation_at_max_e_p", last.deviation);
    }
    if let (Some(psi), Some(first)) = (&opts.initial_state, rows.first()) {
        let (gauge, logical) = gauge_checks(spec, &model, psi, &first.u_v, e_ps.iter().copied().fold(0.0, f64::max), &grid)?;
        out.metric("gauge_invariance_max", gauge);
        out.metric("logical_statistics_change", logical);
    }
    out.details = json!({ "rows": rows, "penalty": model.penalty.to_json_value() });
    Ok(out)
}

/// Largest semi-distance between the evolved state and its image under a
/// seeded random gauge unitary, and the largest change of a bare logical
/// expectation under `U_p(T)` alone.
fn gauge_checks(
    spec: &ExperimentSpec,
    model: &SystemBathModel,
    psi: &StateVector,
    u_v: &OperatorMatrix,
    e_p: f64,
    grid: &TimeGrid,
) -> Result<(f64, f64)> {
    let code = &model.code;
    let u_enc = encoding_unitary(code)?;
    let rho = dense::outer(&(u_v * psi));
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut gauge = 0.0f64;
    for _ in 0..GAUGE_SAMPLES {
        let g = model.lift(&gauge_unitary(code, &mut rng)?);
        let moved = &g * &rho * g.adjoint();
        gauge = gauge.max(semi_distance(&rho, &moved, code, &u_enc)?);
    }
    let rho0 = dense::outer(psi);
    let up = model.with_penalty_strength(e_p).u_p(grid.total_time)?;
    let rho_p = &up * &rho0 * up.adjoint();
    let mut logical = 0.0f64;
    for l in code.bare_logicals() {
        let lm = model.lift(&l.to_dense()?);
        let before = dense::trace(&(&lm * &rho0)).re;
        let after = dense::trace(&(&lm * &rho_p)).re;
        logical = logical.max((after - before).abs());
    }
    Ok((gauge, logical))
}

fn swap_gate(spec: &ExperimentSpec) -> Result<Outcome> {
    let code = match &spec.code {
        Some(_) => spec.build_code()?,
        None => builtin::builtin_832(),
    };
    let s = spec.swap.clone().unwrap_or_default();
    let base = SwapConfig::default();
    let mut cfg = SwapConfig {
        total_time: s.total_time.unwrap_or(base.total_time),
        num_steps: s.num_steps.unwrap_or(base.num_steps),
        penalty_strength: 0.0,
        noise_strength: s.noise_strength.unwrap_or(0.05),
        bath_frequency: s.bath_frequency.unwrap_or(base.bath_frequency),
        bath_qubits: s.bath_qubits.unwrap_or(base.bath_qubits),
        theta: s.theta.unwrap_or(base.theta),
        phi: s.phi.unwrap_or(base.phi),
        policy: s.policy.unwrap_or(base.policy),
    };
    let mut out = Outcome::default();
    let noiseless = match s.calibrate_target {
        Some(target) => calibrate_time(&code, &cfg, target, s.max_doublings.unwrap_or(3))?,
        None => run_encoded_swap(&code, &SwapConfig { noise_strength: 0.0, ..cfg.clone() })?,
    };
    cfg.total_time = noiseless.total_time;
    cfg.num_steps = noiseless.num_steps;
    out.metric("calibrated_time", cfg.total_time);
    out.metric("num_steps", cfg.num_steps as f64);
    out.metric("noiseless_fidelity", noiseless.fidelity);
    out.metric("unencoded_fidelity", run_unencoded_swap(&cfg)?.fidelity);

    let n = code.num_physical();
    let total = n + cfg.bath_qubits;
    let mut v = Hamiltonian::new(total);
    for b in 0..cfg.bath_qubits {
        for q in 0..n {
            for letter in [Letter::X, Letter::Z] {
                v.push(cfg.noise_strength, PauliOperator::uniform(total, &[q, n + b], letter), ScheduleGroup::Constant)?;
            }
        }
    }
    let v_norm = if v.is_empty() { 0.0 } else { dense::hermitian_norm(&v.to_dense(0.0)?) };
    out.metric("v_norm", v_norm);

    let relative = s.e_p_relative.clone().unwrap_or_else(|| vec![0.0, 10.0, 100.0]);
    let results = relative
        .par_iter()
        .map(|&r| run_encoded_swap(&code, &SwapConfig { penalty_strength: r * v_norm, ..cfg.clone() }))
        .collect::<Result<Vec<_>>>()?;
    out.table = Table::new(&["E_p_relative", "E_p", "fidelity", "codespace_population"]);
    for (r, res) in relative.iter().zip(&results) {
        out.table.push(vec![(*r).into(), res.penalty_strength.into(), res.fidelity.into(), res.codespace_population.into()]);
    }
    if let (Some(first), Some(last)) = (results.first(), results.last()) {
        out.metric("fidelity_first", first.fidelity);
        out.metric("fidelity_last", last.fidelity);
        out.metric("fidelity_gain", last.fidelity - first.fidelity);
    }
    out.details = json!({ "config": cfg, "results": results, "noiseless": noiseless });
    Ok(out)
}
