//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use subpen::chain::{chain_gap_scan, chain_penalty, chain_sector_union};
use subpen::code::builtin::{builtin_412, builtin_412_blocks, builtin_832, builtin_chain};
use subpen::code::{code_from_a_matrix, codespace_projector, formula_params, is_detectable, DetectabilityMode};
use subpen::conditions::{
    check_condition1, gauge_sum_penalty, ground_in_codespace, projector_penalty, stabilizer_penalty,
};
use subpen::dynamics::{
    block_bounds, bound_eq5b, compute_k, naive_bound, BlockModel, Coupling, CouplingBlock, SystemBathModel, TimeGrid,
};
use subpen::experiment::{self, Cell, ExperimentResult, ExperimentSpec};
use subpen::{dense, BinaryMatrix, CodeParams, Hamiltonian, Letter, OperatorMatrix, PauliOperator, ScheduleGroup};
use subpen::{SpectralDecomposition, SubsystemCode};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: subpen::Error) -> String {
    e.to_string()
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run_config(name: &str) -> Result<ExperimentResult, String> {
    experiment::run(&ExperimentSpec::load(config(name)).map_err(err)?).map_err(err)
}

fn single_qubit_paulis(n: usize) -> Vec<PauliOperator> {
    (0..n)
        .flat_map(|q| [Letter::X, Letter::Y, Letter::Z].map(|l| PauliOperator::single(n, q, l)))
        .collect()
}

/// `(N+1) × (N+1)` two-band cyclic A-matrix.
fn two_band(size: usize) -> BinaryMatrix {
    let rows: Vec<Vec<u8>> = (0..size)
        .map(|i| (0..size).map(|j| u8::from(j == i || j == (i + 1) % size)).collect())
        .collect();
    BinaryMatrix::from_rows(&rows).expect("square rows")
}

fn column(result: &ExperimentResult, name: &str) -> Vec<f64> {
    let idx = result.table.columns.iter().position(|c| c == name).expect("column present");
    result
        .table
        .rows
        .iter()
        .map(|row| match &row[idx] {
            Cell::Num(v) => *v,
            Cell::Int(v) => *v as f64,
            _ => f64::NAN,
        })
        .collect()
}

fn code_parameters() -> Check {
    let mut cases: Vec<(BinaryMatrix, CodeParams)> = vec![
        (BinaryMatrix::from_rows(&[[1u8, 1], [1, 1]]).map_err(err)?, CodeParams { n: 4, k: 1, d: 2 }),
        (two_band(4), CodeParams { n: 8, k: 3, d: 2 }),
    ];
    for big_n in 2..=6 {
        cases.push((two_band(big_n + 1), CodeParams { n: 2 * big_n + 2, k: big_n, d: 2 }));
    }
    for (a, expected) in &cases {
        let code = code_from_a_matrix(a).map_err(err)?;
        let formula = formula_params(a).map_err(err)?;
        ensure(code.params() == *expected && formula == *expected, format!("{} vs {formula} vs {expected}", code.params()))?;
        if expected.n <= 8 {
            ensure(code.brute_force_distance() == Some(expected.d), format!("brute-force distance of {expected}"))?;
        }
    }
    ensure(builtin_412().params() == cases[0].1 && builtin_832().params() == cases[1].1, "builtin parameters")?;
    Ok(format!("{} A-matrices", cases.len()))
}

fn codespace_spectra() -> Check {
    let code = builtin_412();
    let h_p = gauge_sum_penalty(&code, 1.0).map_err(err)?;
    let p = codespace_projector(&code).map_err(err)?;
    let report = check_condition1(&h_p, &p, &single_qubit_paulis(4), 1e-9).map_err(err)?;
    let r2 = 2.0 * 2f64.sqrt();
    let close = |xs: &[f64], allowed: &[f64]| xs.iter().all(|x| allowed.iter().any(|a| (x - a).abs() <= 1e-9));
    for s in &report.spectra {
        ensure(s.penalty.len() == 2 && close(&s.penalty, &[-r2, r2]), format!("penalty spectrum {:?}", s.penalty))?;
        ensure(close(&s.conjugated, &[-2.0, 0.0, 2.0]), format!("{} conjugated spectrum {:?}", s.error, s.conjugated))?;
    }
    ensure(report.spectra.len() == 12, "twelve errors")?;
    Ok("{±2√2} on the codespace; conjugates within {0, ±2}".into())
}

fn condition_one() -> Check {
    let c832 = builtin_832();
    let p = codespace_projector(&c832).map_err(err)?;
    let gauge = check_condition1(&gauge_sum_penalty(&c832, 1.0).map_err(err)?, &p, &single_qubit_paulis(8), 1e-9).map_err(err)?;
    ensure(gauge.satisfied && gauge.spectra.len() == 24, "gauge-sum penalty on [[8,3,2]]")?;

    let mut codes: Vec<SubsystemCode> = vec![builtin_412(), builtin_832(), builtin_412_blocks(2).map_err(err)?];
    for big_n in 2..=3 {
        codes.push(builtin_chain(big_n).map_err(err)?);
    }
    for code in &codes {
        let pc = codespace_projector(code).map_err(err)?;
        let h = projector_penalty(code).map_err(err)?;
        let r = check_condition1(&h, &pc, &single_qubit_paulis(code.num_physical()), 1e-9).map_err(err)?;
        ensure(r.satisfied, format!("I − p fails on {}: {:?}", code.name(), r.witness))?;
    }
    let mixed = stabilizer_penalty(&c832, &[1.0, -1.0]).map_err(err)?;
    let r = check_condition1(&mixed, &p, &single_qubit_paulis(8), 1e-9).map_err(err)?;
    ensure(!r.satisfied, "mixed-sign stabilizer penalty should fail")?;
    Ok(format!("24/24 on [[8,3,2]], I − p on {} codes, counterexample rejected", codes.len()))
}

fn chain_gap() -> Check {
    let scan = chain_gap_scan(3..=10).map_err(err)?;
    ensure(scan.scaled_spread < 0.05, format!("gap·(N+1) spread {:.4}", scan.scaled_spread))?;
    let mut worst = 0.0f64;
    for big_n in 1..=4 {
        let union = chain_sector_union(big_n).map_err(err)?;
        let full = dense::hermitian_eigenvalues(&chain_penalty(big_n).map_err(err)?.to_dense(0.0).map_err(err)?);
        ensure(union.len() == full.len(), "multiset sizes")?;
        worst = union.iter().zip(&full).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
    }
    ensure(worst <= 1e-8, format!("sector vs dense {worst:.2e}"))?;
    Ok(format!("gap·(N+1) = {:.4} ± {:.2}%, sector error {worst:.1e}", scan.scaled_mean, 100.0 * scan.scaled_spread))
}

fn ground_space() -> Check {
    for big_n in 2..=5 {
        let r = ground_in_codespace(&chain_penalty(big_n).map_err(err)?, &builtin_chain(big_n).map_err(err)?, 1e-9).map_err(err)?;
        ensure(r.satisfied, format!("chain N={big_n}: residual {:.2e}", r.max_residual()))?;
    }
    let c412 = builtin_412();
    let r = ground_in_codespace(&gauge_sum_penalty(&c412, 1.0).map_err(err)?, &c412, 1e-9).map_err(err)?;
    ensure(r.satisfied, "[[4,1,2]]")?;
    Ok("chain N = 2..5 and [[4,1,2]]".into())
}

fn convergence(sweep: &ExperimentResult) -> Check {
    let slope = sweep.metric("slope").ok_or("no slope")?;
    ensure((slope + 1.0).abs() <= 0.2, format!("slope {slope:.3}"))?;
    let e_p = column(sweep, "E_p");
    let dev = column(sweep, "deviation");
    let b5a = column(sweep, "bound5a");
    let sup_k = column(sweep, "supK");
    let b5b = column(sweep, "bound5b");
    for i in 0..e_p.len() {
        ensure(dev[i] <= b5a[i], format!("deviation above bound at E_p = {}", e_p[i]))?;
        if e_p[i] > 0.0 {
            ensure(sup_k[i] <= b5b[i], format!("sup K above bound at E_p = {}", e_p[i]))?;
        }
    }
    Ok(format!("slope {slope:.3} over {} rows, both bounds dominate", e_p.len()))
}

fn memory_model(bath_qubits: usize, e_p: f64) -> subpen::Result<SystemBathModel> {
    let code = builtin_412();
    let mut bath = Hamiltonian::new(bath_qubits);
    for b in 0..bath_qubits {
        bath.push(0.5, PauliOperator::single(bath_qubits, b, Letter::Z), ScheduleGroup::Constant)?;
    }
    let couplings = (0..4)
        .map(|q| Coupling {
            coeff: 0.1,
            system: PauliOperator::single(4, q, Letter::X),
            bath: PauliOperator::single(bath_qubits, 0, Letter::X),
        })
        .collect();
    let penalty = gauge_sum_penalty(&code, 1.0)?;
    SystemBathModel::new(code, Hamiltonian::new(4), bath, couplings, penalty, e_p, 1.0)
}

fn block_model(model: &SystemBathModel, ground: &OperatorMatrix) -> BlockModel {
    BlockModel {
        blocks: vec![CouplingBlock { qubits: (0..4).collect(), penalty: model.penalty.clone(), projector: ground.clone() }],
        system: model.system.clone(),
        bath: model.bath.clone(),
        couplings: model.couplings.clone(),
        penalty_strength: model.penalty_strength,
    }
}

fn global_naive(model: &SystemBathModel, grid: &TimeGrid, ground: &OperatorMatrix) -> subpen::Result<f64> {
    let p = model.lift(ground);
    let w = OperatorMatrix::zeros(p.nrows(), p.ncols());
    let k = compute_k(model, grid, &w, &p)?;
    Ok(naive_bound(&k, bound_eq5b(k.vw_norm, &k.penalty_eigenvalues, model.penalty_strength)?))
}

fn block_locality() -> Check {
    let grid = TimeGrid::new(1.0, 400).map_err(err)?;
    let e_p = 20.0;
    let small = memory_model(1, e_p).map_err(err)?;
    let large = memory_model(2, e_p).map_err(err)?;
    let ground = SpectralDecomposition::new(&small.penalty.to_dense(0.0).map_err(err)?, 1e-8).map_err(err)?.ground_projector();

    let b_small = block_bounds(&block_model(&small, &ground), &grid).map_err(err)?.total;
    let b_large = block_bounds(&block_model(&large, &ground), &grid).map_err(err)?.total;
    ensure((b_small - b_large).abs() < 1e-10, format!("block bound moved by {:.2e}", (b_small - b_large).abs()))?;
    let n_small = global_naive(&small, &grid, &ground).map_err(err)?;
    let n_large = global_naive(&large, &grid, &ground).map_err(err)?;
    ensure((n_small - n_large).abs() > 1e-6, "global bound should grow with the bath register")?;

    let two = builtin_412_blocks(2).map_err(err)?;
    let n = two.num_physical();
    let mut bath = Hamiltonian::new(2);
    let mut couplings = Vec::new();
    let mut blocks = Vec::new();
    for b in 0..2 {
        let qubits: Vec<usize> = (4 * b..4 * b + 4).collect();
        bath.push(0.5, PauliOperator::single(2, b, Letter::Z), ScheduleGroup::Constant).map_err(err)?;
        for &q in &qubits {
            couplings.push(Coupling {
                coeff: 0.1,
                system: PauliOperator::single(n, q, Letter::X),
                bath: PauliOperator::single(2, b, Letter::X),
            });
        }
        blocks.push(CouplingBlock { qubits, penalty: small.penalty.clone(), projector: ground.clone() });
    }
    let pair = BlockModel { blocks, system: Hamiltonian::new(n), bath, couplings, penalty_strength: e_p };
    let bound = block_bounds(&pair, &grid).map_err(err)?;
    let one = bound.per_block[0];
    ensure(bound.per_block[1] == one && bound.total == 2.0 * one, format!("{:?} vs total {}", bound.per_block, bound.total))?;
    Ok(format!(
        "block {b_small:.6e} unchanged, global {n_small:.4e} -> {n_large:.4e}; pair = 2 × {one:.4e}"
    ))
}

fn semi_distance_chain(sweep: &ExperimentResult) -> Check {
    let dev = column(sweep, "deviation");
    let semi = column(sweep, "semi_distance");
    for (d, s) in dev.iter().zip(&semi) {
        ensure(s.is_finite() && s <= d, format!("semi-distance {s:.3e} above deviation {d:.3e}"))?;
    }
    let gauge = sweep.metric("gauge_invariance_max").ok_or("no gauge metric")?;
    let logical = sweep.metric("logical_statistics_change").ok_or("no logical metric")?;
    ensure(gauge <= 1e-9, format!("gauge invariance {gauge:.2e}"))?;
    ensure(logical <= 1e-9, format!("logical statistics {logical:.2e}"))?;
    Ok(format!("{} rows bounded; gauge {gauge:.1e}, logical {logical:.1e}", dev.len()))
}

fn swap_gate() -> Check {
    let result = run_config("swap-gate-832.json")?;
    let noiseless = result.metric("noiseless_fidelity").ok_or("no fidelity")?;
    ensure(noiseless >= 0.99, format!("noiseless fidelity {noiseless:.4}"))?;
    let rel = column(&result, "E_p_relative");
    let fid = column(&result, "fidelity");
    let at = |x: f64| rel.iter().position(|r| *r == x).map(|i| fid[i]).ok_or(format!("no row at {x}"));
    let (f0, f100) = (at(0.0)?, at(100.0)?);
    ensure(f100 > f0, format!("fidelity {f100:.4} at 100‖V‖ vs {f0:.4} at 0"))?;
    Ok(format!("T = {}, noiseless {noiseless:.5}, noisy {f0:.4} -> {f100:.6}", result.metric("calibrated_time").unwrap_or(0.0)))
}

fn detectability() -> Check {
    let mut codes: Vec<SubsystemCode> = vec![builtin_412(), builtin_832(), builtin_412_blocks(2).map_err(err)?];
    for big_n in 2..=3 {
        codes.push(builtin_chain(big_n).map_err(err)?);
    }
    for code in &codes {
        for e in single_qubit_paulis(code.num_physical()) {
            ensure(is_detectable(code, &e, 1e-9).map_err(err)?.detectable, format!("{} on {}", e.to_sparse_string(), code.name()))?;
        }
        for g in code.gauge_generators() {
            let r = is_detectable(code, g, 1e-9).map_err(err)?;
            ensure(r.mode == DetectabilityMode::GaugeOnly, format!("gauge {} on {}", g.to_sparse_string(), code.name()))?;
        }
        for l in code.bare_logicals() {
            ensure(!is_detectable(code, &l, 1e-9).map_err(err)?.detectable, format!("logical {} on {}", l.to_sparse_string(), code.name()))?;
        }
    }
    Ok(format!("{} builtin codes", codes.len()))
}

fn main() {
    let mut failures = 0;
    let mut report = |id: usize, title: &str, limit: Duration, f: &mut dyn FnMut() -> Check| {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= limit {
                Ok(msg)
            } else {
                Err(format!("{msg}; over the {}s limit", limit.as_secs()))
            }
        });
        match outcome {
            Ok(msg) => println!("PASS {id:>2} {title}: {msg} [{:.2}s]", elapsed.as_secs_f64()),
            Err(msg) => {
                failures += 1;
                println!("FAIL {id:>2} {title}: {msg} [{:.2}s]", elapsed.as_secs_f64());
            }
        }
    };
    let secs = Duration::from_secs;

    report(1, "code parameters", secs(5), &mut code_parameters);
    report(2, "codespace spectra", secs(1), &mut codespace_spectra);
    report(3, "spectral condition", secs(10), &mut condition_one);
    report(4, "chain gap scaling", secs(60), &mut chain_gap);
    report(5, "ground space in codespace", secs(30), &mut ground_space);

    let sweep_start = Instant::now();
    let sweep = run_config("sweep-412-memory.json");
    let sweep_time = sweep_start.elapsed();
    report(6, "1/E_p convergence", secs(300), &mut || {
        if sweep_time > secs(300) {
            return Err(format!("sweep took {:.1}s", sweep_time.as_secs_f64()));
        }
        convergence(sweep.as_ref().map_err(Clone::clone)?).map(|m| format!("{m}; sweep run {:.2}s", sweep_time.as_secs_f64()))
    });
    report(7, "block-bound locality", secs(60), &mut block_locality);
    report(8, "semi-distance chain", secs(120), &mut || semi_distance_chain(sweep.as_ref().map_err(Clone::clone)?));
    report(9, "encoded swap gate", secs(300), &mut swap_gate);
    report(10, "detectability", secs(10), &mut detectability);

    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
