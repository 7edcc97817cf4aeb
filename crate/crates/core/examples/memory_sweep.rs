//! [[4,1,2]] memory with a one-qubit bath: deviation from the ideal evolution
//! against the penalty strength, next to both bounds.
use subpen::code::builtin::builtin_412;
use subpen::conditions::gauge_sum_penalty;
use subpen::dynamics::{loglog_slope, penalty_sweep, Coupling, SweepOptions, SystemBathModel, Theorem, TimeGrid};
use subpen::{dense, Hamiltonian, Letter, PauliOperator, ScheduleGroup};

fn main() -> subpen::Result<()> {
    let code = builtin_412();
    let mut bath = Hamiltonian::new(1);
    bath.push(0.5, PauliOperator::single(1, 0, Letter::Z), ScheduleGroup::Constant)?;
    let mut couplings = Vec::new();
    for q in 0..4 {
        for l in [Letter::X, Letter::Y, Letter::Z] {
            couplings.push(Coupling { coeff: 0.1, system: PauliOperator::single(4, q, l), bath: PauliOperator::single(1, 0, l) });
        }
    }
    let penalty = gauge_sum_penalty(&code, 1.0)?;
    let model = SystemBathModel::new(code, Hamiltonian::new(4), bath, couplings, penalty, 0.0, 1.0)?;
    let v_norm = dense::hermitian_norm(&model.dense_interaction()?);
    let p = model.lift(&model.penalty_decomposition()?.ground_projector());

    let opts = SweepOptions {
        theorem: Theorem::One,
        grid: TimeGrid::new(1.0, 400)?,
        projector: p,
        index_set: vec![0],
        initial_state: None,
        scale_steps: true,
        quadrature_check: false,
    };
    let e_ps: Vec<f64> = (0..9).map(|i| v_norm * 10f64.powf(1.0 + i as f64 / 4.0)).collect();
    let (report, rows) = penalty_sweep(&model, &e_ps, &opts)?;
    println!("‖V‖ = {v_norm:.4}, c = {:.2e}, block condition {}", report.constant.unwrap_or(0.0), report.satisfied);
    println!("{:>10} {:>12} {:>12} {:>12} {:>12}", "E_p", "deviation", "bound_5a", "sup K", "bound_5b");
    for r in &rows {
        println!(
            "{:>10.3} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            r.e_p,
            r.deviation,
            r.bound_5a,
            r.sup_k,
            r.bound_5b.unwrap_or(f64::INFINITY)
        );
    }
    let devs: Vec<f64> = rows.iter().map(|r| r.deviation).collect();
    println!("log-log slope {:.3}", loglog_slope(&e_ps, &devs).unwrap_or(f64::NAN));
    Ok(())
}
