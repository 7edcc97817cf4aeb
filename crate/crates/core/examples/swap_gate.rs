use subpen::code::builtin::builtin_832;
use subpen::dynamics::swap::{run_encoded_swap, run_unencoded_swap, SwapConfig};

fn main() -> subpen::Result<()> {
    let code = builtin_832();
    let base = SwapConfig { total_time: 5.0, num_steps: 200, ..Default::default() };
    println!("bare transfer fidelity {:.6}", run_unencoded_swap(&base)?.fidelity);
    println!("encoded, noiseless     {:.6}", run_encoded_swap(&code, &base)?.fidelity);

    let g = 0.05;
    // ‖V‖ for g Σ (X_q X_b + Z_q Z_b) over eight qubits and one bath qubit.
    let v_norm = 0.4472135954999579;
    for rel in [0.0, 1.0, 10.0, 100.0] {
        let cfg = SwapConfig { noise_strength: g, penalty_strength: rel * v_norm, ..base.clone() };
        let r = run_encoded_swap(&code, &cfg)?;
        println!("E_p = {rel:>5}‖V‖: fidelity {:.6}, codespace population {:.6}", r.fidelity, r.codespace_population);
    }
    Ok(())
}
