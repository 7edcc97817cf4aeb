//! Subsystem codes from binary A-matrices.
use subpen::code::{code_from_a_matrix, formula_params};
use subpen::BinaryMatrix;

fn main() -> subpen::Result<()> {
    let matrices = [
        ("2x2 ones", "11\n11"),
        ("two-band cyclic 4x4", "1100\n0110\n0011\n1001"),
        ("two-band cyclic 5x5", "11000\n01100\n00110\n00011\n10001"),
    ];
    for (label, text) in matrices {
        let a: BinaryMatrix = text.parse()?;
        let code = code_from_a_matrix(&a)?;
        println!("{label}: formula {} built {}", formula_params(&a)?, code.params());
        for g in code.gauge_generators() {
            print!("  {}", g.to_sparse_string());
        }
        println!();
        for (i, (x, z)) in code.logical_pairs().iter().enumerate() {
            println!("  logical {}: X̄ = {}, Z̄ = {}", i + 1, x.to_sparse_string(), z.to_sparse_string());
        }
        if code.num_physical() <= 10 {
            println!("  brute-force distance: {:?}", code.brute_force_distance());
        }
    }
    Ok(())
}
