//! Spectral conditions for the gauge-sum penalty on the [[8,3,2]] code, and
//! a mixed-sign stabilizer penalty that violates them.
use subpen::code::builtin::builtin_832;
use subpen::code::codespace_projector;
use subpen::conditions::{
    anticommutation_matrix, check_condition1, gauge_sum_penalty, ground_in_codespace, stabilizer_penalty,
    stabilizer_sign_condition,
};
use subpen::{Letter, PauliOperator, SpectralDecomposition};

fn main() -> subpen::Result<()> {
    let code = builtin_832();
    let n = code.num_physical();
    let errors: Vec<PauliOperator> = (0..n)
        .flat_map(|q| [Letter::X, Letter::Y, Letter::Z].map(|l| PauliOperator::single(n, q, l)))
        .collect();

    let h_p = gauge_sum_penalty(&code, 1.0)?;
    let ground = SpectralDecomposition::new(&h_p.to_dense(0.0)?, 1e-8)?;
    println!("gauge-sum penalty levels: {:?}", ground.eigenvalues());
    let report = check_condition1(&h_p, &ground.ground_projector(), &errors, 1e-9)?;
    println!("condition on the ground sector: {} ({} errors)", report.satisfied, errors.len());
    println!("ground space in codespace: {}", ground_in_codespace(&h_p, &code, 1e-8)?.satisfied);

    let p_c = codespace_projector(&code)?;
    let mixed = stabilizer_penalty(&code, &[1.0, -1.0])?;
    let report = check_condition1(&mixed, &p_c, &errors, 1e-9)?;
    println!("mixed-sign stabilizer penalty: {} witness {:?}", report.satisfied, report.witness);
    let signs = stabilizer_sign_condition(&[1.0, -1.0], &anticommutation_matrix(code.stabilizers(), &errors)?)?;
    println!("sign arithmetic agrees: {} {:?}", signs.satisfied, signs.witness);
    Ok(())
}
