use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subpen::code::builtin::builtin_412;
use subpen::code::{encode_state, encoding_unitary, SlotLayout};
use subpen::dense::{self, StateVector};
use subpen::dynamics::{gauge_unitary, semi_distance};
use subpen::C64;

fn main() -> subpen::Result<()> {
    let code = builtin_412();
    let u_enc = encoding_unitary(&code)?;
    let layout = SlotLayout::of(&code);
    let gauge = StateVector::from_vec(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]);
    let zero = StateVector::from_vec(vec![dense::ONE, dense::ZERO]);
    let plus = StateVector::from_vec(vec![C64::new(0.5f64.sqrt(), 0.0); 2]);

    let rho = dense::outer(&encode_state(&u_enc, &layout, &gauge, &zero)?);
    let sigma = dense::outer(&encode_state(&u_enc, &layout, &gauge, &plus)?);
    println!("d(|0̄⟩, |+̄⟩) = {:.6}", semi_distance(&rho, &sigma, &code, &u_enc)?);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let g = gauge_unitary(&code, &mut rng)?;
        let moved = &g * &rho * g.adjoint();
        println!("d(ρ, gρg†) = {:.2e}", semi_distance(&rho, &moved, &code, &u_enc)?);
    }
    Ok(())
}
