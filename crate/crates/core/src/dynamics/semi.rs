use rand::Rng;

use crate::code::{codespace_projector, SlotLayout, SubsystemCode};
use crate::dense::{self, OperatorMatrix, C64};
use crate::error::{Error, Result};

pub fn validate_density(rho: &OperatorMatrix, tol: f64) -> Result<()> {
    if !rho.is_square() || !rho.nrows().is_power_of_two() {
        return Err(Error::InvalidDensity("not a square 2^n matrix".into()));
    }
    let defect = dense::hermiticity_defect(rho);
    if defect > tol {
        return Err(Error::InvalidDensity(format!("non-Hermitian by {defect:.3e}")));
    }
    let values = dense::hermitian_eigenvalues(rho);
    if values[0] < -tol {
        return Err(Error::InvalidDensity(format!("negative eigenvalue {:.3e}", values[0])));
    }
    let tr = dense::trace(rho).re;
    if tr > 1.0 + tol {
        return Err(Error::InvalidDensity(format!("trace {tr} exceeds one")));
    }
    Ok(())
}

/// `½‖Tr_gauge U†P_CρP_CU − Tr_gauge U†P_CσP_CU‖₁` with `U = U_enc ⊗ I_bath`.
///
/// Any qubits beyond the code's physical qubits are treated as bath and kept.
pub fn semi_distance(rho: &OperatorMatrix, sigma: &OperatorMatrix, code: &SubsystemCode, u_enc: &OperatorMatrix) -> Result<f64> {
    let tol = 1e-9;
    validate_density(rho, tol)?;
    validate_density(sigma, tol)?;
    if rho.shape() != sigma.shape() {
        return Err(Error::SizeMismatch { left: rho.nrows(), right: sigma.nrows() });
    }
    let n = code.num_physical();
    let total = rho.nrows().trailing_zeros() as usize;
    if total < n || u_enc.nrows() != 1 << n {
        return Err(Error::SizeMismatch { left: total, right: n });
    }
    let bath_dim = 1usize << (total - n);
    let id_b = dense::identity(bath_dim);
    let u = dense::kron(u_enc, &id_b);
    let p = dense::kron(&codespace_projector(code)?, &id_b);
    let gauge = SlotLayout::of(code).gauge;
    let keep: Vec<usize> = (0..total).filter(|q| !gauge.contains(q)).collect();
    let reduce = |m: &OperatorMatrix| {
        let inner = u.adjoint() * &p * m * &p * &u;
        dense::partial_trace(&inner, total, &keep)
    };
    Ok(0.5 * dense::trace_norm(&(reduce(rho) - reduce(sigma))))
}

/// `exp(−i Σ_k θ_k G_k)` over the gauge generators with angles drawn
/// uniformly from `[−π, π)`.
pub fn gauge_unitary<R: Rng>(code: &SubsystemCode, rng: &mut R) -> Result<OperatorMatrix> {
    let dim = 1usize << code.num_physical();
    let mut h = OperatorMatrix::zeros(dim, dim);
    for g in code.gauge_generators() {
        let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        h += g.to_dense()? * C64::new(theta, 0.0);
    }
    Ok(dense::exp_hermitian(&h, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::builtin::builtin_412;
    use crate::code::{encode_state, encoding_unitary};
    use crate::dense::StateVector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gauge_invariance_and_zero_self_distance() {
        let code = builtin_412();
        let u_enc = encoding_unitary(&code).unwrap();
        let layout = SlotLayout::of(&code);
        let gauge = StateVector::from_vec(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]);
        let logical = StateVector::from_vec(vec![C64::new(0.8, 0.0), C64::new(0.36, 0.48)]);
        let psi = encode_state(&u_enc, &layout, &gauge, &logical).unwrap();
        let rho = dense::outer(&psi);
        assert!(semi_distance(&rho, &rho, &code, &u_enc).unwrap() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let g = gauge_unitary(&code, &mut rng).unwrap();
            let moved = &g * &rho * g.adjoint();
            assert!(semi_distance(&rho, &moved, &code, &u_enc).unwrap() < 1e-9);
        }
        let bad = &rho * C64::new(2.0, 0.0);
        assert!(matches!(semi_distance(&bad, &rho, &code, &u_enc), Err(Error::InvalidDensity(_))));
    }
}
