use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::{bound_eq5a, bound_eq5b, compute_k, k_quadrature, naive_bound};
use super::model::SystemBathModel;
use super::semi::semi_distance;
use super::{deviation, unitarity_defect, TimeGrid};
use crate::conditions::{check_theorem1_condition, ConditionReport};
use crate::dense::{self, OperatorMatrix, StateVector, C64};
use crate::error::Result;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// Target `e^{−icT} U_0 U_p` with `W = cI`.
    #[default]
    One,
    /// Target generated by `H_0 + E_p H_p + W` with `W = Σ_{a∈I} Π_a V Π_a`.
    Two,
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub theorem: Theorem,
    pub grid: TimeGrid,
    /// `P` on system ⊗ bath.
    pub projector: OperatorMatrix,
    /// Penalty eigenvalue indices whose projectors sum to `P` (second target only).
    pub index_set: Vec<usize>,
    /// Optional initial state in the range of `P`, for the semi-distance.
    pub initial_state: Option<StateVector>,
    /// Scale time steps by `max(1, E_p T / 10)` for scheduled Hamiltonians.
    pub scale_steps: bool,
    /// Compare the analytic `K` with quadrature at three times when cheap enough.
    pub quadrature_check: bool,
}

/// One penalty strength of a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct EvolutionResult {
    pub e_p: f64,
    pub theorem: Theorem,
    pub steps: usize,
    pub constant_c: f64,
    pub deviation: f64,
    pub bound_5a: f64,
    pub bound_5a_envelope: f64,
    pub bound_5b: Option<f64>,
    pub naive_bound: Option<f64>,
    pub sup_k: f64,
    pub final_k: f64,
    pub sup_commutator: f64,
    pub semi_distance: Option<f64>,
    pub unitarity_defect: f64,
    pub halving_change: f64,
    pub quadrature_error: Option<f64>,
    #[serde(skip)]
    pub u_v: OperatorMatrix,
    #[serde(skip)]
    pub u_w: OperatorMatrix,
}

const QUADRATURE_MAX_PHASE: f64 = 200.0;

fn targets(model: &SystemBathModel, opts: &SweepOptions, grid: &TimeGrid, c: f64) -> Result<(OperatorMatrix, OperatorMatrix)> {
    match opts.theorem {
        Theorem::One => {
            let dim = opts.projector.nrows();
            Ok((model.target_unitary_theorem1(grid, c)?, dense::identity(dim) * C64::new(c, 0.0)))
        }
        Theorem::Two => {
            let w = model.theorem2_w(&opts.index_set, &opts.projector)?;
            Ok((model.evolve_with(&w, grid)?, w))
        }
    }
}

/// Evolve, build the target and evaluate every bound at one `E_p`.
pub fn run_point(model: &SystemBathModel, opts: &SweepOptions, c: f64) -> Result<EvolutionResult> {
    let e_p = model.penalty_strength;
    let scheduled = model.system.has_schedule();
    let mut grid = opts.grid;
    if opts.scale_steps && scheduled {
        grid = grid.scaled_steps(e_p * grid.total_time / 10.0);
    }
    let p = &opts.projector;
    let u_v = model.u_v(&grid)?;
    let (u_w, w) = targets(model, opts, &grid, c)?;
    let dev = deviation(&u_v, &u_w, p)?;
    let halving_change = if scheduled {
        let half = grid.halved();
        let coarse = deviation(&model.u_v(&half)?, &targets(model, opts, &half, c)?.0, p)?;
        (coarse - dev).abs() / dev.max(f64::MIN_POSITIVE)
    } else {
        0.0
    };
    let k = compute_k(model, &grid, &w, p)?;
    let bound_5b = (e_p > 0.0).then(|| bound_eq5b(k.vw_norm, &k.penalty_eigenvalues, e_p)).transpose()?;
    let spread = k.penalty_eigenvalues.last().unwrap_or(&0.0) - k.penalty_eigenvalues.first().unwrap_or(&0.0);
    let quadrature_error = if opts.quadrature_check && spread * e_p * grid.total_time <= QUADRATURE_MAX_PHASE {
        let mut worst = 0.0f64;
        for frac in [0.25, 0.5, 1.0] {
            let t = frac * grid.total_time;
            let intervals = (40.0 * spread * e_p * t).ceil() as usize + 2000;
            let numeric = k_quadrature(model, &w, p, t, intervals)?;
            let analytic = k_at_time(&k, model, &w, p, t)?;
            worst = worst.max(dense::spectral_norm(&(numeric - analytic)));
        }
        Some(worst)
    } else {
        None
    };
    let semi = match &opts.initial_state {
        Some(psi) => {
            let full = &u_v * psi;
            let ideal = &u_w * psi;
            Some(semi_distance(&dense::outer(&full), &dense::outer(&ideal), &model.code, &crate::code::encoding_unitary(&model.code)?)?)
        }
        None => None,
    };
    Ok(EvolutionResult {
        e_p,
        theorem: opts.theorem,
        steps: grid.num_steps,
        constant_c: c,
        deviation: dev,
        bound_5a: bound_eq5a(&k),
        bound_5a_envelope: k.envelope_5a(),
        bound_5b,
        naive_bound: bound_5b.map(|b| naive_bound(&k, b)),
        sup_k: k.sup_norm,
        final_k: k.final_norm,
        sup_commutator: k.sup_commutator,
        semi_distance: semi,
        unitarity_defect: unitarity_defect(&u_v),
        halving_change,
        quadrature_error,
        u_v,
        u_w,
    })
}

fn k_at_time(k: &super::KData, model: &SystemBathModel, w: &OperatorMatrix, p: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    if (t - k.total_time).abs() < 1e-15 {
        return Ok(k.k_final.clone());
    }
    let grid = TimeGrid::new(t, 1)?;
    Ok(compute_k(model, &grid, w, p)?.k_final)
}

/// Check the diagonal-block condition once, then run every `E_p` in parallel.
/// Results come back in the order of `e_p_values`.
pub fn penalty_sweep(
    model: &SystemBathModel,
    e_p_values: &[f64],
    opts: &SweepOptions,
) -> Result<(ConditionReport, Vec<EvolutionResult>)> {
    let d = model.penalty_decomposition()?;
    let lifted = crate::spectral::SpectralDecomposition::new(&model.lift(&model.penalty.to_dense(0.0)?), d.degeneracy_tol())?;
    let report = check_theorem1_condition(&model.dense_interaction()?, &lifted, &opts.projector, 1e-9)?;
    let c = match opts.theorem {
        Theorem::One => report.constant.unwrap_or(0.0),
        Theorem::Two => 0.0,
    };
    let rows = e_p_values
        .par_iter()
        .map(|&e_p| run_point(&model.with_penalty_strength(e_p), opts, c))
        .collect::<Result<Vec<_>>>()?;
    Ok((report, rows))
}

/// Least-squares slope of `log y` against `log x` over points with both positive.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 10.0, 100.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 / x).collect();
        assert!((loglog_slope(&xs, &ys).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(loglog_slope(&[1.0], &[1.0]), None);
    }
}
