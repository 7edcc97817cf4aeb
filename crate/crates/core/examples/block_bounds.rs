//! Local bounds for two independent [[4,1,2]] blocks, each with its own bath qubit.
use subpen::code::builtin::builtin_412;
use subpen::conditions::gauge_sum_penalty;
use subpen::dynamics::{block_bounds, BlockModel, Coupling, CouplingBlock, TimeGrid};
use subpen::{Hamiltonian, Letter, PauliOperator, ScheduleGroup, SpectralDecomposition};

fn main() -> subpen::Result<()> {
    let block = builtin_412();
    let h_p = gauge_sum_penalty(&block, 1.0)?;
    let ground = SpectralDecomposition::new(&h_p.to_dense(0.0)?, 1e-8)?.ground_projector();

    let (n, m) = (8, 2);
    let mut bath = Hamiltonian::new(m);
    let mut couplings = Vec::new();
    let mut blocks = Vec::new();
    for b in 0..2 {
        let qubits: Vec<usize> = (4 * b..4 * b + 4).collect();
        bath.push(0.5, PauliOperator::single(m, b, Letter::Z), ScheduleGroup::Constant)?;
        for &q in &qubits {
            couplings.push(Coupling { coeff: 0.1, system: PauliOperator::single(n, q, Letter::X), bath: PauliOperator::single(m, b, Letter::X) });
        }
        blocks.push(CouplingBlock { qubits, penalty: h_p.clone(), projector: ground.clone() });
    }
    let grid = TimeGrid::new(1.0, 400)?;
    for e_p in [10.0, 100.0] {
        let model = BlockModel { blocks: blocks.clone(), system: Hamiltonian::new(n), bath: bath.clone(), couplings: couplings.clone(), penalty_strength: e_p };
        let bound = block_bounds(&model, &grid)?;
        println!("E_p = {e_p}: total {:.4e}, per block {:?}", bound.total, bound.per_block);
    }
    Ok(())
}
