use subpen::{Letter, PauliOperator};

fn main() -> subpen::Result<()> {
    let n = 4;
    let xx = PauliOperator::parse_sparse("X1 X2", n)?;
    let zz = PauliOperator::parse_sparse("Z2 Z3", n)?;
    let y = PauliOperator::single(n, 1, Letter::Y);

    println!("{} · {} = {}", xx.to_sparse_string(), zz.to_sparse_string(), xx.multiply(&zz)?.to_sparse_string());
    println!("[X1X2, Z2Z3] = 0 ? {}", xx.commutes(&zz)?);
    println!("[X1X2, Y2] = 0 ? {}", xx.commutes(&y)?);
    println!("weight of X1X2·Z2Z3: {}", xx.multiply(&zz)?.weight());

    // Y = iXZ, so X·Z carries a phase of −i.
    let x = PauliOperator::single(1, 0, Letter::X);
    let z = PauliOperator::single(1, 0, Letter::Z);
    println!("X·Z = {}", x.multiply(&z)?.to_sparse_string());
    println!("dense Y1 on one qubit:\n{}", PauliOperator::single(1, 0, Letter::Y).to_dense()?);
    Ok(())
}
