use subpen::chain::{chain_gap_scan, chain_penalty, chain_sector_union};

fn main() -> subpen::Result<()> {
    let n_max = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(9);
    let scan = chain_gap_scan(2..=n_max)?;
    println!("{:>3} {:>14} {:>12}", "N", "gap", "gap*(N+1)");
    for r in &scan.rows {
        println!("{:>3} {:>14.10} {:>12.8}", r.big_n, r.gap, r.scaled_gap);
    }
    println!("mean {:.6}, relative spread {:.4}", scan.scaled_mean, scan.scaled_spread);

    let union = chain_sector_union(3)?;
    let dense = subpen::dense::hermitian_eigenvalues(&chain_penalty(3)?.to_dense(0.0)?);
    let err = union.iter().zip(&dense).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("N=3 sector union vs dense: max error {err:.2e}");
    Ok(())
}
