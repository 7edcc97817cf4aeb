//! Run a JSON experiment config and print its metrics.
//!
//! cargo run --example run_experiment -- configs/spectrum-412.json
use subpen::experiment::{self, ExperimentSpec};

fn main() -> subpen::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/spectrum-412.json").into());
    let spec = ExperimentSpec::load(&path)?;
    let result = experiment::run(&spec)?;
    for (name, value) in &result.metrics {
        println!("{name:>28} {value:.6e}");
    }
    for e in &result.expectations {
        println!("{} {} ({})", if e.passed { "ok  " } else { "FAIL" }, e.metric, e.provenance);
    }
    print!("{}", String::from_utf8_lossy(&result.table.to_csv()?));
    Ok(())
}
