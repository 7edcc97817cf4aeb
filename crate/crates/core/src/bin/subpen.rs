use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use subpen::experiment::{self, ExperimentKind, ExperimentSpec, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "subpen", version, about = "Subsystem-code penalty experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for the CSV table and JSON result.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run whatever kind the config declares.
    Run(RunArgs),
    /// Code parameters, generators and error detectability.
    CodeInspect(RunArgs),
    /// Commutation, block and spectral conditions for a penalty.
    #[command(alias = "check")]
    CheckConditions(RunArgs),
    /// Penalty spectrum, full and on the codespace.
    Spectrum(RunArgs),
    /// Protected-chain penalty gap against chain length.
    GapScan(RunArgs),
    /// Protected Ising chain encoding.
    Chain(RunArgs),
    /// One system-bath evolution per penalty strength.
    Simulate(RunArgs),
    /// Deviation and bounds over a grid of penalty strengths.
    Sweep(RunArgs),
    /// Encoded adiabatic swap on the [[8,3,2]] code.
    SwapGate(RunArgs),
    /// Print the config schema.
    Schema,
}

fn execute(expected: Option<ExperimentKind>, args: &RunArgs) -> subpen::Result<i32> {
    let mut spec = ExperimentSpec::load(&args.config)?;
    if let Some(kind) = expected {
        if kind != spec.kind {
            return Err(subpen::Error::Config(format!(
                "subcommand {} does not match config kind {}",
                kind.name(),
                spec.kind.name()
            )));
        }
    }
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    let result = experiment::run(&spec)?;
    let (csv, json) = result.write_outputs(&args.out, spec.outputs.as_ref())?;
    for e in &result.expectations {
        let status = if e.passed { "ok  " } else { "FAIL" };
        let value = e.value.map_or("missing".to_string(), |v| format!("{v:.6e}"));
        eprintln!("{status} {} = {value}  ({})", e.metric, e.provenance);
    }
    for r in result.reports.iter().filter(|r| !r.satisfied) {
        eprintln!("FAIL {}: {}", r.condition, r.witness.as_deref().unwrap_or("violated"));
    }
    println!("{}", csv.display());
    println!("{}", json.display());
    Ok(result.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Schema => {
            print!("{}", experiment::SCHEMA);
            return ExitCode::SUCCESS;
        }
        Command::Run(a) => (None, a),
        Command::CodeInspect(a) => (Some(ExperimentKind::CodeInspect), a),
        Command::CheckConditions(a) => (Some(ExperimentKind::CheckConditions), a),
        Command::Spectrum(a) => (Some(ExperimentKind::Spectrum), a),
        Command::GapScan(a) => (Some(ExperimentKind::GapScan), a),
        Command::Chain(a) => (Some(ExperimentKind::Chain), a),
        Command::Simulate(a) => (Some(ExperimentKind::Simulate), a),
        Command::Sweep(a) => (Some(ExperimentKind::Sweep), a),
        Command::SwapGate(a) => (Some(ExperimentKind::SwapGate), a),
    };
    let code = execute(kind, args).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    });
    ExitCode::from(code as u8)
}
