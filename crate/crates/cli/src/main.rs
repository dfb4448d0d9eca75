use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ire_cli::{commands, CliError, Command, ExperimentConfig, Overrides, RawConfig};

#[derive(Parser)]
#[command(name = "ire", version, about = "Mixed isotonic regression estimators: curves, probes, suites and risk sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Risk-minimizing mixing coefficient on a λ grid.
    AlphaCurve(Flags),
    /// Simulated risks on a λ grid, as CSV and SVG.
    RiskSweep(Flags),
    /// Probe of the admissible mixing interval.
    AdmissibleInterval(Flags),
    /// Property suites; exits with 4 if any fails.
    Check(Flags),
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
}

fn run(command: Command, flags: Flags) -> Result<(), CliError> {
    let raw = match &flags.config {
        Some(p) => RawConfig::load(p)?,
        None if command == Command::Check => RawConfig::default(),
        None => return Err(CliError::Config("--config is required".into())),
    };
    let ov = Overrides {
        out: flags.out,
        seed: flags.seed,
        n: flags.n,
        threads: flags.threads,
        config_stem: flags
            .config
            .as_ref()
            .and_then(|p| p.file_stem())
            .map(|s| s.to_string_lossy().into_owned()),
    };
    let cfg = ExperimentConfig::from_raw(&raw, command, &ov)?;
    let exec = commands::run(&cfg)?;
    print!("{}", exec.report);
    for path in &exec.files {
        eprintln!("wrote {}", path.display());
    }
    exec.into_result().map(|_| ())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, flags) = match cli.command {
        Sub::AlphaCurve(f) => (Command::AlphaCurve, f),
        Sub::RiskSweep(f) => (Command::RiskSweep, f),
        Sub::AdmissibleInterval(f) => (Command::AdmissibleInterval, f),
        Sub::Check(f) => (Command::Check, f),
    };
    match run(command, flags) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
