use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qlbm::config::RunConfig;
use qlbm::qmem::{nonzero_fraction_report, MeasurementMode};
use qlbm::run::{run, RunOptions, COMPARE_TOLERANCE};

#[derive(Parser)]
#[command(
    name = "qlbm",
    version,
    about = "Quantum lattice-Boltzmann bounce-back and momentum-exchange simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configured simulation and write per-step forces as CSV.
    Run {
        config: PathBuf,
        /// Run the classical reference in lockstep and record deviations.
        #[arg(long)]
        compare: bool,
        /// Print and write per-phase gate counts.
        #[arg(long)]
        report_gates: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Trace every gate with its wall time.
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Observable,
    Ancilla,
    Shots,
}

impl From<Mode> for MeasurementMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Observable => MeasurementMode::Observable,
            Mode::Ancilla => MeasurementMode::Ancilla,
            Mode::Shots => MeasurementMode::Shots,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run {
        config,
        compare,
        report_gates,
        out,
        seed,
        shots,
        mode,
        verbose,
    } = cli.command;
    let level = if verbose { "debug" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let mut cfg = match RunConfig::from_file(&config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}: {e}", config.display());
            return ExitCode::FAILURE;
        }
    };
    let options = RunOptions {
        compare,
        report_gates,
        out,
        seed,
        shots,
        mode: mode.map(Into::into),
    };
    options.apply(&mut cfg);

    match run(&cfg, report_gates) {
        Ok(summary) => {
            if let Some(report) = &summary.gate_report {
                print!("{report}");
                if let Ok(g) = cfg.geometry() {
                    let layout = qlbm::engine::RegisterLayout::new(g.lattice());
                    println!("{}", nonzero_fraction_report(&g, &layout));
                }
            }
            println!("wrote {}", summary.forces_csv.display());
            if !summary.passed() {
                eprintln!(
                    "quantum and classical fields differ by {:e} (> {COMPARE_TOLERANCE:e})",
                    summary.max_deviation().unwrap_or(f64::NAN)
                );
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
