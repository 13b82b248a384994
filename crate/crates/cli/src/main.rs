//! `mmescheck` — verifies a five-qubit entangled state, its sixteen Pauli
//! correlations, the hidden-variable no-go scans, the measurement
//! compatibility analysis, and the sampling protocol.
//!
//! Exit codes: 0 all checks pass (or SAT where SAT is expected), 1 a
//! physics/no-go check failed, 2 input error, 3 internal consistency error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CliError, CommandOutput, ModelArg, StateArg, EXIT_CHECK_FAILED, EXIT_PASS};

#[derive(Parser)]
#[command(name = "mmescheck", version, about = "Five-qubit entangled-state and hidden-variable no-go verifier")]
struct Cli {
    /// Emit the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the five-qubit state; check norm, amplitudes and purities.
    VerifyState {
        /// Table file (accepted for interface uniformity; not used here).
        #[arg(long)]
        table: Option<PathBuf>,
        /// Fault-injection hook: scale one amplitude before checking.
        #[arg(long, hide = true)]
        corrupt_amplitude: Option<usize>,
    },
    /// Compute every table row's expectation on the state.
    VerifyCorrelations {
        /// Correlation table file; defaults to the embedded canonical one.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Absolute tolerance for each expectation.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Compile a hidden-variable model and decide satisfiability.
    Nogo {
        /// Locality structure of the model.
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Isolated party label (required for --model block).
        #[arg(long)]
        isolated: Option<String>,
        /// Correlation table file; defaults to the embedded canonical one.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Run the block-nonlocal scan for every isolated-party choice.
    ScanAll {
        /// Correlation table file; defaults to the embedded canonical one.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Partition the table into the minimum number of joint settings.
    Compat {
        /// Correlation table file; defaults to the embedded canonical one.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Simulate the sampling protocol with Born-rule outcomes.
    Simulate {
        /// Number of experimental runs.
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        runs: u64,
        /// Seed for the reproducible random stream.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Correlation table file; defaults to the embedded canonical one.
        #[arg(long)]
        table: Option<PathBuf>,
        /// State to sample from.
        #[arg(long, value_enum, default_value_t = StateArg::Mmes)]
        state: StateArg,
    },
}

fn run(command: &Command) -> Result<CommandOutput, CliError> {
    match command {
        Command::VerifyState {
            table,
            corrupt_amplitude,
        } => commands::verify_state(table.as_deref(), *corrupt_amplitude),
        Command::VerifyCorrelations { table, tolerance } => {
            commands::verify_correlations(table.as_deref(), *tolerance)
        }
        Command::Nogo {
            model,
            isolated,
            table,
        } => commands::nogo(*model, isolated.as_deref(), table.as_deref()),
        Command::ScanAll { table } => commands::scan_all(table.as_deref()),
        Command::Compat { table } => commands::compat(table.as_deref()),
        Command::Simulate {
            runs,
            seed,
            table,
            state,
        } => commands::simulate(*runs, *seed, table.as_deref(), *state),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(output) => {
            print!("{}", if cli.json { output.json } else { output.text });
            ExitCode::from(if output.pass { EXIT_PASS } else { EXIT_CHECK_FAILED })
        }
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code())
        }
    }
}
