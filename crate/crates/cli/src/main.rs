use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use exprk::convergence::{DEFAULT_FLOOR, DEFAULT_STEPS};
use exprk::order_conditions::{DEFAULT_PROBES, DEFAULT_TOLERANCE};
use exprk_cli::{CliResult, Output, StepList, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "exprk", version, about = "Exponential Runge-Kutta methods for stiff semilinear problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Error sweep over step counts, with a fitted convergence slope.
    Converge {
        #[arg(long, default_value = "expRK5s8")]
        method: String,
        #[arg(long, default_value = "heat200")]
        problem: String,
        /// e.g. `8..512` (doublings) or `8,16,32`
        #[arg(long)]
        steps: Option<StepList>,
        #[arg(long, default_value_t = DEFAULT_FLOOR)]
        floor: f64,
        /// CSV destination; printed to stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stiff order-condition residuals on seeded random and structured probes.
    CheckOrder {
        /// method name or tableau file
        #[arg(long, default_value = "expRK5s8")]
        method: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_PROBES)]
        probes: usize,
        /// exit 1 unless the method reaches this order (5 means the weakened verdict)
        #[arg(long)]
        assert_order: Option<u32>,
    },
    /// Print phi_j(z).
    Phi {
        j: u32,
        #[arg(allow_hyphen_values = true)]
        z: f64,
    },
    /// One verbose step from the initial value.
    StepDemo {
        #[arg(long, default_value = "expRK5s8")]
        method: String,
        #[arg(long, default_value = "heat200")]
        problem: String,
        /// step size is T / steps
        #[arg(long, default_value_t = 16)]
        steps: usize,
    },
}

fn run(cli: Cli) -> CliResult<Output> {
    match cli.command {
        Command::Converge { method, problem, steps, floor, out } => {
            let steps = steps.map_or_else(|| DEFAULT_STEPS.to_vec(), |s| s.0);
            exprk_cli::converge(&method, &problem, &steps, floor, out.as_deref())
        }
        Command::CheckOrder { method, seed, tol, probes, assert_order } => {
            exprk_cli::check_order(&method, seed, tol, probes, assert_order)
        }
        Command::Phi { j, z } => Ok(Output { text: format!("{}\n", exprk_cli::phi_value(j, z)), code: 0 }),
        Command::StepDemo { method, problem, steps } => exprk_cli::step_demo(&method, &problem, steps),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
