use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cauchyprop::config::parse_config;
use cauchyprop::runner::{run_compare, run_scan, run_solve, ScanParam, EXIT_ERROR};

#[derive(Parser)]
#[command(
    name = "cauchyprop",
    about = "Solve Nth-order Cauchy problems d^N u/dt^N = G u with propagator series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate the configured problem and write per-time CSV frames
    Solve {
        #[arg(long)]
        config: String,
        /// Output directory (overrides the config's output_path)
        #[arg(long)]
        out: Option<String>,
    },
    /// Run the propagator against the configured oracle
    Compare {
        #[arg(long)]
        config: String,
        /// Maximum acceptable Linf error
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Sweep a parameter over a doubling ladder and report convergence
    Scan {
        #[arg(long)]
        config: String,
        #[arg(long)]
        param: Param,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Param {
    Terms,
    Substeps,
    GridN,
}

fn run() -> i32 {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { config, out } => fs::read_to_string(&config)
            .map_err(Into::into)
            .and_then(|text| parse_config(&text))
            .and_then(|cfg| run_solve(&cfg, out.as_deref())),
        Command::Compare { config, tol } => fs::read_to_string(&config)
            .map_err(Into::into)
            .and_then(|text| parse_config(&text))
            .and_then(|cfg| run_compare(&cfg, tol)),
        Command::Scan { config, param } => {
            let param = match param {
                Param::Terms => ScanParam::Terms,
                Param::Substeps => ScanParam::Substeps,
                Param::GridN => ScanParam::GridN,
            };
            fs::read_to_string(&config)
                .map_err(Into::into)
                .and_then(|text| run_scan(&text, param))
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run() as u8)
}
