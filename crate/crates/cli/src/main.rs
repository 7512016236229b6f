//! `txunc`: batch front end for measurement-uncertainty budgets.
//!
//! Exit status: 0 on success, 1 for invalid invocation or input, 2 when the
//! computation itself fails (singular model, degenerate sampling).

mod commands;
mod error;
mod input;
mod report;
mod text_format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use commands::{Command, Format, PolicyArg, RunConfig};
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "txunc",
    version,
    about = "Uncertainty budgets for TXRF internal-standard quantification"
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Input file (JSON, or key = value text).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Sensitivity budget policy (calibrate).
    #[arg(long, value_enum)]
    policy: Option<PolicyArg>,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo samples, or simulated flips for coin-demo.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Flips per enumerated sequence (coin-demo).
    #[arg(long)]
    n: Option<u32>,
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        RunConfig {
            command: cli.command,
            input_path: cli.input,
            output_path: cli.output,
            policy: cli.policy,
            seed: cli.seed,
            samples: cli.samples,
            format: cli.format,
            n: cli.n,
        }
    }
}

fn execute(cfg: &RunConfig) -> Result<(), CliError> {
    let report = commands::run(cfg)?;
    let rendered = match cfg.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &cfg.output_path {
        Some(path) => std::fs::write(path, rendered).map_err(|e| {
            CliError::input(
                error::Location {
                    file: path.display().to_string(),
                    ..Default::default()
                },
                format!("cannot write report: {e}"),
            )
        }),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli.into()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
