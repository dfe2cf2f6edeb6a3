use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use multiport_cli::{cmd_fit, cmd_sweep, run_verify, simulate, CliError, RunConfig};

/// Postselected multiphoton states of Bell multiport beam splitters.
#[derive(Parser)]
#[command(name = "multiport", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Postselect the output of one configuration and print a JSON report.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// W-state success probability for a range of port counts, as CSV.
    Sweep {
        #[arg(long, default_value_t = 2)]
        min: usize,
        #[arg(long, default_value_t = 18)]
        max: usize,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit ln P = a - b·N to a sweep CSV and print the result as JSON.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Run the self-check suite for every port count up to --max-n.
    Verify {
        #[arg(long)]
        max_n: usize,
        /// Also check the unitary and input of this configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let mut stdout = io::stdout().lock();
    match cli.command {
        Command::Simulate { config } => {
            let report = simulate(&RunConfig::from_path(&config)?)?;
            print_json(&mut stdout, &report)?;
            Ok(true)
        }
        Command::Sweep { min, max, out } => {
            cmd_sweep(min, max, out.as_deref(), &mut stdout)?;
            Ok(true)
        }
        Command::Fit { input } => {
            print_json(&mut stdout, &cmd_fit(&input)?)?;
            Ok(true)
        }
        Command::Verify {
            max_n,
            config,
            seed,
        } => {
            let config = config.as_deref().map(RunConfig::from_path).transpose()?;
            let report = run_verify(max_n, config.as_ref(), seed)?;
            writeln!(stdout, "{report}").map_err(stdout_error)?;
            Ok(report.passed())
        }
    }
}

fn stdout_error(source: io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source,
    }
}

fn print_json<T: serde::Serialize>(out: &mut impl Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| stdout_error(e.into()))?;
    writeln!(out).map_err(stdout_error)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
