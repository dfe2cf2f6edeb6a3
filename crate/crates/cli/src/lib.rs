//! Library side of the `multiport` command-line tool: config ingestion,
//! report assembly and the self-verification suite. `main.rs` only parses
//! arguments and maps errors to exit codes.

pub mod config;
pub mod report;
pub mod verify;

use std::fs;
use std::io::Write;
use std::path::Path;

use multiport::{fit_exponential, sweep, sweep_w_success, FitResult};
use thiserror::Error;

pub use config::RunConfig;
pub use report::{simulate, SimulateReport};
pub use verify::{run_verify, VerifyReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] multiport::Error),
}

impl CliError {
    /// 1 is reserved for failed verification checks, which are reported, not
    /// raised.
    pub fn exit_code(&self) -> u8 {
        2
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Sweep CSV to `out`, or to `stdout` when no path is given.
pub fn cmd_sweep(
    n_min: usize,
    n_max: usize,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<()> {
    let records = sweep_w_success(n_min, n_max)?;
    match out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
            sweep::write_csv(&records, file)?;
        }
        None => sweep::write_csv(&records, stdout)?,
    }
    Ok(())
}

pub fn cmd_fit(input: &Path) -> Result<FitResult> {
    let file = fs::File::open(input).map_err(|e| CliError::io(input, e))?;
    let records =
        sweep::read_csv(file).map_err(|e| CliError::Parse(format!("{}: {e}", input.display())))?;
    Ok(fit_exponential(&records)?)
}
