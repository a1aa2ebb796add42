//! Command-line front end for `anyon_core`: model verification, density
//! matrix evolution and decay sweeps.
//!
//! Exit codes: 0 success, 1 a requested check failed, 2 usage or input error.

pub mod args;
mod commands;
pub mod parse;

use std::io::Write;
use std::path::Path;

use anyon_core::interferometry::InterferometryError;
use anyon_core::model::{builtin_model, load_model, AnyonModel, ModelError, DEFAULT_TOLERANCE};
use anyon_core::oracle::OracleError;
use thiserror::Error;

pub use args::Cli;
pub use commands::{cmd_run, cmd_sweep, cmd_verify};

pub const TOLERANCE_VAR: &str = "ANYON_TOL";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Interferometry(#[from] InterferometryError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("output failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed(_) => 1,
            _ => 2,
        }
    }
}

/// Tolerance from `ANYON_TOL`, or the library default.
pub fn tolerance() -> Result<f64, CliError> {
    match std::env::var(TOLERANCE_VAR) {
        Err(_) => Ok(DEFAULT_TOLERANCE),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
            _ => Err(CliError::Usage(format!(
                "{TOLERANCE_VAR}='{s}' is not a positive number"
            ))),
        },
    }
}

/// A built-in name, or a path to a model file.
pub fn load_model_source(source: &str) -> Result<AnyonModel, CliError> {
    let path = Path::new(source);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {source}: {e}")))?;
        return Ok(load_model(&text)?);
    }
    match builtin_model(source) {
        Ok(m) => Ok(m),
        Err(ModelError::UnknownBuiltin(_)) if source.contains(['/', '\\', '.']) => {
            Err(CliError::Usage(format!("model file {source} not found")))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn execute(cli: Cli, out: &mut impl Write) -> Result<(), CliError> {
    let tol = tolerance()?;
    match cli.command {
        args::Command::Verify(a) => cmd_verify(&a, tol, out),
        args::Command::Run(a) => cmd_run(&a, tol, out),
        args::Command::Sweep(a) => cmd_sweep(&a, out),
    }
}
