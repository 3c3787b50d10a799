//! `sgedr` command-line tool.
//!
//! Exit codes: 0 success, 2 validation failure, 3 I/O error, 4 bad arguments.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

mod commands;
pub mod table;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_USAGE: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Io { .. } => EXIT_IO,
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

impl From<sgedr::Error> for CliError {
    fn from(e: sgedr::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Inclusive range written `MIN:MAX`, or a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span {
    pub min: f64,
    pub max: f64,
}

impl std::str::FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
        match s.split_once(':') {
            Some((a, b)) => {
                let (min, max) = (parse(a)?, parse(b)?);
                if max < min {
                    return Err(format!("range `{s}` has max below min"));
                }
                Ok(Span { min, max })
            }
            None => {
                let v = parse(s)?;
                Ok(Span { min: v, max: v })
            }
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sgedr", version, about = "Error and disturbance of spin-1/2 measurements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the CNOT probe angle over [0, π/2].
    Lw {
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep Stern–Gerlach parameters (ħ = m = Δt = μ = 1) and check the
    /// achievable region.
    Region {
        /// Points per axis.
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value = "0.1:4")]
        re_lambda: Span,
        #[arg(long, default_value = "-4:4", allow_hyphen_values = true)]
        im_lambda: Span,
        #[arg(long, default_value = "0:1.5", allow_hyphen_values = true)]
        b0: Span,
        #[arg(long, default_value = "0:3")]
        tau: Span,
        /// Field gradient.
        #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
        b1: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reproduce the 1922 estimate and cross-check it against the published
    /// intermediates.
    Experiment {
        /// `key = value` file; Table 1 defaults when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        k_min: Option<f64>,
        #[arg(long)]
        k_max: Option<f64>,
        #[arg(long)]
        k_steps: Option<usize>,
        /// JSON report destination; printed after the table when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the grid simulation with the closed forms on the
    /// dimensionless test set.
    Validate {
        #[arg(long, default_value_t = 4096)]
        grid_n: usize,
        /// Magnet steps; the phase rule minimum when omitted.
        #[arg(long)]
        dt_steps: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Optimal free-flight time for one probe (ħ = m = Δt = μ = 1).
    TauOpt {
        #[arg(long, default_value_t = 0.3)]
        re_lambda: f64,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        im_lambda: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        b1: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        b0: f64,
        /// Scan points.
        #[arg(long, default_value_t = 201)]
        steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Parses `args` (program name first) and runs the command, writing results
/// to `stdout` and diagnostics to standard error.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match commands::dispatch(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
