//! `eurelax` command-line front end.

mod commands;
mod svg;
mod table;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use commands::Artifact;
pub use svg::{log_line_plot, scatter_plot, Series};
pub use table::Table;

/// Largest `n` for brute-force enumeration without `--allow-large`.
pub const COUNT_CAP: usize = eurelax_core::descent::BRUTEFORCE_MAX_N;
/// Largest `n` for pencil-based commands without `--allow-large`.
pub const PENCIL_CAP: usize = 20;
/// Largest `n` for `diff`, which needs `n = 24` for `m = 12`.
pub const DIFF_CAP: usize = 24;

#[derive(Debug, Parser)]
#[command(name = "eurelax", version, about = "Spectrahedral bounds for Eulerian polynomial roots")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Enclosure precision in bits.
    #[arg(long, env = "EURELAX_PREC", default_value_t = eurelax_core::DEFAULT_PREC, global = true)]
    pub prec: u32,
    /// Lift the desk-scale caps on n.
    #[arg(long, global = true)]
    pub allow_large: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Old,
    New,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact descent-top counts: brute force, both inclusion-exclusion forms, closed forms.
    Counts {
        #[arg(long)]
        n: usize,
    },
    /// L-form table, closed forms beside truncation values.
    Lform {
        #[arg(long)]
        n: usize,
    },
    /// Pencil matrices and the PSD certificate of A0.
    Pencil {
        #[arg(long)]
        n: usize,
    },
    /// Bound reports over a range of n.
    Bounds {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Both)]
        kind: KindArg,
        /// `paper`, `optimal`, or a rational value such as `-3/2`.
        #[arg(long, default_value = "paper")]
        y: String,
    },
    /// Extreme-root enclosures of A_n.
    Roots {
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Separation mult - un with ratio diagnostics.
    Diff {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Normalized boundary kernel vectors.
    Eigvec {
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
    },
}

/// Error reported as JSON on stderr.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            kind: "usage",
            message: message.into(),
        }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        CliError {
            kind: "precondition",
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl From<eurelax_core::Error> for CliError {
    fn from(e: eurelax_core::Error) -> Self {
        CliError {
            kind: "domain",
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            kind: "io",
            message: e.to_string(),
        }
    }
}

/// Runs a parsed command and returns the rendered bytes.
pub fn run(cli: &Cli) -> Result<Vec<u8>, CliError> {
    if cli.prec < eurelax_core::spectra::MIN_PREC {
        return Err(eurelax_core::Error::PrecisionTooLow(cli.prec).into());
    }
    let artifact = commands::execute(cli)?;
    artifact.render(cli.format)
}

/// Parses arguments, runs, writes output, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            eprintln!("{}", CliError::usage(e.to_string().trim_end()).to_json());
            return 2;
        }
    };
    let result = run(&cli).and_then(|bytes| {
        match &cli.out {
            Some(path) => fs::write(path, &bytes)?,
            None => std::io::stdout().write_all(&bytes)?,
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            1
        }
    }
}
