//! Front end of the `shockreg` command: builds a [`RunSpec`], runs one
//! subcommand and writes its files into the output directory.

mod commands;
pub mod spec;

use std::fmt;
use std::path::PathBuf;

pub use commands::run;
pub use spec::{Command, Format, Kind, Overrides, RunSpec};

#[derive(Debug)]
pub enum CliError {
    /// Bad settings.
    Usage(String),
    /// The built configuration failed its structural checks.
    Rejected(String),
    Core(shockreg::Error),
}

impl CliError {
    /// 2 for bad input or failed checks, 3 for numerical failures, 4 for
    /// I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Rejected(_) => 2,
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Core(shockreg::Error::Numerical(_)) => 3,
            CliError::Core(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Rejected(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<shockreg::Error> for CliError {
    fn from(e: shockreg::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(shockreg::Error::Io(e))
    }
}

/// What a run produced.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
}
