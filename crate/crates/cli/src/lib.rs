//! Command implementations behind the `pwlrec` binary.

pub mod commands;
pub mod format;
pub mod spec;

use std::fmt;

/// A failed command. `exit_code` separates bad input (2) from numerical or
/// model failures (3).
#[derive(Debug)]
pub enum CliError {
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    Spec(String),
    Argument(String),
    Io(String),
    Numerical(pwlrec_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse {
                line,
                column,
                message,
            } => {
                write!(f, "ParseError: line {line}, column {column}: {message}")
            }
            CliError::Spec(m) => write!(f, "SpecError: {m}"),
            CliError::Argument(m) => write!(f, "ArgumentError: {m}"),
            CliError::Io(m) => write!(f, "IoError: {m}"),
            CliError::Numerical(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for CliError {}

impl From<pwlrec_core::Error> for CliError {
    fn from(e: pwlrec_core::Error) -> Self {
        CliError::Numerical(e)
    }
}
