//! Process-level error taxonomy. Exit codes: 0 success, 1 I/O trouble,
//! 2 usage, 3 validation, 4 numerical failure.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
    Numerical(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}\n\nFor usage run with --help"),
            CliError::Validation(m) => write!(f, "validation: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
