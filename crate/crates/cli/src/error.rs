use std::fmt;

use chlab_core::Error as CoreError;

/// Failure classes, each with its own process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or arguments (exit 2).
    Validation(String),
    /// The parametric map could not be inverted (exit 3).
    Inversion(String),
    /// A verification identity exceeded its threshold (exit 4).
    Identity(String),
    /// The convergence sweep missed its criteria (exit 5).
    Convergence(String),
    /// Anything else, I/O included (exit 1).
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Inversion(_) => 3,
            CliError::Identity(_) => 4,
            CliError::Convergence(_) => 5,
            CliError::Other(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, msg) = match self {
            CliError::Validation(m) => ("invalid configuration", m),
            CliError::Inversion(m) => ("inversion failure", m),
            CliError::Identity(m) => ("verification failure", m),
            CliError::Convergence(m) => ("convergence criteria not met", m),
            CliError::Other(m) => ("error", m),
        };
        write!(f, "{kind}: {msg}")
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Inversion { .. } => CliError::Inversion(e.to_string()),
            CoreError::Violation { .. } => CliError::Identity(e.to_string()),
            CoreError::InvalidSpec(_) | CoreError::Degenerate(_) | CoreError::Constraint { .. } | CoreError::Domain(_) => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Other(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
