//! Command-line front end for the `parakahler` library: immersion specs,
//! expression parsing, CSV emission and the verification suites.

pub mod commands;
pub mod csv;
pub mod expr;
pub mod spec;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid spec: {0}")]
    Spec(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Spec(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<parakahler::Error> for CliError {
    fn from(e: parakahler::Error) -> Self {
        use parakahler::Error as E;
        match e {
            E::NullValue { .. }
            | E::DegenerateMetric(_)
            | E::StepFailure { .. }
            | E::IntegrandSingular(_)
            | E::BoundaryPoint { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Spec(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
