use std::fmt;

use txunc_core::montecarlo::McError;
use txunc_core::propagation::PropagationError;
use txunc_core::txrf::TxrfError;

/// Where in an input file a problem was found.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Location {
    pub file: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub key: Option<String>,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.file)?;
        if let Some(line) = self.line {
            write!(f, ":{line}")?;
            if let Some(col) = self.column {
                write!(f, ":{col}")?;
            }
        }
        if let Some(key) = &self.key {
            write!(f, ": {key}")?;
        }
        Ok(())
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation, unreadable or malformed input. Exit status 1.
    Input { at: Location, message: String },
    /// The inputs were valid but the computation failed. Exit status 2.
    Computation(String),
}

impl CliError {
    pub fn input(at: Location, message: impl Into<String>) -> Self {
        CliError::Input {
            at,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Input {
            at: Location {
                file: "<command line>".into(),
                ..Location::default()
            },
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } => 1,
            CliError::Computation(_) => 2,
        }
    }

    /// Classifies an engine error: anything about the shape of the inputs is
    /// an input error at `at`; singularities and sampling failures are
    /// computation errors.
    pub fn from_propagation(e: PropagationError, at: Location) -> Self {
        match e {
            PropagationError::DivisionByZero | PropagationError::NonFiniteResult => {
                CliError::Computation(e.to_string())
            }
            _ => CliError::input(at, e.to_string()),
        }
    }

    pub fn from_txrf(e: TxrfError, at: Location) -> Self {
        match e {
            TxrfError::Propagation(p) => Self::from_propagation(p, at),
            other => CliError::input(at, other.to_string()),
        }
    }

    pub fn from_mc(e: McError, at: Location) -> Self {
        match e {
            McError::Propagation(p) => Self::from_propagation(p, at),
            McError::InvalidConfig(_) => CliError::usage(e.to_string()),
            McError::DegenerateSampling { .. } => CliError::Computation(e.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input { at, message } => write!(f, "{at}: {message}"),
            CliError::Computation(message) => write!(f, "computation error: {message}"),
        }
    }
}

impl std::error::Error for CliError {}
