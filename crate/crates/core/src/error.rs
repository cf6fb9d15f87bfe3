use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed arguments: length mismatches, out-of-range qubits, bad labels.
    #[error("invalid input: {0}")]
    Input(String),

    /// A cost or gradient evaluation produced NaN or infinity.
    #[error("non-finite value {value} {}", slot_context(*.slot))]
    Numeric { slot: Option<usize>, value: f64 },

    /// The request exceeds what the dense backend supports.
    #[error("capability exceeded: {0}")]
    Capability(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn slot_context(slot: Option<usize>) -> String {
    match slot {
        Some(k) => format!("at parameter slot {k}"),
        None => "in cost evaluation".to_string(),
    }
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numeric { .. } => 3,
            _ => 2,
        }
    }
}
