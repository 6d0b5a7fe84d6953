use thiserror::Error;

/// A command failure with its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid flags or parameters (exit code 2).
    #[error("configuration error: {0}")]
    Config(String),
    /// The requested computation is over the budget (exit code 3).
    #[error("budget refusal: {0}")]
    Budget(String),
    /// A check ran and failed (exit code 1).
    #[error("check failed: {0}")]
    Check(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<stochmat_core::Error> for CliError {
    fn from(e: stochmat_core::Error) -> Self {
        use stochmat_core::Error as E;
        match e {
            E::Budget { .. } => CliError::Budget(e.to_string()),
            E::Checksum { .. } => CliError::Check(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<stochmat_mc::Error> for CliError {
    fn from(e: stochmat_mc::Error) -> Self {
        use stochmat_mc::Error as E;
        match e {
            E::InvalidSpec(_) | E::InsufficientData(_) => CliError::Config(e.to_string()),
            E::NotUnitary(_) | E::Solver(_) => CliError::Check(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
