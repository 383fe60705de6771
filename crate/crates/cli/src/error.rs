use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    Numerical(String),

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) | CliError::Certification(_) => 2,
        }
    }
}

impl From<secrecy_core::Error> for CliError {
    fn from(e: secrecy_core::Error) -> Self {
        use secrecy_core::Error as E;
        match e {
            E::PrecisionLoss { .. } | E::NonConvergence { .. } | E::DegenerateDraw { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}
