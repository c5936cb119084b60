use thiserror::Error;

/// Everything that ends a run early, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or flag combinations (exit 2).
    #[error("usage: {0}")]
    Usage(String),

    /// A numerical or validity failure (exit 1).
    #[error("{0}")]
    Failure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl From<dirac_coulomb::Error> for CliError {
    fn from(e: dirac_coulomb::Error) -> Self {
        use dirac_coulomb::Error as E;
        match e {
            E::InvalidCouplings(_) | E::InvalidChannel(_) | E::InvalidGrid(_) | E::InvalidConfig(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Failure(other.to_string()),
        }
    }
}
