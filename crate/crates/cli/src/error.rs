use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical conditioning: {0}")]
    Conditioning(polariton_core::Error),
    #[error(transparent)]
    Numerical(polariton_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("validation failed: {0} check(s) did not pass")]
    Validation(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Conditioning(_) => 3,
            CliError::Validation(_) => 1,
            CliError::Numerical(_) | CliError::Io { .. } => 1,
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<polariton_core::Error> for CliError {
    fn from(e: polariton_core::Error) -> Self {
        use polariton_core::Error as E;
        match e {
            E::IllConditioned { .. } | E::DefectiveGenerator { .. } => CliError::Conditioning(e),
            E::InvalidParameter { .. }
            | E::TooManyMolecules { .. }
            | E::ConfigOutOfRange { .. }
            | E::IndexOutOfRange { .. }
            | E::EmptyGrid
            | E::UnorderedTimes
            | E::NegativeTime(_) => CliError::Config(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}
