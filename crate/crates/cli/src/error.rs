use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{failed} of {total} scan points failed")]
    Scan { failed: usize, total: usize, code: u8 },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numeric(_) => 2,
            CliError::Scan { code, .. } => *code,
            _ => 1,
        }
    }
}

impl From<cvqe::Error> for CliError {
    fn from(e: cvqe::Error) -> Self {
        match e {
            cvqe::Error::NotConverged { .. } | cvqe::Error::NonFinite(_) => CliError::Numeric(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
