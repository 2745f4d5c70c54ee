use thiserror::Error;

/// Failures of a CLI run, each mapped to a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] reskit_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use reskit_core::Error as E;
        match self {
            Self::Config(_) => 2,
            Self::Core(e) => match e {
                E::InvalidConfig(_) => 2,
                E::Domain { .. } | E::FrequencyOutOfRange { .. } | E::ChartExit { .. } => 3,
                E::Precondition(_) | E::NoSaddle | E::Topology(_) | E::Degenerate(_) => 4,
                E::NonConvergence(_) => 1,
            },
            Self::Io { .. } => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
