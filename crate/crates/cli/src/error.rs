use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{command} failed: {source}")]
    Solver {
        command: &'static str,
        #[source]
        source: deformed_spectra::Error,
    },

    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for usage errors, 1 for everything raised while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Solver { .. } | CliError::Io { .. } => 1,
        }
    }
}
