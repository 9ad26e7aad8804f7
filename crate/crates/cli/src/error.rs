use std::path::PathBuf;

/// Failures of a CLI run, each with its own exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("golden-value mismatch: {0}")]
    Golden(String),
}

impl CliError {
    pub const EXIT_CONFIG: i32 = 2;
    pub const EXIT_IO: i32 = 3;
    pub const EXIT_GOLDEN: i32 = 4;

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => Self::EXIT_CONFIG,
            CliError::Io { .. } => Self::EXIT_IO,
            CliError::Golden(_) => Self::EXIT_GOLDEN,
        }
    }
}

impl From<hawkdove::Error> for CliError {
    fn from(e: hawkdove::Error) -> Self {
        CliError::Config(e.to_string())
    }
}
