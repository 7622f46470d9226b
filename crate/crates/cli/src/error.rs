use std::path::PathBuf;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] bowtie_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl CliError {
    /// `3` for points or parameters outside the numeric domain, `2` for
    /// everything else (bad configuration, I/O).
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(bowtie_core::Error::Domain(_)) => EXIT_DOMAIN,
            _ => EXIT_CONFIG,
        }
    }
}
