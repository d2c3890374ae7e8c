//! Drivers behind the `mirrorfid` binary: parallel grid evaluation, the
//! `solve`, `map`, `verify` and `simulate` commands, and their JSON and CSV
//! output.

pub mod exec;
pub mod map;
pub mod output;
pub mod simulate;
pub mod solve;
pub mod verify;

use std::path::PathBuf;

use mirror_fidelity::MirrorEnsemble;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<mirror_fidelity::Error> for CliError {
    fn from(e: mirror_fidelity::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Builds the ensemble from CLI units (angle in degrees).
pub fn ensemble_from_degrees(p: f64, theta_deg: f64) -> Result<MirrorEnsemble> {
    Ok(MirrorEnsemble::new(p, theta_deg.to_radians())?)
}
