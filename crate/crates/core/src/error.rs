//! Error type shared by every module.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = EpcaError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum EpcaError {
    /// Bad arguments: dimension mismatch, non-finite values, invalid configuration.
    #[error("invalid input: {0}")]
    Input(String),

    /// The ambient point has no unique nearest point on the embedded manifold,
    /// so the projection (and hence the extrinsic mean) is undefined.
    #[error("focal point: {0}")]
    FocalPoint(String),

    /// Principal curve requested for an eigenvalue that is not simple.
    #[error("component {component} belongs to an eigenvalue of multiplicity {multiplicity}; use the principal subset instead")]
    Multiplicity { component: usize, multiplicity: usize },

    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl EpcaError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        EpcaError::Input(msg.into())
    }

    pub(crate) fn focal(msg: impl Into<String>) -> Self {
        EpcaError::FocalPoint(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        EpcaError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            EpcaError::Input(_) | EpcaError::Parse { .. } | EpcaError::Io { .. } => 1,
            EpcaError::FocalPoint(_) | EpcaError::Multiplicity { .. } => 2,
        }
    }
}
