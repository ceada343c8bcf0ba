use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] dtqw::Error),

    #[error("no nonzero probability in the sequence")]
    NoSignal,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Short machine-readable tag for error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => match e {
                dtqw::Error::DimensionMismatch { .. } => "dimension_mismatch",
                dtqw::Error::Parameter { .. } => "parameter",
                dtqw::Error::MissingUnitary(_) => "missing_unitary",
                dtqw::Error::NotAnEdge { .. } => "not_an_edge",
                dtqw::Error::NotUnitary { .. } => "not_unitary",
                dtqw::Error::ResourceLimit { .. } => "resource_limit",
                dtqw::Error::Branch(_) => "branch",
                dtqw::Error::SingularSeries => "singular_series",
                dtqw::Error::Domain(_) => "domain",
                dtqw::Error::Quadrature { .. } => "quadrature",
            },
            CliError::NoSignal => "no_signal",
            CliError::Parameter(_) => "parameter",
            CliError::Io { .. } => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
