use thiserror::Error;

use crate::interchange::NodeId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("no unitary configured for site {0}")]
    MissingUnitary(NodeId),

    #[error("pair ({prev}, {current}) is not an edge of the walk graph")]
    NotAnEdge { prev: NodeId, current: NodeId },

    #[error("reduced matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("state size {size} exceeds the configured cap {cap}")]
    ResourceLimit { size: usize, cap: usize },

    #[error("principal square root needs constant term 1, found {0}")]
    Branch(String),

    #[error("series with zero constant term has no inverse")]
    SingularSeries,

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "quadrature did not converge: estimate {estimate:e}, error {error:e}, \
         {evaluations} evaluations ({reason})"
    )]
    Quadrature {
        estimate: f64,
        error: f64,
        evaluations: usize,
        reason: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parameter(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}
