use std::fmt;

use crate::ring::RingSpec;

/// A single failed identity found while validating a complex.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Issue {
    pub degree: i64,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree {}: {}", self.degree, self.message)
    }
}

fn join_issues(issues: &[Issue]) -> String {
    issues.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(RingSpec, RingSpec),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("ill-defined homomorphism: {0}")]
    IllDefined(String),
    #[error("invalid complex: {}", join_issues(.0))]
    InvalidComplex(Vec<Issue>),
    #[error("invalid short exact sequence: {0}")]
    InvalidSes(String),
    #[error("module is not finite: {0}")]
    NotFinite(String),
    #[error("module in degree {degree} is not projective")]
    NonProjective { degree: i64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("{0}")]
    Refused(String),
    #[error("{0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}

pub(crate) fn same_ring(a: &RingSpec, b: &RingSpec) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::RingMismatch(a.clone(), b.clone()))
    }
}
