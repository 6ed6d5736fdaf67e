use thiserror::Error;

use crate::complex::Simplex;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    InvalidInput,
    Verification,
    Resource,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("{what} out of range: {value} (allowed {min}..={max})")]
    Range {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("vertex id collision on {0}")]
    IdCollision(usize),
    #[error("simplex {0} is not in the complex")]
    MissingSimplex(Simplex),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("subcomplex is not full: {0} has all vertices in it but is missing")]
    NotFull(Simplex),
    #[error("codimension {codim} is below 2")]
    Codimension { codim: i64 },
    #[error("complex is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("relator {relator} is not sent to the identity")]
    RelatorViolation { relator: usize },
    #[error("cocycle condition fails on {0}")]
    CocycleViolation(Simplex),
    #[error("cochain is not closed: coboundary is nonzero on {0}")]
    NotClosed(Simplex),
    #[error("triangle does not commute at vertex {0}")]
    Composition(usize),
    #[error("transversality not reached after {attempts} attempts; cells {cells:?} meet in dimension {dimension}")]
    Degeneracy {
        attempts: usize,
        cells: Vec<Simplex>,
        dimension: i64,
    },
    #[error("realization mismatch: {0}")]
    Realization(String),
    #[error("operation is only defined for {0}")]
    Scope(&'static str),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid local system: {0}")]
    LocalSystem(String),
    #[error("family does not cover the unbranched part")]
    NotCovering,
    #[error("budget exhausted: {what} exceeded {bound}")]
    Budget { what: &'static str, bound: u64 },
    #[error("consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Budget { .. } => ErrorKind::Resource,
            Error::Degeneracy { .. } | Error::Consistency(_) => ErrorKind::Verification,
            _ => ErrorKind::InvalidInput,
        }
    }
}
