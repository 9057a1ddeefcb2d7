use thiserror::Error;

/// Errors shared by every domain in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("constraint has a zero linear expression")]
    ZeroExpression,

    #[error("constraint `{0}` is not a bounded difference")]
    NotBdForm(String),

    #[error("constraint `{0}` is not octagonal")]
    NotOctagonalForm(String),

    #[error("strict constraint `{0}` is not allowed in a closed polyhedron")]
    StrictInClosed(String),

    #[error("closure point is not allowed in a closed polyhedron")]
    ClosurePointInClosed,

    #[error("generator system has rays or closure points but no point")]
    NoSupportingPoint,

    #[error("zero vector is not a valid ray")]
    ZeroRay,

    #[error("not a valid witness: {0}")]
    InvalidWitness(String),

    #[error("graph is not closed")]
    NotClosed,

    #[error("shape is unbounded and no bounding box was given")]
    Unbounded,
}

impl Error {
    pub fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse { offset, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
