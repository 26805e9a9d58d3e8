use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid dimension {0}: matrices must be at least 2x2")]
    InvalidDimension(usize),

    #[error("invalid generator a[{i},{j}] for dimension {dim}")]
    InvalidGenerator { i: usize, j: usize, dim: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("entry ({i},{j}) is nonzero, so the element is not in the subgroup")]
    NotInSubgroup { i: usize, j: usize },

    #[error("iterated commutator needs span >= 2, got a[{i},{j}]")]
    InvalidSpan { i: usize, j: usize },

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit exceeded: {what}")]
    ResourceLimit {
        what: String,
        /// Largest radius that was fully explored, when the limit hit a BFS.
        partial_radius: Option<u32>,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn resource(what: impl Into<String>) -> Self {
        Error::ResourceLimit {
            what: what.into(),
            partial_radius: None,
        }
    }
}
