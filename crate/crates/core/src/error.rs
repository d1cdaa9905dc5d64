use thiserror::Error;

use crate::axiom_similarity::SimilarityError;
use crate::hierarchy::HierarchyError;
use crate::learner::LearnerError;
use crate::rdf_store::RdfError;
use crate::scorer::ScoreError;

/// Coarse classification used to pick a process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Numeric,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("rdf_store: {0}")]
    Rdf(#[from] RdfError),
    #[error("hierarchy: {0}")]
    Hierarchy(#[from] HierarchyError),
    #[error("scorer: {0}")]
    Score(#[from] ScoreError),
    #[error("axiom_similarity: {0}")]
    Similarity(#[from] SimilarityError),
    #[error("learner: {0}")]
    Learner(#[from] LearnerError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Format(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Config(_) => ErrorKind::Config,
            Error::Learner(e) if e.is_numeric() => ErrorKind::Numeric,
            Error::Learner(e) if e.is_config() => ErrorKind::Config,
            Error::Score(ScoreError::OutOfRange { .. }) => ErrorKind::Numeric,
            Error::Similarity(SimilarityError::InvalidFloor(_)) => ErrorKind::Config,
            _ => ErrorKind::Data,
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(format!("json: {e}"))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
