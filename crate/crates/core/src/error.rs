use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("inconsistent embedding: {0}")]
    Embedding(String),

    #[error("invalid face partition: {0}")]
    Partition(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(
        "edge {u}-{v} is short (common neighbours {common:?}); contracting it \
         would create under-count |E'| = 3|V'| - 7"
    )]
    ShortEdge {
        u: Vertex,
        v: Vertex,
        common: Vec<Vertex>,
    },

    #[error("polyhedron is not well-designed: {0}")]
    NotWellDesigned(String),

    #[error("certificate verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        Error::Precondition(message.into())
    }
}
