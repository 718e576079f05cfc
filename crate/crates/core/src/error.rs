use thiserror::Error;

use crate::drawing::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("graph is not simple: {0}")]
    NotSimple(String),

    #[error("vertex set is not a vertex cover: edge {0}-{1} is uncovered")]
    NotACover(usize, usize),

    #[error("no vertex cover of size at most {k_max}")]
    CoverExceeded { k_max: usize },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("invalid drawing: {0}")]
    InvalidDrawing(Violation),

    #[error("verification failed: {0}")]
    Mismatch(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
