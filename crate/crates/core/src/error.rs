use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("colouring covers {colouring} vertices but the graph has {graph}")]
    SizeMismatch { graph: usize, colouring: usize },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("not a permutation of the vertex set: {0}")]
    InvalidOrdering(String),

    #[error("vertex {vertex} has {available} witnesses but {required} are required")]
    MissingWitnesses {
        vertex: usize,
        available: usize,
        required: usize,
    },

    #[error("no acceptable outcome after {attempts} attempts")]
    RestartsExhausted { attempts: usize },

    #[error("random regular generation failed after {0} attempts")]
    RegularGenerationFailed(usize),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
