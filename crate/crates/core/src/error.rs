use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("objects live on different vertex universes")]
    UniverseMismatch,

    #[error("invalid universe: {0}")]
    InvalidUniverse(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    #[error("invalid class: {0}")]
    InvalidClass(String),

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("vertex {vertex} outside universe of size {size}")]
    VertexOutOfRange { vertex: usize, size: usize },

    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("enumeration of {required} tuples exceeds budget of {budget}; {hint}")]
    BudgetExceeded {
        required: u128,
        budget: u128,
        hint: &'static str,
    },

    #[error("universe of size {size} exceeds cap {cap}")]
    UniverseTooLarge { size: usize, cap: usize },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
