use thiserror::Error;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("vertex count mismatch: {left} vs {right}")]
    VertexCountMismatch { left: usize, right: usize },

    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("pattern has {got} vertices, cap is {cap}")]
    PatternTooLarge { got: usize, cap: usize },

    #[error("pattern has no edges")]
    Edgeless,

    #[error("{what} exceeds cap ({got} > {cap})")]
    CapExceeded { what: &'static str, got: usize, cap: usize },

    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no result: {0}")]
    Empty(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl LabError {
    pub fn param(msg: impl Into<String>) -> Self {
        LabError::InvalidParameter(msg.into())
    }

    pub fn pre(msg: impl Into<String>) -> Self {
        LabError::Precondition(msg.into())
    }
}
