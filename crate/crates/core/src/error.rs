use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T, E = CncError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CncError {
    #[error("unknown vertex {vertex} (graph has {vertex_count} vertices)")]
    UnknownVertex { vertex: Vertex, vertex_count: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),

    #[error("exploration cap exceeded: {required} candidates required, cap is {cap}")]
    CapExceeded { required: u128, cap: u128 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid decomposition: {0}")]
    Structural(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("refused: {0}")]
    Refused(String),
}

impl CncError {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        CncError::Parse { line, message: message.into() }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        CncError::InvalidInput(message.into())
    }
}
