use crate::graph::GraphKind;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SidError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid {kind}: {message} (nodes {nodes:?})")]
    Validation {
        kind: GraphKind,
        message: String,
        nodes: Vec<usize>,
    },

    #[error("dimension mismatch: {left} vs {right} nodes")]
    DimensionMismatch { left: usize, right: usize },

    #[error("expected a {expected} but got a {found}")]
    KindMismatch {
        expected: &'static str,
        found: GraphKind,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("chain component of {size} nodes exceeds the extension cap of {cap}")]
    ExtensionCapExceeded { size: usize, cap: usize },

    #[error("node {node} has {count} undirected neighbours; candidate parent sets are capped at 2^{limit}")]
    CandidateLimit {
        node: usize,
        count: usize,
        limit: usize,
    },

    #[error("oracle refused: {0}")]
    OracleCap(String),

    #[error("numeric failure: {message} (condition number {condition:e})")]
    Numeric { message: String, condition: f64 },
}

pub type Result<T, E = SidError> = std::result::Result<T, E>;
