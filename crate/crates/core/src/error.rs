use thiserror::Error;

use crate::graph::VertexId;

/// Errors raised by the dynamic structures when a caller breaks an input promise.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("self-loop on vertex {0} rejected")]
    SelfLoop(VertexId),

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },

    #[error("inserting ({u},{v}) would push vertex {vertex} above the degree bound {delta}")]
    DegreeBound {
        u: VertexId,
        v: VertexId,
        vertex: VertexId,
        delta: u32,
    },

    #[error("value of element {element} would become negative ({value})")]
    NegativeValue { element: usize, value: i64 },

    #[error("edge weight {weight} outside [1, {max}]")]
    WeightOutOfRange { weight: f64, max: f64 },

    #[error("threshold {thr} violates the promise: {reason}")]
    Threshold { thr: usize, reason: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
