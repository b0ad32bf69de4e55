use thiserror::Error;

use crate::dynamics::GossipRun;
use crate::lattice::Elem;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a partial order: {0}")]
    NotPartialOrder(String),

    #[error("not a lattice: elements {a} and {b} have no unique {bound}")]
    NotALattice {
        a: Elem,
        b: Elem,
        bound: &'static str,
    },

    #[error("{what} too large: {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("lattice is not distributive")]
    NotDistributive,

    #[error("map is not monotone: {a} <= {b} but images are not ordered")]
    NotMonotone { a: Elem, b: Elem },

    #[error("map does not preserve joins at ({a}, {b})")]
    NotJoinPreserving { a: Elem, b: Elem },

    #[error("map does not preserve meets at ({a}, {b})")]
    NotMeetPreserving { a: Elem, b: Elem },

    #[error("maps do not form a Galois connection (witness x={x}, y={y})")]
    NotAdjoint { x: Elem, y: Elem },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("restriction at node {node} on edge {edge} is not a Galois connection (witness x={x}, y={y})")]
    InvalidConnection {
        node: usize,
        edge: usize,
        x: Elem,
        y: Elem,
    },

    #[error("not a path: nodes {0} and {1} are not adjacent")]
    NotAPath(usize, usize),

    #[error("gossip did not converge within {} steps", .0.steps)]
    NotConverged(Box<GossipRun>),

    #[error("metric undefined on edge {edge}: {reason}")]
    MetricUndefined { edge: usize, reason: String },

    #[error("unknown atom `{0}`")]
    UnknownAtom(String),

    #[error("agent {agent} out of range (model has {agents} agents)")]
    BadAgent { agent: usize, agents: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid spec: {0}")]
    Spec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn too_large(what: &'static str, size: impl Into<u128>, limit: impl Into<u128>) -> Self {
        Error::TooLarge {
            what,
            size: size.into(),
            limit: limit.into(),
        }
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::ShapeMismatch(msg.into())
    }
}
