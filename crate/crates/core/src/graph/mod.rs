//! Embedded typed property graph.
//!
//! Nodes are keyed `<Collection>/<key>`, edges are unique per
//! `(kind, from, to)`. The store is mutable during a build phase and then
//! frozen; a frozen store is shared read-only between request handlers.

mod dump;
mod id;
pub mod schema;
mod store;
pub mod temporal;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dump::{dump, dump_to_string, load, load_from_str, DumpCounts, DumpHeader, DUMP_FORMAT, DUMP_VERSION};
pub use id::{author_key, encode_key, Direction, EdgeKind, NodeId, NodeKind};
pub use store::GraphStore;

/// Flat attribute record attached to nodes and edges.
pub type Attrs = serde_json::Map<String, serde_json::Value>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: NodeId,
    pub kind: NodeKind,
    pub attrs: Attrs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub id: String,
    pub kind: EdgeKind,
    pub from: NodeId,
    pub to: NodeId,
    pub attrs: Attrs,
}

impl GraphEdge {
    pub fn make_id(kind: EdgeKind, from: &NodeId, to: &NodeId) -> String {
        format!("{kind}:{from}->{to}")
    }

    pub fn provenance(&self) -> Option<&str> {
        self.attrs.get(schema::PROVENANCE).and_then(|v| v.as_str())
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("duplicate node {0}")]
    DuplicateNode(NodeId),
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("invalid node id: {0}")]
    InvalidNodeId(String),
    #[error("missing endpoint {0}")]
    MissingEndpoint(NodeId),
    #[error("illegal endpoint kinds for {kind}: {from} -> {to}")]
    IllegalEndpointKind { kind: EdgeKind, from: NodeKind, to: NodeKind },
    #[error("missing node {0}")]
    MissingNode(NodeId),
    #[error("node {0} still has incident edges")]
    NodeInUse(NodeId),
    #[error("graph is frozen; mutations are only allowed during the build phase")]
    Frozen,
    #[error("corrupt dump at line {line}: {reason}")]
    CorruptDump { line: usize, reason: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
