//! JSON Lines persistence.
//!
//! Line 1 is a header `{format, version, counts}`; then one record per node
//! and per edge, each group sorted by id. Output is byte-identical for equal
//! stores.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Attrs, EdgeKind, GraphEdge, GraphError, GraphStore, NodeId, NodeKind};

pub const DUMP_FORMAT: &str = "vesa-graph";
pub const DUMP_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumpCounts {
    pub nodes: usize,
    pub edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumpHeader {
    pub format: String,
    pub version: u32,
    pub counts: DumpCounts,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Record {
    Node {
        id: NodeId,
        node_kind: NodeKind,
        attrs: Attrs,
    },
    Edge {
        id: String,
        edge_kind: EdgeKind,
        from: NodeId,
        to: NodeId,
        attrs: Attrs,
    },
}

fn write_dump<W: Write>(store: &GraphStore, mut out: W) -> std::io::Result<()> {
    let header = DumpHeader {
        format: DUMP_FORMAT.to_owned(),
        version: DUMP_VERSION,
        counts: DumpCounts { nodes: store.node_count(), edges: store.edge_count() },
    };
    serde_json::to_writer(&mut out, &header)?;
    out.write_all(b"\n")?;
    for node in store.nodes() {
        let record = Record::Node {
            id: node.id.clone(),
            node_kind: node.kind,
            attrs: node.attrs.clone(),
        };
        serde_json::to_writer(&mut out, &record)?;
        out.write_all(b"\n")?;
    }
    for edge in store.edges() {
        let record = Record::Edge {
            id: edge.id.clone(),
            edge_kind: edge.kind,
            from: edge.from.clone(),
            to: edge.to.clone(),
            attrs: edge.attrs.clone(),
        };
        serde_json::to_writer(&mut out, &record)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn dump_to_string(store: &GraphStore) -> String {
    let mut buf = Vec::new();
    write_dump(store, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn dump(store: &GraphStore, path: &Path) -> Result<(), GraphError> {
    let io_err = |source| GraphError::Io { path: path.display().to_string(), source };
    let file = fs::File::create(path).map_err(io_err)?;
    write_dump(store, BufWriter::new(file)).map_err(io_err)
}

pub fn load(path: &Path) -> Result<GraphStore, GraphError> {
    let text = fs::read_to_string(path)
        .map_err(|source| GraphError::Io { path: path.display().to_string(), source })?;
    load_from_str(&text)
}

/// Parses and fully validates a dump. The returned store is still in its
/// build phase.
pub fn load_from_str(text: &str) -> Result<GraphStore, GraphError> {
    let corrupt = |line: usize, reason: String| GraphError::CorruptDump { line, reason };
    let mut lines = text.lines().enumerate().map(|(n, l)| (n + 1, l));

    let (_, header_line) = lines.next().ok_or_else(|| corrupt(1, "empty file".into()))?;
    let header: DumpHeader =
        serde_json::from_str(header_line).map_err(|e| corrupt(1, format!("bad header: {e}")))?;
    if header.format != DUMP_FORMAT || header.version != DUMP_VERSION {
        return Err(corrupt(
            1,
            format!("unsupported format {} v{}", header.format, header.version),
        ));
    }

    let mut edges = Vec::new();
    let mut store = GraphStore::new();
    for (line, raw) in lines {
        if raw.trim().is_empty() {
            continue;
        }
        let record: Record =
            serde_json::from_str(raw).map_err(|e| corrupt(line, format!("bad record: {e}")))?;
        match record {
            Record::Node { id, node_kind, attrs } => {
                if id.kind() != node_kind {
                    return Err(corrupt(line, format!("{id} declared as {node_kind}")));
                }
                store
                    .add_node(node_kind, id.key(), attrs)
                    .map_err(|e| corrupt(line, e.to_string()))?;
            }
            Record::Edge { id, edge_kind, from, to, attrs } => {
                edges.push((line, id, edge_kind, from, to, attrs));
            }
        }
    }
    for (line, id, kind, from, to, attrs) in edges {
        if id != GraphEdge::make_id(kind, &from, &to) {
            return Err(corrupt(line, format!("edge id {id:?} does not match its endpoints")));
        }
        if store.edge(&id).is_some() {
            return Err(corrupt(line, format!("duplicate edge {id}")));
        }
        store
            .add_edge(kind, &from, &to, attrs)
            .map_err(|e| corrupt(line, e.to_string()))?;
    }

    let counts = DumpCounts { nodes: store.node_count(), edges: store.edge_count() };
    if counts != header.counts {
        return Err(corrupt(
            1,
            format!(
                "header declares {} nodes / {} edges, found {} / {}",
                header.counts.nodes, header.counts.edges, counts.nodes, counts.edges
            ),
        ));
    }
    Ok(store)
}
