use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde_json::Value;

use super::schema::{validate_edge, validate_node};
use super::temporal::{coverage_micros, TemporalIndex};
use super::{Attrs, Direction, EdgeKind, GraphEdge, GraphError, GraphNode, NodeId, NodeKind};

type AdjacencyKey = (NodeId, EdgeKind, Direction);
type Triple = (EdgeKind, NodeId, NodeId);

/// Secondary structures derived entirely from the node and edge sets.
#[derive(Clone, Debug, Default, PartialEq)]
struct Indexes {
    adjacency: HashMap<AdjacencyKey, BTreeSet<NodeId>>,
    triples: HashMap<Triple, String>,
    keyword_terms: BTreeMap<String, NodeId>,
    temporal: TemporalIndex,
}

impl Indexes {
    fn index_node(&mut self, node: &GraphNode) {
        if node.kind == NodeKind::Keyword {
            if let Some(term) = node.attrs.get("term").and_then(Value::as_str) {
                self.keyword_terms.insert(term.to_owned(), node.id.clone());
            }
        }
        if node.kind.is_dataset() {
            if let Some((start, end)) = coverage_micros(&node.attrs) {
                self.temporal.insert(node.id.clone(), start, end);
            }
        }
    }

    fn index_edge(&mut self, edge: &GraphEdge) {
        self.adjacency
            .entry((edge.from.clone(), edge.kind, Direction::Out))
            .or_default()
            .insert(edge.to.clone());
        self.adjacency
            .entry((edge.to.clone(), edge.kind, Direction::In))
            .or_default()
            .insert(edge.from.clone());
        self.triples
            .insert((edge.kind, edge.from.clone(), edge.to.clone()), edge.id.clone());
    }

    fn rebuild(nodes: &BTreeMap<NodeId, GraphNode>, edges: &BTreeMap<String, GraphEdge>) -> Self {
        let mut indexes = Indexes::default();
        nodes.values().for_each(|n| indexes.index_node(n));
        edges.values().for_each(|e| indexes.index_edge(e));
        indexes
    }
}

#[derive(Clone, Debug, Default)]
pub struct GraphStore {
    nodes: BTreeMap<NodeId, GraphNode>,
    edges: BTreeMap<String, GraphEdge>,
    indexes: Indexes,
    frozen: bool,
}

impl GraphStore {
    pub fn new() -> Self {
        Self::default()
    }

    fn ensure_build_phase(&self) -> Result<(), GraphError> {
        if self.frozen {
            Err(GraphError::Frozen)
        } else {
            Ok(())
        }
    }

    pub fn add_node(&mut self, kind: NodeKind, key: &str, attrs: Attrs) -> Result<NodeId, GraphError> {
        self.ensure_build_phase()?;
        let id = NodeId::new(kind, key)?;
        if self.nodes.contains_key(&id) {
            return Err(GraphError::DuplicateNode(id));
        }
        validate_node(kind, &attrs)?;
        let node = GraphNode { id: id.clone(), kind, attrs };
        self.indexes.index_node(&node);
        self.nodes.insert(id.clone(), node);
        Ok(id)
    }

    /// Adds an edge, or returns the id of the existing edge with the same
    /// `(kind, from, to)` without touching its attributes.
    pub fn add_edge(
        &mut self,
        kind: EdgeKind,
        from: &NodeId,
        to: &NodeId,
        attrs: Attrs,
    ) -> Result<String, GraphError> {
        self.ensure_build_phase()?;
        let from_kind = self.require_endpoint(from)?;
        let to_kind = self.require_endpoint(to)?;
        if !kind.allows(from_kind, to_kind) {
            return Err(GraphError::IllegalEndpointKind { kind, from: from_kind, to: to_kind });
        }
        if let Some(existing) = self.indexes.triples.get(&(kind, from.clone(), to.clone())) {
            return Ok(existing.clone());
        }
        validate_edge(kind, &attrs)?;
        let edge = GraphEdge {
            id: GraphEdge::make_id(kind, from, to),
            kind,
            from: from.clone(),
            to: to.clone(),
            attrs,
        };
        self.indexes.index_edge(&edge);
        let id = edge.id.clone();
        self.edges.insert(id.clone(), edge);
        Ok(id)
    }

    fn require_endpoint(&self, id: &NodeId) -> Result<NodeKind, GraphError> {
        self.nodes
            .get(id)
            .map(|n| n.kind)
            .ok_or_else(|| GraphError::MissingEndpoint(id.clone()))
    }

    /// Replaces one attribute of an existing node, re-validating the schema.
    pub fn set_node_attr(&mut self, id: &NodeId, field: &str, value: Value) -> Result<(), GraphError> {
        self.ensure_build_phase()?;
        let node = self.nodes.get(id).ok_or_else(|| GraphError::MissingNode(id.clone()))?;
        let mut attrs = node.attrs.clone();
        attrs.insert(field.to_owned(), value);
        validate_node(node.kind, &attrs)?;
        let node = self.nodes.get_mut(id).expect("checked above");
        node.attrs = attrs;
        if matches!(field, "term" | "temporal_coverage") {
            self.indexes = Indexes::rebuild(&self.nodes, &self.edges);
        }
        Ok(())
    }

    /// Removes a node that has no incident edges.
    pub fn remove_node(&mut self, id: &NodeId) -> Result<GraphNode, GraphError> {
        self.ensure_build_phase()?;
        if !self.nodes.contains_key(id) {
            return Err(GraphError::MissingNode(id.clone()));
        }
        let in_use = EdgeKind::ALL.iter().any(|&kind| {
            [Direction::Out, Direction::In].iter().any(|&dir| {
                self.indexes
                    .adjacency
                    .get(&(id.clone(), kind, dir))
                    .is_some_and(|s| !s.is_empty())
            })
        });
        if in_use {
            return Err(GraphError::NodeInUse(id.clone()));
        }
        let node = self.nodes.remove(id).expect("checked above");
        self.indexes = Indexes::rebuild(&self.nodes, &self.edges);
        Ok(node)
    }

    /// Ends the build phase. Further mutation fails with [`GraphError::Frozen`].
    pub fn freeze(&mut self) {
        self.indexes.temporal.finalize();
        self.frozen = true;
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn node(&self, id: &NodeId) -> Option<&GraphNode> {
        self.nodes.get(id)
    }

    pub fn contains(&self, id: &NodeId) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn edge(&self, id: &str) -> Option<&GraphEdge> {
        self.edges.get(id)
    }

    pub fn edge_between(&self, kind: EdgeKind, from: &NodeId, to: &NodeId) -> Option<&GraphEdge> {
        let id = self.indexes.triples.get(&(kind, from.clone(), to.clone()))?;
        self.edges.get(id)
    }

    /// All nodes in id order.
    pub fn nodes(&self) -> impl Iterator<Item = &GraphNode> {
        self.nodes.values()
    }

    /// All edges in id order.
    pub fn edges(&self) -> impl Iterator<Item = &GraphEdge> {
        self.edges.values()
    }

    pub fn nodes_of_kind(&self, kind: NodeKind) -> impl Iterator<Item = &GraphNode> {
        let prefix = format!("{}/", kind.collection());
        self.nodes
            .range(NodeId::new(kind, "\0").expect("valid key")..)
            .take_while(move |(id, _)| id.as_str().starts_with(&prefix))
            .map(|(_, n)| n)
    }

    /// Dataset and STAC collection nodes, in id order.
    pub fn dataset_nodes(&self) -> impl Iterator<Item = &GraphNode> {
        self.nodes_of_kind(NodeKind::Dataset)
            .chain(self.nodes_of_kind(NodeKind::StacCollection))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn count_of_kind(&self, kind: NodeKind) -> usize {
        self.nodes_of_kind(kind).count()
    }

    /// Endpoints of matching incident edges, sorted by id.
    pub fn neighbors(&self, id: &NodeId, kind: EdgeKind, direction: Direction) -> Result<Vec<NodeId>, GraphError> {
        Ok(self.neighbor_set(id, kind, direction)?.into_iter().flatten().cloned().collect())
    }

    /// Borrowing variant of [`neighbors`](Self::neighbors); `None` means no
    /// incident edges of that kind.
    pub fn neighbor_set(
        &self,
        id: &NodeId,
        kind: EdgeKind,
        direction: Direction,
    ) -> Result<Option<&BTreeSet<NodeId>>, GraphError> {
        if !self.nodes.contains_key(id) {
            return Err(GraphError::MissingNode(id.clone()));
        }
        Ok(self.indexes.adjacency.get(&(id.clone(), kind, direction)))
    }

    pub fn keyword_node(&self, term: &str) -> Option<&NodeId> {
        self.indexes.keyword_terms.get(term)
    }

    /// Keyword terms starting with `prefix`, in lexicographic order.
    pub fn keyword_terms_with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = (&'a str, &'a NodeId)> + 'a {
        self.indexes
            .keyword_terms
            .range(prefix.to_owned()..)
            .take_while(move |(t, _)| t.starts_with(prefix))
            .map(|(t, id)| (t.as_str(), id))
    }

    pub fn temporal_index(&self) -> &TemporalIndex {
        &self.indexes.temporal
    }

    /// Full-scan referential integrity check.
    pub fn check_integrity(&self) -> Result<(), GraphError> {
        for node in self.nodes.values() {
            if node.id.kind() != node.kind {
                return Err(GraphError::SchemaViolation(format!(
                    "node {} declares kind {}",
                    node.id, node.kind
                )));
            }
        }
        for edge in self.edges.values() {
            let from = self.require_endpoint(&edge.from)?;
            let to = self.require_endpoint(&edge.to)?;
            if !edge.kind.allows(from, to) {
                return Err(GraphError::IllegalEndpointKind { kind: edge.kind, from, to });
            }
        }
        Ok(())
    }

    /// Whether the incrementally maintained indexes equal a rebuild from scratch.
    pub fn indexes_consistent(&self) -> bool {
        Indexes::rebuild(&self.nodes, &self.edges) == self.indexes
    }
}

impl PartialEq for GraphStore {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}
