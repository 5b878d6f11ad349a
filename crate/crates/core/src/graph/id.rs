use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::GraphError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    Corpus,
    Dataset,
    #[serde(rename = "STACCollection")]
    StacCollection,
    Author,
    Keyword,
    Publication,
}

impl NodeKind {
    pub const ALL: [NodeKind; 6] = [
        NodeKind::Corpus,
        NodeKind::Dataset,
        NodeKind::StacCollection,
        NodeKind::Author,
        NodeKind::Keyword,
        NodeKind::Publication,
    ];

    pub fn collection(self) -> &'static str {
        match self {
            NodeKind::Corpus => "Corpus",
            NodeKind::Dataset => "Dataset",
            NodeKind::StacCollection => "STACCollection",
            NodeKind::Author => "Author",
            NodeKind::Keyword => "Keyword",
            NodeKind::Publication => "Publication",
        }
    }

    /// Dataset-like records: the units that are searched, filtered and listed.
    pub fn is_dataset(self) -> bool {
        matches!(self, NodeKind::Dataset | NodeKind::StacCollection)
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.collection())
    }
}

impl FromStr for NodeKind {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NodeKind::ALL
            .into_iter()
            .find(|k| k.collection() == s)
            .ok_or_else(|| GraphError::InvalidNodeId(format!("unknown collection {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EdgeKind {
    BelongsToCorpus,
    HasAuthor,
    HasKeyword,
    HasPublication,
    MentionsMission,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 5] = [
        EdgeKind::BelongsToCorpus,
        EdgeKind::HasAuthor,
        EdgeKind::HasKeyword,
        EdgeKind::HasPublication,
        EdgeKind::MentionsMission,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EdgeKind::BelongsToCorpus => "belongsToCorpus",
            EdgeKind::HasAuthor => "hasAuthor",
            EdgeKind::HasKeyword => "hasKeyword",
            EdgeKind::HasPublication => "hasPublication",
            EdgeKind::MentionsMission => "mentionsMission",
        }
    }

    /// Whether an edge of this kind may run from `from` to `to`.
    pub fn allows(self, from: NodeKind, to: NodeKind) -> bool {
        use NodeKind::*;
        match self {
            EdgeKind::HasAuthor => matches!(from, Dataset | StacCollection | Publication) && to == Author,
            EdgeKind::HasKeyword => {
                matches!(from, Dataset | StacCollection | Publication) && to == Keyword
            }
            EdgeKind::BelongsToCorpus => matches!(from, Dataset | StacCollection) && to == Corpus,
            EdgeKind::HasPublication => from == Dataset && to == Publication,
            EdgeKind::MentionsMission => from == Publication && to == StacCollection,
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Out,
    In,
}

/// Node identifier of the form `<Collection>/<key>`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(String);

impl NodeId {
    /// Builds an id from an already-safe key. Fails when the key is empty or
    /// contains `/`; see [`encode_key`] for arbitrary text.
    pub fn new(kind: NodeKind, key: &str) -> Result<Self, GraphError> {
        if key.is_empty() {
            return Err(GraphError::InvalidNodeId(format!("{kind}: empty key")));
        }
        if key.contains('/') {
            return Err(GraphError::InvalidNodeId(format!("{kind}: key {key:?} contains '/'")));
        }
        Ok(Self(format!("{}/{}", kind.collection(), key)))
    }

    pub fn parse(raw: &str) -> Result<Self, GraphError> {
        let (collection, key) = raw
            .split_once('/')
            .ok_or_else(|| GraphError::InvalidNodeId(format!("{raw:?} has no collection segment")))?;
        let kind: NodeKind = collection.parse()?;
        Self::new(kind, key)
    }

    pub fn kind(&self) -> NodeKind {
        let collection = self.0.split_once('/').map(|(c, _)| c).unwrap_or_default();
        collection.parse().expect("NodeId holds a validated collection")
    }

    pub fn key(&self) -> &str {
        self.0.split_once('/').map(|(_, k)| k).unwrap_or_default()
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for NodeId {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Serialize for NodeId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for NodeId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        NodeId::parse(&raw).map_err(serde::de::Error::custom)
    }
}

/// Makes arbitrary text usable as a node key by escaping `%` and `/`.
pub fn encode_key(text: &str) -> String {
    text.replace('%', "%25").replace('/', "%2F")
}

/// Author key: case-folded name with whitespace runs turned into hyphens.
pub fn author_key(name: &str) -> String {
    let slug = name.split_whitespace().collect::<Vec<_>>().join("-").to_lowercase();
    encode_key(&slug)
}
