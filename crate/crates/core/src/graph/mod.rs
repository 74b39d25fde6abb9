//! Typed property graph of code entities.
//!
//! Nodes are code elements plus their documentation and generated
//! descriptions; edges are structural or usage relations. A [`CodeGraph`] is
//! immutable once built and can be shared freely between readers.

mod build;
mod store;
mod traverse;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::parser::{EntityKind, SourceSpan};

pub use build::build_graph;
pub use store::{from_jsonl, load_graph, persist_graph, to_jsonl};
pub use traverse::{induced_subgraph, n_hop_subgraph, Subgraph};
pub use validate::{validate_schema, Violation};

#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("duplicate qualified name {qualified_name}: defined at {first} and {second}")]
    DuplicateQualifiedName {
        qualified_name: String,
        first: String,
        second: String,
    },
    #[error("duplicate node id {0}")]
    DuplicateNode(NodeId),
    #[error("edge {0} references a node that does not exist")]
    DanglingEdge(Edge),
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("graph file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn documentation_of(owner: &str) -> Self {
        NodeId(format!("{owner}#doc"))
    }

    pub fn description_of(owner: &str) -> Self {
        NodeId(format!("{owner}#desc"))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_string())
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        NodeId(s)
    }
}

impl std::borrow::Borrow<str> for NodeId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    File,
    Class,
    Method,
    Function,
    Attribute,
    Documentation,
    GeneratedDescription,
}

impl NodeKind {
    pub const ALL: [NodeKind; 7] = [
        NodeKind::File,
        NodeKind::Class,
        NodeKind::Method,
        NodeKind::Function,
        NodeKind::Attribute,
        NodeKind::Documentation,
        NodeKind::GeneratedDescription,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::File => "File",
            NodeKind::Class => "Class",
            NodeKind::Method => "Method",
            NodeKind::Function => "Function",
            NodeKind::Attribute => "Attribute",
            NodeKind::Documentation => "Documentation",
            NodeKind::GeneratedDescription => "GeneratedDescription",
        }
    }

    /// File, Class, Method, Function or Attribute.
    pub fn is_code(self) -> bool {
        !matches!(self, NodeKind::Documentation | NodeKind::GeneratedDescription)
    }

    pub fn entity_kind(self) -> Option<EntityKind> {
        match self {
            NodeKind::File => Some(EntityKind::File),
            NodeKind::Class => Some(EntityKind::Class),
            NodeKind::Method => Some(EntityKind::Method),
            NodeKind::Function => Some(EntityKind::Function),
            NodeKind::Attribute => Some(EntityKind::Attribute),
            _ => None,
        }
    }
}

impl From<EntityKind> for NodeKind {
    fn from(kind: EntityKind) -> Self {
        match kind {
            EntityKind::File => NodeKind::File,
            EntityKind::Class => NodeKind::Class,
            EntityKind::Method => NodeKind::Method,
            EntityKind::Function => NodeKind::Function,
            EntityKind::Attribute => NodeKind::Attribute,
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NodeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NodeKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown node kind {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Relation {
    DefinesClass,
    DefinesFunction,
    HasAttribute,
    HasDescription,
    HasDocumentation,
    HasMethod,
    UsedIn,
}

impl Relation {
    pub const ALL: [Relation; 7] = [
        Relation::DefinesClass,
        Relation::DefinesFunction,
        Relation::HasAttribute,
        Relation::HasDescription,
        Relation::HasDocumentation,
        Relation::HasMethod,
        Relation::UsedIn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::DefinesClass => "DEFINES_CLASS",
            Relation::DefinesFunction => "DEFINES_FUNCTION",
            Relation::HasAttribute => "HAS_ATTRIBUTE",
            Relation::HasDescription => "HAS_DESCRIPTION",
            Relation::HasDocumentation => "HAS_DOCUMENTATION",
            Relation::HasMethod => "HAS_METHOD",
            Relation::UsedIn => "USED_IN",
        }
    }

    /// Parent-to-child containment relations.
    pub fn is_structural(self) -> bool {
        matches!(
            self,
            Relation::DefinesClass | Relation::DefinesFunction | Relation::HasAttribute | Relation::HasMethod
        )
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Relation::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown relation {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub kind: NodeKind,
    pub name: String,
    pub qualified_name: String,
    pub span: Option<SourceSpan>,
    /// Source text for code nodes, documentation or description otherwise.
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub src: NodeId,
    pub rel: Relation,
    pub dst: NodeId,
}

impl Edge {
    pub fn new(src: impl Into<NodeId>, rel: Relation, dst: impl Into<NodeId>) -> Self {
        Edge {
            src: src.into(),
            rel,
            dst: dst.into(),
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -[{}]-> {}", self.src, self.rel, self.dst)
    }
}

/// Immutable node/edge store with per-node adjacency.
#[derive(Debug, Clone, Default)]
pub struct CodeGraph {
    nodes: BTreeMap<NodeId, Node>,
    edges: Vec<Edge>,
    outgoing: HashMap<NodeId, Vec<usize>>,
    incoming: HashMap<NodeId, Vec<usize>>,
}

impl PartialEq for CodeGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

impl Eq for CodeGraph {}

impl CodeGraph {
    /// Assemble a graph. Node ids must be unique and every edge endpoint must
    /// exist; edge triples are kept as given (duplicates included), sorted.
    pub fn new(nodes: Vec<Node>, mut edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut map = BTreeMap::new();
        for node in nodes {
            if map.contains_key(&node.id) {
                return Err(GraphError::DuplicateNode(node.id));
            }
            map.insert(node.id.clone(), node);
        }
        if let Some(bad) = edges
            .iter()
            .find(|e| !map.contains_key(&e.src) || !map.contains_key(&e.dst))
        {
            return Err(GraphError::DanglingEdge(bad.clone()));
        }
        edges.sort();
        let mut outgoing: HashMap<NodeId, Vec<usize>> = HashMap::new();
        let mut incoming: HashMap<NodeId, Vec<usize>> = HashMap::new();
        for (i, edge) in edges.iter().enumerate() {
            outgoing.entry(edge.src.clone()).or_default().push(i);
            incoming.entry(edge.dst.clone()).or_default().push(i);
        }
        Ok(CodeGraph {
            nodes: map,
            edges,
            outgoing,
            incoming,
        })
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.nodes.contains_key(id)
    }

    /// Nodes in ascending id order.
    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values()
    }

    /// Edges sorted by (src, rel, dst).
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn outgoing<'a>(&'a self, id: &str) -> impl Iterator<Item = &'a Edge> + 'a {
        self.outgoing.get(id).into_iter().flatten().map(|&i| &self.edges[i])
    }

    pub fn incoming<'a>(&'a self, id: &str) -> impl Iterator<Item = &'a Edge> + 'a {
        self.incoming.get(id).into_iter().flatten().map(|&i| &self.edges[i])
    }

    /// Neighbours ignoring edge direction (may repeat).
    pub fn neighbors<'a>(&'a self, id: &str) -> impl Iterator<Item = &'a NodeId> + 'a {
        self.outgoing(id)
            .map(|e| &e.dst)
            .chain(self.incoming(id).map(|e| &e.src))
    }

    /// Code node a documentation or description node hangs off.
    pub fn owner_of(&self, id: &str) -> Option<&NodeId> {
        self.incoming(id)
            .find(|e| matches!(e.rel, Relation::HasDocumentation | Relation::HasDescription))
            .map(|e| &e.src)
    }

    /// Documentation text attached to a code node, if any.
    pub fn documentation(&self, id: &str) -> Option<&str> {
        self.outgoing(id)
            .find(|e| e.rel == Relation::HasDocumentation)
            .and_then(|e| self.node(e.dst.as_str()))
            .map(|n| n.text.as_str())
    }

    /// Copy of this graph with extra nodes and edges.
    pub fn extended(&self, nodes: Vec<Node>, edges: Vec<Edge>) -> Result<CodeGraph, GraphError> {
        let mut all_nodes: Vec<Node> = self.nodes.values().cloned().collect();
        all_nodes.extend(nodes);
        let mut all_edges = self.edges.clone();
        all_edges.extend(edges);
        CodeGraph::new(all_nodes, all_edges)
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    pub fn node(id: &str, kind: NodeKind) -> Node {
        Node {
            id: NodeId::from(id),
            kind,
            name: id.rsplit('.').next().unwrap_or(id).to_string(),
            qualified_name: id.to_string(),
            span: None,
            text: String::new(),
        }
    }
}
