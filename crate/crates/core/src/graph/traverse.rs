use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{CodeGraph, Edge, GraphError, NodeId};

/// A node subset with its induced edges and the seeds it grew from.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgraph {
    pub node_ids: Vec<NodeId>,
    pub edges: Vec<Edge>,
    pub seed_ids: Vec<NodeId>,
}

impl Subgraph {
    pub fn is_empty(&self) -> bool {
        self.node_ids.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.node_ids.iter().any(|n| n.as_str() == id)
    }
}

/// Subgraph over `node_ids` (kept in the given order) with every graph edge
/// whose endpoints both lie inside it.
pub fn induced_subgraph(graph: &CodeGraph, node_ids: Vec<NodeId>, seeds: &BTreeSet<NodeId>) -> Subgraph {
    let members: BTreeSet<&NodeId> = node_ids.iter().collect();
    let edges = graph
        .edges()
        .iter()
        .filter(|e| members.contains(&e.src) && members.contains(&e.dst))
        .cloned()
        .collect();
    Subgraph {
        seed_ids: seeds.iter().filter(|s| members.contains(s)).cloned().collect(),
        node_ids,
        edges,
    }
}

/// All nodes within `hops` undirected edges of any seed, in ascending id order.
pub fn n_hop_subgraph<'a>(
    graph: &CodeGraph,
    seeds: impl IntoIterator<Item = &'a NodeId>,
    hops: usize,
) -> Result<Subgraph, GraphError> {
    let seeds: BTreeSet<NodeId> = seeds.into_iter().cloned().collect();
    if let Some(missing) = seeds.iter().find(|s| !graph.contains(s.as_str())) {
        return Err(GraphError::UnknownNode(missing.clone()));
    }
    let mut visited: BTreeSet<NodeId> = seeds.clone();
    let mut frontier: VecDeque<(NodeId, usize)> = seeds.iter().map(|s| (s.clone(), 0)).collect();
    while let Some((current, depth)) = frontier.pop_front() {
        if depth == hops {
            continue;
        }
        for next in graph.neighbors(current.as_str()) {
            if visited.insert(next.clone()) {
                frontier.push_back((next.clone(), depth + 1));
            }
        }
    }
    Ok(induced_subgraph(graph, visited.into_iter().collect(), &seeds))
}
