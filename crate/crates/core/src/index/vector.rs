use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{rank, Embedder, EmbeddingVector, HitSource, IndexError, ScoredHit};
use crate::graph::{CodeGraph, NodeId, NodeKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorEntry {
    /// Documentation or description node.
    pub node_id: NodeId,
    /// Code node it describes.
    pub owner_id: NodeId,
    pub vector: EmbeddingVector,
}

/// Exact cosine index over documentation and description embeddings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorIndex {
    dimension: usize,
    entries: Vec<VectorEntry>,
}

impl VectorIndex {
    /// Entries are sorted by node id; every vector must have `dimension` values.
    pub fn from_entries(dimension: usize, mut entries: Vec<VectorEntry>) -> Result<Self, IndexError> {
        if let Some(bad) = entries.iter().find(|e| e.vector.dimension() != dimension) {
            return Err(IndexError::DimensionMismatch {
                expected: dimension,
                found: bad.vector.dimension(),
            });
        }
        entries.sort_by(|a, b| a.node_id.cmp(&b.node_id));
        Ok(VectorIndex { dimension, entries })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn entries(&self) -> &[VectorEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Cosine search whose hits name the owning code nodes; an owner with
    /// several entries scores its best one.
    pub fn search(&self, query: &EmbeddingVector, k: usize, threshold: f64) -> Result<Vec<ScoredHit>, IndexError> {
        if query.dimension() != self.dimension {
            return Err(IndexError::DimensionMismatch {
                expected: self.dimension,
                found: query.dimension(),
            });
        }
        if k == 0 {
            return Ok(Vec::new());
        }
        let mut best: BTreeMap<&NodeId, f64> = BTreeMap::new();
        for entry in &self.entries {
            let score = query.cosine(&entry.vector);
            best.entry(&entry.owner_id)
                .and_modify(|s| *s = s.max(score))
                .or_insert(score);
        }
        let hits = best
            .into_iter()
            .map(|(id, score)| ScoredHit {
                node_id: id.clone(),
                score,
                source: HitSource::Vector,
            })
            .collect();
        Ok(rank(hits, k, threshold))
    }
}

/// Embed every Documentation and GeneratedDescription node's text.
pub fn build_vector_index(graph: &CodeGraph, embedder: &dyn Embedder) -> Result<VectorIndex, IndexError> {
    let mut owned = Vec::new();
    for node in graph
        .nodes()
        .filter(|n| matches!(n.kind, NodeKind::Documentation | NodeKind::GeneratedDescription))
    {
        let owner = graph
            .owner_of(node.id.as_str())
            .ok_or_else(|| IndexError::Orphan(node.id.clone()))?;
        owned.push((node, owner.clone()));
    }
    let texts: Vec<&str> = owned.iter().map(|(n, _)| n.text.as_str()).collect();
    let vectors = embedder.embed_batch(&texts)?;
    let entries = owned
        .into_iter()
        .zip(vectors)
        .map(|((node, owner_id), vector)| VectorEntry {
            node_id: node.id.clone(),
            owner_id,
            vector,
        })
        .collect();
    VectorIndex::from_entries(embedder.dimension(), entries)
}
