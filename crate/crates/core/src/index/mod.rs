//! Lexical (BM25) and semantic (cosine) indexes over graph nodes.

mod embed;
mod fulltext;
mod vector;

use serde::{Deserialize, Serialize};

use crate::graph::{CodeGraph, NodeId};

pub use embed::{EmbedError, Embedder, EmbeddingVector, HashingEmbedder, RemoteEmbedder, DEFAULT_DIMENSION};
pub use fulltext::{build_fulltext_index, Bm25Params, FullTextIndex};
pub use vector::{build_vector_index, VectorEntry, VectorIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HitSource {
    Fulltext,
    Vector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredHit {
    pub node_id: NodeId,
    pub score: f64,
    pub source: HitSource,
}

#[derive(Debug, thiserror::Error)]
pub enum IndexError {
    #[error("{0} has no HAS_DOCUMENTATION or HAS_DESCRIPTION owner edge")]
    Orphan(NodeId),
    #[error("vector dimension {found} does not match index dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

/// Sort by (score desc, id asc), drop hits under `threshold`, keep `k`.
pub fn rank(mut hits: Vec<ScoredHit>, k: usize, threshold: f64) -> Vec<ScoredHit> {
    hits.retain(|h| h.score >= threshold);
    hits.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.node_id.cmp(&b.node_id)));
    hits.truncate(k);
    hits
}

/// Split identifiers and prose into lowercase word tokens.
///
/// Breaks on non-alphanumerics, lower-to-upper transitions, digit-to-upper
/// transitions and the end of an uppercase run (`HTTPServer` gives `http`,
/// `server`). Letters and digits stay together otherwise.
pub fn tokenize_identifier(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for word in text.split(|c: char| !c.is_alphanumeric()).filter(|w| !w.is_empty()) {
        let chars: Vec<char> = word.chars().collect();
        let mut current = String::new();
        for (i, &c) in chars.iter().enumerate() {
            if i > 0 && c.is_uppercase() {
                let prev = chars[i - 1];
                let next_lower = chars.get(i + 1).is_some_and(|n| n.is_lowercase());
                if prev.is_lowercase() || prev.is_numeric() || (prev.is_uppercase() && next_lower) {
                    tokens.push(std::mem::take(&mut current));
                }
            }
            current.extend(c.to_lowercase());
        }
        tokens.push(current);
    }
    tokens.retain(|t| !t.is_empty());
    tokens
}

/// Both indexes for one graph.
#[derive(Debug, Clone)]
pub struct Indexes {
    pub fulltext: FullTextIndex,
    pub vector: VectorIndex,
}

impl Indexes {
    pub fn build(graph: &CodeGraph, embedder: &dyn Embedder) -> Result<Self, IndexError> {
        Ok(Indexes {
            fulltext: build_fulltext_index(graph),
            vector: build_vector_index(graph, embedder)?,
        })
    }
}
