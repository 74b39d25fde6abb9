use std::collections::{BTreeMap, BTreeSet};

use super::{rank, tokenize_identifier, HitSource, ScoredHit};
use crate::graph::{CodeGraph, NodeId, NodeKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Bm25Params { k1: 1.2, b: 0.75 }
    }
}

/// Inverted index with BM25 scoring.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FullTextIndex {
    params: Bm25Params,
    /// token -> (document, term frequency), sorted by document.
    postings: BTreeMap<String, Vec<(NodeId, usize)>>,
    doc_lengths: BTreeMap<NodeId, usize>,
    avg_length: f64,
}

impl FullTextIndex {
    /// Index pre-tokenized documents. Repeated ids are merged into one document.
    pub fn from_documents(docs: impl IntoIterator<Item = (NodeId, Vec<String>)>, params: Bm25Params) -> Self {
        let mut merged: BTreeMap<NodeId, Vec<String>> = BTreeMap::new();
        for (id, tokens) in docs {
            merged.entry(id).or_default().extend(tokens);
        }
        let mut postings: BTreeMap<String, Vec<(NodeId, usize)>> = BTreeMap::new();
        let mut doc_lengths = BTreeMap::new();
        for (id, tokens) in merged {
            let mut tf: BTreeMap<String, usize> = BTreeMap::new();
            for token in &tokens {
                *tf.entry(token.clone()).or_default() += 1;
            }
            for (token, count) in tf {
                postings.entry(token).or_default().push((id.clone(), count));
            }
            doc_lengths.insert(id, tokens.len());
        }
        let total: usize = doc_lengths.values().sum();
        let avg_length = if doc_lengths.is_empty() {
            0.0
        } else {
            total as f64 / doc_lengths.len() as f64
        };
        FullTextIndex {
            params,
            postings,
            doc_lengths,
            avg_length,
        }
    }

    pub fn doc_count(&self) -> usize {
        self.doc_lengths.len()
    }

    pub fn avg_length(&self) -> f64 {
        self.avg_length
    }

    pub fn doc_length(&self, id: &str) -> Option<usize> {
        self.doc_lengths.get(id).copied()
    }

    pub fn postings(&self, token: &str) -> &[(NodeId, usize)] {
        self.postings.get(token).map_or(&[], Vec::as_slice)
    }

    fn idf(&self, df: usize) -> f64 {
        let n = self.doc_count() as f64;
        let df = df as f64;
        ((n - df + 0.5) / (df + 0.5)).ln().max(0.0)
    }

    /// BM25 search. Only documents sharing at least one token with the query
    /// are candidates; each distinct query token counts once.
    pub fn search(&self, query: &str, k: usize, threshold: f64) -> Vec<ScoredHit> {
        if k == 0 {
            return Vec::new();
        }
        let terms: BTreeSet<String> = tokenize_identifier(query).into_iter().collect();
        let Bm25Params { k1, b } = self.params;
        let mut scores: BTreeMap<&NodeId, f64> = BTreeMap::new();
        for term in &terms {
            let postings = self.postings(term);
            if postings.is_empty() {
                continue;
            }
            let idf = self.idf(postings.len());
            for (id, tf) in postings {
                let tf = *tf as f64;
                let len = self.doc_lengths[id] as f64;
                let norm = if self.avg_length > 0.0 {
                    len / self.avg_length
                } else {
                    0.0
                };
                *scores.entry(id).or_default() += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * norm));
            }
        }
        let hits = scores
            .into_iter()
            .map(|(id, score)| ScoredHit {
                node_id: id.clone(),
                score,
                source: HitSource::Fulltext,
            })
            .collect();
        rank(hits, k, threshold)
    }
}

/// One document per File, Class, Function and Method node, built from the
/// tokens of its name and qualified name.
pub fn build_fulltext_index(graph: &CodeGraph) -> FullTextIndex {
    let docs = graph
        .nodes()
        .filter(|n| {
            matches!(
                n.kind,
                NodeKind::File | NodeKind::Class | NodeKind::Function | NodeKind::Method
            )
        })
        .map(|n| {
            let mut tokens = tokenize_identifier(&n.name);
            tokens.extend(tokenize_identifier(&n.qualified_name));
            (n.id.clone(), tokens)
        });
    FullTextIndex::from_documents(docs, Bm25Params::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, text: &str) -> (NodeId, Vec<String>) {
        (NodeId::from(id), tokenize_identifier(text))
    }

    #[test]
    fn empty_index() {
        let index = FullTextIndex::from_documents(Vec::new(), Bm25Params::default());
        assert_eq!(index.doc_count(), 0);
        assert!(index.search("anything", 5, 0.0).is_empty());
    }

    #[test]
    fn hand_computed_score() {
        // N=3, avgdl=2; "alpha" has df=1, tf=1 in a 2-token document.
        let index = FullTextIndex::from_documents(
            [doc("a", "alpha beta"), doc("b", "beta gamma"), doc("c", "gamma delta")],
            Bm25Params::default(),
        );
        let hits = index.search("alpha", 10, 0.0);
        assert_eq!(hits.len(), 1);
        let expected = (2.5f64 / 1.5).ln() * 2.2 / (1.0 + 1.2);
        assert!((hits[0].score - expected).abs() < 1e-12);
    }

    #[test]
    fn empty_query_and_zero_k() {
        let index = FullTextIndex::from_documents([doc("a", "alpha")], Bm25Params::default());
        assert!(index.search("", 5, 0.0).is_empty());
        assert!(index.search("alpha", 0, 0.0).is_empty());
    }

    #[test]
    fn ties_break_by_id() {
        let index = FullTextIndex::from_documents(
            [
                doc("z", "load data"),
                doc("a", "load data"),
                doc("m", "other"),
                doc("n", "thing"),
            ],
            Bm25Params::default(),
        );
        let ids: Vec<String> = index
            .search("load", 5, 0.0)
            .into_iter()
            .map(|h| h.node_id.to_string())
            .collect();
        assert_eq!(ids, ["a", "z"]);
    }

    #[test]
    fn repeated_query_terms_count_once() {
        let index =
            FullTextIndex::from_documents([doc("a", "x y"), doc("b", "z w"), doc("c", "q")], Bm25Params::default());
        assert_eq!(index.search("x", 5, 0.0), index.search("x x X", 5, 0.0));
    }
}
