use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use codegraph_core::graph::{from_jsonl, n_hop_subgraph, to_jsonl, CodeGraph, Edge, Node, NodeId, NodeKind, Relation};
use codegraph_core::index::{
    tokenize_identifier, Bm25Params, EmbeddingVector, FullTextIndex, HashingEmbedder, VectorEntry, VectorIndex,
};
use codegraph_core::parser::SourceSpan;

fn graph_strategy() -> impl Strategy<Value = CodeGraph> {
    (1usize..25).prop_flat_map(|n| {
        let nodes = prop::collection::vec(
            (
                0usize..NodeKind::ALL.len(),
                "[a-zA-Z_ \"\\\\é\n]{0,8}",
                ".{0,20}",
                prop::option::of((1usize..50, 0usize..9, 0usize..30, 0usize..9)),
            ),
            n,
        );
        let edges = prop::collection::vec((0..n, 0usize..Relation::ALL.len(), 0..n), 0..(3 * n));
        (nodes, edges).prop_map(|(nodes, edges)| {
            let nodes = nodes
                .into_iter()
                .enumerate()
                .map(|(i, (kind, name, text, span))| Node {
                    id: NodeId::new(format!("m{i}.x")),
                    kind: NodeKind::ALL[kind],
                    qualified_name: format!("m{i}.{name}"),
                    name,
                    span: span.map(|(sl, sc, extra, ec)| SourceSpan {
                        file_path: format!("pkg/m{i}.py"),
                        start_line: sl,
                        start_col: sc,
                        end_line: sl + extra,
                        end_col: ec,
                    }),
                    text,
                })
                .collect();
            let edges = edges
                .into_iter()
                .map(|(s, r, d)| Edge::new(format!("m{s}.x"), Relation::ALL[r], format!("m{d}.x")))
                .collect();
            CodeGraph::new(nodes, edges).unwrap()
        })
    })
}

/// Repeated frontier growth over the raw edge list.
fn reach(graph: &CodeGraph, seeds: &BTreeSet<NodeId>, hops: usize) -> BTreeSet<NodeId> {
    let mut reached = seeds.clone();
    for _ in 0..hops {
        let mut next = reached.clone();
        for e in graph.edges() {
            if reached.contains(&e.src) {
                next.insert(e.dst.clone());
            }
            if reached.contains(&e.dst) {
                next.insert(e.src.clone());
            }
        }
        reached = next;
    }
    reached
}

const VOCAB: [&str; 6] = ["alpha", "beta", "gamma", "delta", "eps", "zeta"];

proptest! {
    #[test]
    fn hop_expansion_matches_frontier_growth(graph in graph_strategy(), picks in prop::collection::vec(0usize..25, 1..4), hops in 0usize..4) {
        let ids: Vec<NodeId> = graph.nodes().map(|n| n.id.clone()).collect();
        let seeds: BTreeSet<NodeId> = picks.iter().map(|p| ids[p % ids.len()].clone()).collect();
        let sub = n_hop_subgraph(&graph, &seeds, hops).unwrap();
        let expected = reach(&graph, &seeds, hops);
        prop_assert_eq!(sub.node_ids.iter().cloned().collect::<BTreeSet<_>>(), expected.clone());
        let want: Vec<&Edge> = graph.edges().iter().filter(|e| expected.contains(&e.src) && expected.contains(&e.dst)).collect();
        prop_assert_eq!(sub.edges.iter().collect::<Vec<_>>(), want);
        prop_assert_eq!(sub.seed_ids.iter().cloned().collect::<BTreeSet<_>>(), seeds);
    }

    #[test]
    fn jsonl_round_trip_is_lossless(graph in graph_strategy()) {
        let text = to_jsonl(&graph);
        let back = from_jsonl(&text).unwrap();
        prop_assert_eq!(&back, &graph);
        prop_assert_eq!(to_jsonl(&back), text);
    }

    #[test]
    fn bm25_matches_direct_formula(
        docs in prop::collection::vec(prop::collection::vec(0usize..VOCAB.len(), 0..8), 1..12),
        query in prop::collection::vec(0usize..VOCAB.len(), 0..4),
        k in 0usize..15,
    ) {
        let docs: Vec<(NodeId, Vec<String>)> = docs
            .into_iter()
            .enumerate()
            .map(|(i, words)| (NodeId::new(format!("d{i:02}")), words.into_iter().map(|w| VOCAB[w].to_string()).collect()))
            .collect();
        let index = FullTextIndex::from_documents(docs.clone(), Bm25Params::default());
        let query_text = query.iter().map(|w| VOCAB[*w]).collect::<Vec<_>>().join(" ");
        let hits = index.search(&query_text, k, 0.0);

        let n = docs.len() as f64;
        let avg = docs.iter().map(|(_, d)| d.len()).sum::<usize>() as f64 / n;
        let terms: BTreeSet<&str> = query.iter().map(|w| VOCAB[*w]).collect();
        let mut expected = Vec::new();
        for (id, words) in &docs {
            if !words.iter().any(|w| terms.contains(w.as_str())) {
                continue;
            }
            let mut score = 0.0;
            for term in &terms {
                let tf = words.iter().filter(|w| w == term).count() as f64;
                if tf == 0.0 {
                    continue;
                }
                let df = docs.iter().filter(|(_, d)| d.iter().any(|w| w == term)).count() as f64;
                let idf = ((n - df + 0.5) / (df + 0.5)).ln().max(0.0);
                let norm = if avg > 0.0 { words.len() as f64 / avg } else { 0.0 };
                score += idf * tf * 2.2 / (tf + 1.2 * (0.25 + 0.75 * norm));
            }
            expected.push((id.clone(), score));
        }
        expected.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        expected.truncate(k);
        prop_assert_eq!(hits.len(), expected.len());
        for (hit, (id, score)) in hits.iter().zip(&expected) {
            prop_assert_eq!(&hit.node_id, id);
            prop_assert!((hit.score - score).abs() < 1e-9);
        }
    }

    #[test]
    fn vector_search_takes_best_entry_per_owner(
        vectors in prop::collection::vec((prop::collection::vec(-3.0f64..3.0, 4), 0usize..5), 0..12),
        query in prop::collection::vec(-3.0f64..3.0, 4),
        threshold in -1.0f64..1.0,
    ) {
        let entries: Vec<VectorEntry> = vectors
            .iter()
            .enumerate()
            .map(|(i, (v, owner))| VectorEntry {
                node_id: NodeId::new(format!("e{i:02}")),
                owner_id: NodeId::new(format!("o{owner}")),
                vector: EmbeddingVector::new(v.clone()),
            })
            .collect();
        let index = VectorIndex::from_entries(4, entries).unwrap();
        let q = EmbeddingVector::new(query.clone());
        let hits = index.search(&q, 100, threshold).unwrap();

        let qn = query.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut best: BTreeMap<String, f64> = BTreeMap::new();
        for (v, owner) in &vectors {
            let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let cos = if qn == 0.0 || vn == 0.0 { 0.0 } else { v.iter().zip(&query).map(|(a, b)| a * b).sum::<f64>() / (qn * vn) };
            let slot = best.entry(format!("o{owner}")).or_insert(f64::NEG_INFINITY);
            *slot = slot.max(cos);
        }
        let mut expected: Vec<(String, f64)> = best.into_iter().filter(|(_, s)| *s >= threshold).collect();
        expected.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        prop_assert_eq!(hits.len(), expected.len());
        for (hit, (id, score)) in hits.iter().zip(&expected) {
            prop_assert_eq!(hit.node_id.as_str(), id.as_str());
            prop_assert!((hit.score - score).abs() < 1e-9);
        }
    }

    #[test]
    fn hashing_vectors_are_unit_or_zero(text in ".{0,60}") {
        let v = HashingEmbedder::default().vector(&text);
        if tokenize_identifier(&text).is_empty() {
            prop_assert!(v.is_zero());
        } else {
            prop_assert!((v.norm() - 1.0).abs() < 1e-9);
            prop_assert!((v.cosine(&v) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn tokens_are_lowercase_and_nonempty(text in ".{0,40}") {
        for token in tokenize_identifier(&text) {
            prop_assert!(!token.is_empty());
            prop_assert!(token.chars().all(|c| c.is_alphanumeric()));
            prop_assert_eq!(token.to_lowercase(), token.clone());
        }
    }
}
