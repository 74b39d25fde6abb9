//! Acceptance criteria, one PASS/FAIL line each. Built without the libtest
//! harness so every line reaches the test log.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use codegraph_core::eval::{blank_body, load_samples, splice_body};
use codegraph_core::generation::llm::MockLlm;
use codegraph_core::generation::prompts::PromptCatalog;
use codegraph_core::graph::{
    build_graph, load_graph, n_hop_subgraph, persist_graph, validate_schema, CodeGraph, Edge, Node, NodeId, NodeKind,
    Relation,
};
use codegraph_core::index::{
    tokenize_identifier, Bm25Params, EmbeddingVector, FullTextIndex, HashingEmbedder, Indexes, VectorEntry, VectorIndex,
};
use codegraph_core::parser::{parse_file, resolve_usages, scan_repository, SourceSpan};
use codegraph_core::pipeline::index_repository;
use codegraph_core::retrieval::{expand_seeds, retrieve, RetrievalConfig};

type Check = fn() -> Result<String, String>;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn codegraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_codegraph"))
        .args(args)
        .env_remove("CODEGRAPH_LLM")
        .env_remove("CODEGRAPH_EMBEDDER")
        .output()
        .expect("codegraph binary runs")
}

fn stdout_of(output: &Output) -> Result<String, String> {
    if output.status.success() {
        Ok(String::from_utf8_lossy(&output.stdout).into_owned())
    } else {
        Err(format!(
            "exit {:?}: {}",
            output.status.code(),
            String::from_utf8_lossy(&output.stderr)
        ))
    }
}

fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize) -> CodeGraph {
    let n = rng.gen_range(1..=max_nodes);
    let alphabet: Vec<char> = "abcXYZ_ .\"\\é\n\t{}".chars().collect();
    let word = |rng: &mut ChaCha8Rng, len: usize| -> String {
        (0..rng.gen_range(0..=len))
            .map(|_| *alphabet.choose(rng).unwrap())
            .collect()
    };
    let nodes = (0..n)
        .map(|i| Node {
            id: NodeId::new(format!("pkg.m{i:02}")),
            kind: *NodeKind::ALL.choose(rng).unwrap(),
            name: word(rng, 6),
            qualified_name: format!("pkg.m{i:02}.{}", word(rng, 4)),
            span: rng.gen_bool(0.7).then(|| {
                let start = rng.gen_range(1..100);
                SourceSpan {
                    file_path: format!("pkg/m{i}.py"),
                    start_line: start,
                    start_col: rng.gen_range(0..8),
                    end_line: start + rng.gen_range(0..40),
                    end_col: rng.gen_range(0..80),
                }
            }),
            text: word(rng, 30),
        })
        .collect();
    let edges = (0..rng.gen_range(0..=2 * n))
        .map(|_| {
            Edge::new(
                format!("pkg.m{:02}", rng.gen_range(0..n)),
                *Relation::ALL.choose(rng).unwrap(),
                format!("pkg.m{:02}", rng.gen_range(0..n)),
            )
        })
        .collect();
    CodeGraph::new(nodes, edges).expect("random graph is well formed")
}

fn graph_construction() -> Result<String, String> {
    let started = Instant::now();
    let root = fixtures().join("mini_repo");
    let include = vec!["**/*.py".to_string()];
    let scan = scan_repository(&root, &include, &[]).map_err(|e| e.to_string())?;
    let parses: Vec<_> = scan.files.iter().map(|f| parse_file(&f.path, &f.text)).collect();
    let bare = build_graph(&parses, &resolve_usages(&parses).usages).map_err(|e| e.to_string())?;
    let full = index_repository(&root, &include, &[], &MockLlm::offline(), &PromptCatalog::builtin())
        .map_err(|e| e.to_string())?
        .graph;
    let elapsed = started.elapsed();
    let counts = [
        bare.node_count(),
        bare.edge_count(),
        full.node_count(),
        full.edge_count(),
    ];
    ensure(counts == [13, 14, 19, 20], || format!("counts {counts:?}"))?;
    let violations = validate_schema(&bare).len() + validate_schema(&full).len();
    ensure(violations == 0, || format!("{violations} schema violations"))?;
    ensure(elapsed < Duration::from_secs(2), || format!("took {elapsed:?}"))?;
    Ok(format!("13/14 then 19/20, 0 violations, {elapsed:.2?}"))
}

fn bfs_reference(graph: &CodeGraph, seeds: &BTreeSet<NodeId>, hops: usize) -> BTreeSet<NodeId> {
    let mut adjacency: BTreeMap<&NodeId, Vec<&NodeId>> = BTreeMap::new();
    for e in graph.edges() {
        adjacency.entry(&e.src).or_default().push(&e.dst);
        adjacency.entry(&e.dst).or_default().push(&e.src);
    }
    let mut dist: BTreeMap<&NodeId, usize> = seeds.iter().map(|s| (s, 0)).collect();
    let mut queue: VecDeque<&NodeId> = seeds.iter().collect();
    while let Some(current) = queue.pop_front() {
        let d = dist[current];
        for next in adjacency.get(current).into_iter().flatten() {
            if !dist.contains_key(next) {
                dist.insert(next, d + 1);
                queue.push_back(next);
            }
        }
    }
    dist.into_iter()
        .filter(|(_, d)| *d <= hops)
        .map(|(id, _)| id.clone())
        .collect()
}

fn bfs_oracle() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut cases = 0;
    for _ in 0..250 {
        let graph = random_graph(&mut rng, 50);
        let ids: Vec<NodeId> = graph.nodes().map(|n| n.id.clone()).collect();
        for hops in 0..4 {
            let seeds: BTreeSet<NodeId> = (0..rng.gen_range(1..=3))
                .map(|_| ids.choose(&mut rng).unwrap().clone())
                .collect();
            let sub = n_hop_subgraph(&graph, &seeds, hops).map_err(|e| e.to_string())?;
            let expected = bfs_reference(&graph, &seeds, hops);
            let got: BTreeSet<NodeId> = sub.node_ids.iter().cloned().collect();
            ensure(got == expected, || {
                format!("hops={hops} seeds={seeds:?}: got {got:?}, want {expected:?}")
            })?;
            let edges: Vec<&Edge> = graph
                .edges()
                .iter()
                .filter(|e| expected.contains(&e.src) && expected.contains(&e.dst))
                .collect();
            ensure(sub.edges.iter().collect::<Vec<_>>() == edges, || {
                "induced edges differ".into()
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} cases over 250 graphs agree"))
}

fn bm25_oracle() -> Result<String, String> {
    const VOCAB: [&str; 10] = [
        "parse", "load", "graph", "node", "edge", "query", "index", "vector", "token", "path",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut compared = 0;
    for corpus in 0..120 {
        let n_docs = rng.gen_range(1..=100);
        let mut docs: Vec<(NodeId, Vec<String>)> = Vec::new();
        for i in 0..n_docs {
            let words = if i > 0 && rng.gen_bool(0.15) {
                docs[rng.gen_range(0..i)].1.clone()
            } else {
                (0..rng.gen_range(0..12))
                    .map(|_| VOCAB.choose(&mut rng).unwrap().to_string())
                    .collect()
            };
            docs.push((NodeId::new(format!("doc{i:03}")), words));
        }
        let index = FullTextIndex::from_documents(docs.clone(), Bm25Params::default());
        let query: Vec<&str> = (0..rng.gen_range(1..=4))
            .map(|_| *VOCAB.choose(&mut rng).unwrap())
            .collect();
        let k = rng.gen_range(1..=30);
        let got = index.search(&query.join(" "), k, 0.0);

        let (k1, b) = (1.2, 0.75);
        let n = docs.len() as f64;
        let avgdl = docs.iter().map(|(_, w)| w.len() as f64).sum::<f64>() / n;
        let terms: BTreeSet<&str> = query.iter().copied().collect();
        let mut want: Vec<(NodeId, f64)> = Vec::new();
        for (id, words) in &docs {
            let mut matched = false;
            let mut score = 0.0;
            for term in &terms {
                let tf = words.iter().filter(|w| w.as_str() == *term).count() as f64;
                if tf == 0.0 {
                    continue;
                }
                matched = true;
                let df = docs
                    .iter()
                    .filter(|(_, w)| w.iter().any(|x| x.as_str() == *term))
                    .count() as f64;
                let idf = ((n - df + 0.5) / (df + 0.5)).ln().max(0.0);
                let dl = words.len() as f64;
                score += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * dl / avgdl));
            }
            if matched {
                want.push((id.clone(), score));
            }
        }
        want.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
        want.truncate(k);
        ensure(got.len() == want.len(), || {
            format!("corpus {corpus}: {} hits, want {}", got.len(), want.len())
        })?;
        for (hit, (id, score)) in got.iter().zip(&want) {
            ensure(&hit.node_id == id, || {
                format!("corpus {corpus}: order {} vs {id}", hit.node_id)
            })?;
            ensure((hit.score - score).abs() < 1e-9, || {
                format!("corpus {corpus}: {} vs {score}", hit.score)
            })?;
            compared += 1;
        }
    }
    Ok(format!("120 corpora, {compared} ranked hits match"))
}

/// Independent copy of the hashing embedder's bucket and sign rule.
fn reference_embedding(text: &str, dim: usize) -> Vec<f64> {
    let mut signed = vec![0.0; dim];
    let mut unsigned = vec![0.0; dim];
    let tokens = tokenize_identifier(text);
    for token in &tokens {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in token.bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h ^= h >> 33;
        h = h.wrapping_mul(0xff51_afd7_ed55_8ccd);
        h ^= h >> 33;
        h = h.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
        h ^= h >> 33;
        let slot = (h % dim as u64) as usize;
        signed[slot] += if h & (1 << 63) != 0 { -1.0 } else { 1.0 };
        unsigned[slot] += 1.0;
    }
    let raw = if !tokens.is_empty() && signed.iter().all(|v| *v == 0.0) {
        unsigned
    } else {
        signed
    };
    let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        raw
    } else {
        raw.iter().map(|v| v / norm).collect()
    }
}

fn cosine_oracle() -> Result<String, String> {
    const WORDS: [&str; 12] = [
        "circle",
        "area",
        "radius",
        "parseConfig",
        "HTTPServer",
        "load_graph",
        "sum",
        "mean",
        "split",
        "token",
        "v2",
        "index",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let sentence = |rng: &mut ChaCha8Rng| -> String {
        (0..rng.gen_range(1..8))
            .map(|_| *WORDS.choose(rng).unwrap())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let embedder = HashingEmbedder::default();
    for _ in 0..300 {
        let text = sentence(&mut rng);
        let v = embedder.vector(&text);
        let norm = v.values().iter().map(|x| x * x).sum::<f64>().sqrt();
        ensure((norm - 1.0).abs() < 1e-9, || format!("norm {norm} for {text:?}"))?;
        let reference = reference_embedding(&text, 256);
        let close = v.values().iter().zip(&reference).all(|(a, b)| (a - b).abs() < 1e-12);
        ensure(close, || format!("embedding differs from reference for {text:?}"))?;
    }

    for case in 0..150 {
        let dim = [4, 16, 256][case % 3];
        let n = rng.gen_range(0..40);
        let owners = rng.gen_range(1..10);
        let mut entries = Vec::new();
        for i in 0..n {
            let values: Vec<f64> = if dim == 256 {
                reference_embedding(&sentence(&mut rng), dim)
            } else if rng.gen_bool(0.05) {
                vec![0.0; dim]
            } else {
                (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
            };
            entries.push((
                format!("n{i:02}#doc"),
                format!("o{:02}", rng.gen_range(0..owners)),
                values,
            ));
        }
        let query: Vec<f64> = if dim == 256 {
            reference_embedding(&sentence(&mut rng), dim)
        } else {
            (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
        };
        let k = rng.gen_range(1..12);
        let threshold = if rng.gen_bool(0.5) {
            0.0
        } else {
            rng.gen_range(-0.5..0.5)
        };
        let index = VectorIndex::from_entries(
            dim,
            entries
                .iter()
                .map(|(id, owner, v)| VectorEntry {
                    node_id: NodeId::new(id.as_str()),
                    owner_id: NodeId::new(owner.as_str()),
                    vector: EmbeddingVector::new(v.clone()),
                })
                .collect(),
        )
        .map_err(|e| e.to_string())?;
        let got = index
            .search(&EmbeddingVector::new(query.clone()), k, threshold)
            .map_err(|e| e.to_string())?;

        let qn = query.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut best: BTreeMap<&str, f64> = BTreeMap::new();
        for (_, owner, v) in &entries {
            let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let cos = if qn == 0.0 || vn == 0.0 {
                0.0
            } else {
                (v.iter().zip(&query).map(|(a, b)| a * b).sum::<f64>() / (qn * vn)).clamp(-1.0, 1.0)
            };
            let slot = best.entry(owner.as_str()).or_insert(f64::NEG_INFINITY);
            *slot = slot.max(cos);
        }
        let mut want: Vec<(&str, f64)> = best.into_iter().filter(|(_, s)| *s >= threshold).collect();
        want.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(y.0)));
        want.truncate(k);
        let got_ids: Vec<&str> = got.iter().map(|h| h.node_id.as_str()).collect();
        let want_ids: Vec<&str> = want.iter().map(|(id, _)| *id).collect();
        ensure(got_ids == want_ids, || {
            format!("case {case}: {got_ids:?} vs {want_ids:?}")
        })?;
        for (hit, (_, score)) in got.iter().zip(&want) {
            ensure((hit.score - score).abs() < 1e-9, || {
                format!("case {case}: {} vs {score}", hit.score)
            })?;
        }
    }
    Ok("300 unit-norm embeddings, 150 indexes match".into())
}

const FIXTURE_QUERIES: [&str; 15] = [
    "compute the area of a circle",
    "add two numbers using the add function",
    "subtract one integer from another",
    "Circle perimeter",
    "what does main do",
    "the main function",
    "the area method of Circle",
    "app.main",
    "radius attribute of the Circle class",
    "util.add",
    "shapes module",
    "make it faster",
    "sum of a and b",
    "print the area",
    "the sub() helper",
];

fn retrieval_determinism() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let graph_path = dir.path().join("graph.jsonl");
    let root = fixtures().join("mini_repo");
    let base = [
        "--repo-root",
        root.to_str().unwrap(),
        "--graph",
        graph_path.to_str().unwrap(),
    ];
    stdout_of(&codegraph(&[&base[..], &["index"]].concat()))?;
    let query = |q: &str| stdout_of(&codegraph(&[&base[..], &["query", q, "--json"]].concat()));
    for q in FIXTURE_QUERIES.iter().take(3) {
        let first = query(q)?;
        let second = query(q)?;
        ensure(first == second, || format!("{q:?}: outputs differ"))?;
        ensure(!first.contains(dir.path().to_str().unwrap()), || {
            "output contains temp path".into()
        })?;
    }

    let graph = load_graph(&graph_path).map_err(|e| e.to_string())?;
    let embedder = HashingEmbedder::default();
    let indexes = Indexes::build(&graph, &embedder).map_err(|e| e.to_string())?;
    let config = RetrievalConfig {
        filter_k: 6,
        ..RetrievalConfig::default()
    };
    let mut nonempty = 0;
    for q in FIXTURE_QUERIES {
        let result = retrieve(
            &graph,
            &indexes,
            &embedder,
            &MockLlm::offline(),
            &PromptCatalog::builtin(),
            q,
            &config,
        )
        .map_err(|e| e.to_string())?;
        let seeds: BTreeSet<NodeId> = result.seed_hits.iter().map(|h| h.node_id.clone()).collect();
        let expanded: BTreeSet<NodeId> = expand_seeds(&graph, &seeds, config.hops)
            .map_err(|e| e.to_string())?
            .node_ids
            .into_iter()
            .collect();
        let filtered: BTreeSet<NodeId> = result.subgraph.node_ids.iter().cloned().collect();
        ensure(seeds.is_subset(&expanded), || format!("{q:?}: seeds outside expansion"))?;
        ensure(filtered.is_subset(&expanded), || {
            format!("{q:?}: filtered outside expansion")
        })?;
        ensure(seeds.is_subset(&filtered), || format!("{q:?}: a seed was pruned"))?;
        let d = &result.diagnostics;
        ensure(
            d.seeds <= d.expanded_nodes && d.filtered_nodes <= d.expanded_nodes,
            || format!("{q:?}: counts {d:?}"),
        )?;
        if !seeds.is_empty() {
            nonempty += 1;
        }
    }
    ensure(nonempty >= 10, || format!("only {nonempty} queries found seeds"))?;
    Ok(format!(
        "byte-identical JSON; {} queries monotone, {nonempty} seeded",
        FIXTURE_QUERIES.len()
    ))
}

fn persistence() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let fixture = index_repository(
        &fixtures().join("mini_repo"),
        &["**/*.py".to_string()],
        &[],
        &MockLlm::offline(),
        &PromptCatalog::builtin(),
    )
    .map_err(|e| e.to_string())?
    .graph;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut graphs = vec![fixture];
    graphs.extend((0..150).map(|_| random_graph(&mut rng, 40)));
    for (i, graph) in graphs.iter().enumerate() {
        let a = dir.path().join(format!("{i}a.jsonl"));
        let b = dir.path().join(format!("{i}b.jsonl"));
        persist_graph(graph, &a).map_err(|e| e.to_string())?;
        let loaded = load_graph(&a).map_err(|e| e.to_string())?;
        ensure(&loaded == graph, || format!("graph {i} changed on reload"))?;
        persist_graph(&loaded, &b).map_err(|e| e.to_string())?;
        let (ba, bb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        ensure(ba == bb, || format!("graph {i} bytes differ"))?;
    }
    Ok(format!("fixture plus {} random graphs round-trip", graphs.len() - 1))
}

fn splice_round_trip() -> Result<String, String> {
    let (samples, _) = load_samples(&fixtures().join("bench/samples.jsonl")).map_err(|e| e.to_string())?;
    for s in &samples {
        let original = std::fs::read_to_string(s.repo_root.join(&s.file_path)).map_err(|e| e.to_string())?;
        let blanked = blank_body(&original, &s.file_path, &s.namespace)?;
        let restored = splice_body(&blanked.text, &s.file_path, &s.namespace, &blanked.original_body)?;
        ensure(restored == original, || format!("{} differs after splice", s.sample_id))?;
    }
    ensure(samples.len() >= 5, || format!("only {} targets", samples.len()))?;
    Ok(format!("{} targets restored byte-for-byte", samples.len()))
}

fn run_eval(llm: &str, report: &Path) -> Result<serde_json::Value, String> {
    let samples = fixtures().join("bench/samples.jsonl");
    stdout_of(&codegraph(&[
        "--llm",
        llm,
        "eval",
        samples.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]))?;
    let text = std::fs::read_to_string(report).map_err(|e| e.to_string())?;
    serde_json::from_str(&text).map_err(|e| e.to_string())
}

fn end_to_end_pass_at_1() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let started = Instant::now();
    let echo = run_eval("mock:echo-reference", &dir.path().join("echo.json"))?;
    let echo_time = started.elapsed();
    let stub = run_eval("mock:always-pass-keyword", &dir.path().join("stub.json"))?;
    let total = echo["total"].as_u64().unwrap_or(0);
    ensure(total >= 5, || format!("{total} samples"))?;
    ensure(echo["pass_at_1"].as_f64() == Some(1.0), || {
        format!("echo pass@1 {}", echo["pass_at_1"])
    })?;
    ensure(stub["pass_at_1"].as_f64() == Some(0.0), || {
        format!("stub pass@1 {}", stub["pass_at_1"])
    })?;
    ensure(echo_time < Duration::from_secs(60), || {
        format!("echo batch took {echo_time:?}")
    })?;
    Ok(format!(
        "{total} samples: 1.0 echo, 0.0 pass-keyword, echo batch {echo_time:.2?}"
    ))
}

fn two_hop_conformance() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let report = run_eval("mock:echo-reference", &dir.path().join("report.json"))?;
    let (samples, _) = load_samples(&fixtures().join("bench/samples.jsonl")).map_err(|e| e.to_string())?;
    let outcomes = report["outcomes"].as_array().ok_or("report has no outcomes")?;
    ensure(outcomes.len() == samples.len(), || "outcome count".into())?;
    for sample in &samples {
        let outcome = outcomes
            .iter()
            .find(|o| o["sample_id"] == sample.sample_id.as_str())
            .ok_or_else(|| format!("{} missing", sample.sample_id))?;
        let d = &outcome["retrieval"];
        ensure(d["seed_ids"] == serde_json::json!([sample.namespace]), || {
            format!("{}: seeds {}", sample.sample_id, d["seed_ids"])
        })?;
        ensure(d["hops"] == 2, || format!("{}: hops {}", sample.sample_id, d["hops"]))?;
    }
    Ok(format!("{} samples seeded by their target with hops=2", samples.len()))
}

fn main() -> ExitCode {
    let checks: [(&str, Check); 9] = [
        ("graph construction", graph_construction),
        ("BFS oracle", bfs_oracle),
        ("BM25 oracle", bm25_oracle),
        ("cosine oracle", cosine_oracle),
        ("retrieval determinism and monotonicity", retrieval_determinism),
        ("persistence round-trip", persistence),
        ("blank/splice round-trip", splice_round_trip),
        ("end-to-end pass@1", end_to_end_pass_at_1),
        ("two-hop protocol", two_hop_conformance),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (name, check) in checks {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {message}"))
        });
        match result {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", checks.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
