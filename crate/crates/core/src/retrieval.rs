//! Hybrid retrieval: query entity extraction, seed search over both indexes,
//! n-hop expansion and similarity filtering.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::generation::llm::{LlmClient, Message, Purpose};
use crate::generation::prompts::{render, PromptCatalog};
use crate::graph::{
    induced_subgraph, n_hop_subgraph, CodeGraph, GraphError, Node, NodeId, NodeKind, Relation, Subgraph,
};
use crate::index::{rank, EmbedError, Embedder, IndexError, Indexes, ScoredHit};
use crate::parser::summarize_code;

const EXTRACT_SYSTEM: &str =
    "You map programming requests onto code knowledge graph entities and answer with JSON only.";

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct QueryEntities {
    pub classes: Vec<String>,
    pub functions: Vec<String>,
    pub methods: Vec<String>,
    pub modules: Vec<String>,
}

impl QueryEntities {
    pub fn is_empty(&self) -> bool {
        self.classes.is_empty() && self.functions.is_empty() && self.methods.is_empty() && self.modules.is_empty()
    }

    /// Classes, functions, methods, then modules.
    pub fn identifiers(&self) -> impl Iterator<Item = &str> {
        self.classes
            .iter()
            .chain(&self.functions)
            .chain(&self.methods)
            .chain(&self.modules)
            .map(String::as_str)
    }

    fn cleaned(self) -> Self {
        let clean = |list: Vec<String>| {
            let mut seen = BTreeSet::new();
            list.into_iter()
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty() && seen.insert(s.clone()))
                .collect()
        };
        QueryEntities {
            classes: clean(self.classes),
            functions: clean(self.functions),
            methods: clean(self.methods),
            modules: clean(self.modules),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RetrievalConfig {
    pub seed_k: usize,
    pub hops: usize,
    pub filter_k: usize,
    pub fulltext_threshold: f64,
    pub vector_threshold: f64,
}

impl Default for RetrievalConfig {
    fn default() -> Self {
        RetrievalConfig {
            seed_k: 10,
            hops: 2,
            filter_k: 25,
            fulltext_threshold: 0.0,
            vector_threshold: 0.25,
        }
    }
}

/// Node counts after each pipeline stage.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetrievalDiagnostics {
    pub entity_count: usize,
    pub fulltext_hits: usize,
    pub vector_hits: usize,
    pub seeds: usize,
    pub seed_ids: Vec<NodeId>,
    pub hops: usize,
    pub expanded_nodes: usize,
    pub expanded_edges: usize,
    pub filtered_nodes: usize,
    pub filtered_edges: usize,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalResult {
    pub query: String,
    pub entities: QueryEntities,
    pub seed_hits: Vec<ScoredHit>,
    pub subgraph: Subgraph,
    pub node_scores: BTreeMap<NodeId, f64>,
    pub diagnostics: RetrievalDiagnostics,
}

#[derive(Debug, thiserror::Error)]
pub enum RetrievalError {
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Textual description of node kinds and relations for the extraction prompt.
pub fn schema_description() -> String {
    let kinds: Vec<&str> = NodeKind::ALL.iter().map(|k| k.as_str()).collect();
    let relations: Vec<&str> = Relation::ALL.iter().map(|r| r.as_str()).collect();
    format!(
        "Node kinds: {}.\nRelations: {}.\nModules are dotted file paths such as pkg.module.",
        kinds.join(", "),
        relations.join(", ")
    )
}

fn is_identifier(word: &str) -> bool {
    let mut chars = word.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn is_lower_identifier(word: &str) -> bool {
    is_identifier(word) && !word.chars().any(char::is_uppercase) && word.chars().any(char::is_alphabetic)
}

fn is_camel_case(word: &str) -> bool {
    is_identifier(word)
        && word.starts_with(|c: char| c.is_uppercase())
        && word.chars().any(char::is_lowercase)
        && word.chars().skip(1).any(char::is_uppercase)
}

fn is_capitalized(word: &str) -> bool {
    is_identifier(word) && word.starts_with(|c: char| c.is_uppercase())
}

fn is_module_path(word: &str) -> bool {
    word.contains('.') && word.split('.').all(is_lower_identifier)
}

const STOPWORDS: &[&str] = &[
    "a",
    "an",
    "the",
    "this",
    "that",
    "these",
    "those",
    "new",
    "same",
    "each",
    "every",
    "which",
    "what",
    "to",
    "of",
    "for",
    "in",
    "on",
    "with",
    "is",
    "as",
    "and",
    "or",
    "it",
    "its",
    "helper",
    "existing",
    "class",
    "function",
    "method",
    "module",
    "use",
    "using",
    "call",
    "calls",
    "write",
    "implement",
];

fn is_stopword(word: &str) -> bool {
    STOPWORDS.contains(&word)
}

fn push_unique(list: &mut Vec<String>, word: &str) {
    if !list.iter().any(|w| w == word) {
        list.push(word.to_string());
    }
}

/// Rule-based entity extraction used when no LLM answer is available.
pub fn heuristic_entities(query: &str) -> QueryEntities {
    let words: Vec<&str> = query
        .split_whitespace()
        .map(|w| w.trim_matches(|c: char| !(c.is_alphanumeric() || c == '_' || c == '(' || c == ')')))
        .map(|w| w.trim_start_matches('(').trim_end_matches('.'))
        .collect();
    let bare = |w: &str| w.trim_end_matches("()").to_string();
    let mut entities = QueryEntities::default();
    for (i, raw) in words.iter().enumerate() {
        let word = bare(raw);
        let word = word.trim_end_matches(')');
        let prev = i.checked_sub(1).map(|j| bare(words[j]).to_lowercase());
        let next = words.get(i + 1).map(|w| bare(w).to_lowercase());
        let near = |keys: &[&str]| {
            prev.as_deref().is_some_and(|p| keys.contains(&p)) || next.as_deref().is_some_and(|n| keys.contains(&n))
        };

        if is_module_path(word) {
            push_unique(&mut entities.modules, word);
        } else if is_camel_case(word) || (is_capitalized(word) && near(&["class", "classes"])) {
            push_unique(&mut entities.classes, word);
        } else if raw.ends_with("()") && is_identifier(word) {
            push_unique(&mut entities.functions, word);
        } else if is_lower_identifier(word) && !is_stopword(word) {
            if near(&["method", "methods"]) {
                push_unique(&mut entities.methods, word);
            } else if near(&["function", "functions"]) {
                push_unique(&mut entities.functions, word);
            }
        }
    }
    entities
}

fn parse_entities(response: &str) -> Option<QueryEntities> {
    let start = response.find('{')?;
    let value = serde_json::Deserializer::from_str(&response[start..])
        .into_iter::<serde_json::Value>()
        .next()?
        .ok()?;
    let object = value.as_object()?;
    if !["classes", "functions", "methods", "modules"]
        .iter()
        .any(|k| object.contains_key(*k))
    {
        return None;
    }
    serde_json::from_value::<QueryEntities>(value).ok()
}

/// Ask the LLM which schema elements the query names; fall back to
/// [`heuristic_entities`] when the call fails or the answer is unusable.
pub fn extract_query_entities(query: &str, llm: &dyn LlmClient, prompts: &PromptCatalog) -> QueryEntities {
    let prompt = render(
        &prompts.extract_entities,
        &[("schema", &schema_description()), ("query", query)],
    );
    let messages = vec![Message::system(EXTRACT_SYSTEM), Message::user(prompt)];
    let parsed = match llm.send(messages, Purpose::ExtractEntities, None) {
        Ok(exchange) => parse_entities(&exchange.response_text),
        Err(err) => {
            log::debug!("entity extraction falls back to heuristics: {err}");
            None
        }
    };
    parsed.unwrap_or_else(|| heuristic_entities(query)).cleaned()
}

/// Union of full-text hits for the entity names and vector hits for the
/// query, each capped at `seed_k`; a node found twice keeps its best score.
pub fn initial_retrieval(
    indexes: &Indexes,
    embedder: &dyn Embedder,
    query: &str,
    entities: &QueryEntities,
    config: &RetrievalConfig,
) -> Result<(Vec<ScoredHit>, usize, usize), RetrievalError> {
    let entity_query = entities.identifiers().collect::<Vec<_>>().join(" ");
    let fulltext = indexes
        .fulltext
        .search(&entity_query, config.seed_k, config.fulltext_threshold);
    let query_vector = embedder.embed(query)?;
    let vector = indexes
        .vector
        .search(&query_vector, config.seed_k, config.vector_threshold)?;
    let counts = (fulltext.len(), vector.len());

    let mut best: BTreeMap<NodeId, ScoredHit> = BTreeMap::new();
    for hit in fulltext.into_iter().chain(vector) {
        match best.get(&hit.node_id) {
            Some(existing) if existing.score >= hit.score => {}
            _ => {
                best.insert(hit.node_id.clone(), hit);
            }
        }
    }
    Ok((
        rank(best.into_values().collect(), usize::MAX, f64::NEG_INFINITY),
        counts.0,
        counts.1,
    ))
}

pub fn expand_seeds(graph: &CodeGraph, seeds: &BTreeSet<NodeId>, hops: usize) -> Result<Subgraph, GraphError> {
    n_hop_subgraph(graph, seeds, hops)
}

/// Text embedded to rank a node during filtering.
pub fn scoring_text(node: &Node) -> String {
    match node.kind.entity_kind() {
        None => node.text.clone(),
        Some(kind) => {
            let start_col = node.span.as_ref().map_or(0, |s| s.start_col);
            let summary = summarize_code(kind, &node.text, start_col);
            [
                node.name.as_str(),
                summary.signature.as_str(),
                summary.docstring.as_deref().unwrap_or(""),
            ]
            .into_iter()
            .filter(|part| !part.is_empty())
            .collect::<Vec<_>>()
            .join("\n")
        }
    }
}

/// Keep the seeds plus the non-seeds most similar to the query, up to
/// `filter_k` nodes in total, ordered by (score desc, id asc).
pub fn filter_subgraph(
    graph: &CodeGraph,
    sub: &Subgraph,
    query: &str,
    config: &RetrievalConfig,
    embedder: &dyn Embedder,
) -> Result<(Subgraph, BTreeMap<NodeId, f64>), RetrievalError> {
    let query_vector = embedder.embed(query)?;
    let nodes: Vec<&Node> = sub.node_ids.iter().filter_map(|id| graph.node(id.as_str())).collect();
    let texts: Vec<String> = nodes.iter().map(|n| scoring_text(n)).collect();
    let text_refs: Vec<&str> = texts.iter().map(String::as_str).collect();
    let vectors = embedder.embed_batch(&text_refs)?;
    let mut scored: Vec<(NodeId, f64)> = nodes
        .iter()
        .zip(&vectors)
        .map(|(node, vector)| (node.id.clone(), query_vector.cosine(vector)))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    let seeds: BTreeSet<NodeId> = sub.seed_ids.iter().cloned().collect();
    let mut room = config.filter_k.saturating_sub(seeds.len());
    let kept: Vec<(NodeId, f64)> = scored
        .into_iter()
        .filter(|(id, _)| {
            if seeds.contains(id) {
                true
            } else if room > 0 {
                room -= 1;
                true
            } else {
                false
            }
        })
        .collect();
    let scores: BTreeMap<NodeId, f64> = kept.iter().cloned().collect();
    let filtered = induced_subgraph(graph, kept.into_iter().map(|(id, _)| id).collect(), &seeds);
    Ok((filtered, scores))
}

/// Expansion and filtering from known seeds, skipping entity extraction and
/// index search.
pub fn retrieve_from_seeds(
    graph: &CodeGraph,
    embedder: &dyn Embedder,
    query: &str,
    seeds: &BTreeSet<NodeId>,
    config: &RetrievalConfig,
) -> Result<RetrievalResult, RetrievalError> {
    let mut diagnostics = RetrievalDiagnostics {
        seeds: seeds.len(),
        seed_ids: seeds.iter().cloned().collect(),
        hops: config.hops,
        ..Default::default()
    };
    let expanded = expand_seeds(graph, seeds, config.hops)?;
    diagnostics.expanded_nodes = expanded.node_ids.len();
    diagnostics.expanded_edges = expanded.edges.len();
    let (subgraph, node_scores) = filter_subgraph(graph, &expanded, query, config, embedder)?;
    diagnostics.filtered_nodes = subgraph.node_ids.len();
    diagnostics.filtered_edges = subgraph.edges.len();
    if seeds.is_empty() {
        diagnostics
            .notes
            .push("no seed nodes; retrieved context is empty".into());
    }
    Ok(RetrievalResult {
        query: query.to_string(),
        entities: QueryEntities::default(),
        seed_hits: Vec::new(),
        subgraph,
        node_scores,
        diagnostics,
    })
}

/// Full pipeline: entities, seeds, expansion, filtering.
pub fn retrieve(
    graph: &CodeGraph,
    indexes: &Indexes,
    embedder: &dyn Embedder,
    llm: &dyn LlmClient,
    prompts: &PromptCatalog,
    query: &str,
    config: &RetrievalConfig,
) -> Result<RetrievalResult, RetrievalError> {
    let entities = extract_query_entities(query, llm, prompts);
    let (seed_hits, fulltext_hits, vector_hits) = initial_retrieval(indexes, embedder, query, &entities, config)?;
    let seeds: BTreeSet<NodeId> = seed_hits.iter().map(|h| h.node_id.clone()).collect();
    let mut result = retrieve_from_seeds(graph, embedder, query, &seeds, config)?;
    result.diagnostics.entity_count = entities.identifiers().count();
    result.diagnostics.fulltext_hits = fulltext_hits;
    result.diagnostics.vector_hits = vector_hits;
    result.entities = entities;
    result.seed_hits = seed_hits;
    Ok(result)
}
