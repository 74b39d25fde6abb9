//! Prompt context rendering, prompt assembly and code extraction.

pub mod llm;
pub mod prompts;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::graph::{induced_subgraph, CodeGraph, Node, NodeId, Subgraph};
use crate::parser::is_valid_python;
use llm::{LlmClient, LlmError, Message, Purpose};
use prompts::{render, PromptCatalog};

pub const DEFAULT_CONTEXT_BUDGET: usize = 24_000;
pub const EMPTY_CONTEXT: &str = "### CONTEXT\n(no repository context retrieved)\n";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptContext {
    pub context_text: String,
    pub node_count: usize,
    pub edge_count: usize,
    pub truncated: bool,
}

fn location(node: &Node) -> String {
    match &node.span {
        Some(span) => format!("{}:{}", span.file_path, span.line_range()),
        None => "?".to_string(),
    }
}

fn render_blocks(graph: &CodeGraph, sub: &Subgraph) -> String {
    if sub.is_empty() {
        return EMPTY_CONTEXT.to_string();
    }
    let mut nodes: Vec<&Node> = sub.node_ids.iter().filter_map(|id| graph.node(id.as_str())).collect();
    nodes.sort_by(|a, b| (a.kind, &a.id).cmp(&(b.kind, &b.id)));

    let mut out = String::new();
    for node in nodes {
        let _ = writeln!(out, "### {} {} ({})", node.kind, node.qualified_name, location(node));
        if node.kind.is_code() {
            let _ = writeln!(out, "```python\n{}\n```", node.text.trim_end());
        } else {
            let _ = writeln!(out, "{}", node.text.trim_end());
        }
        out.push('\n');
    }
    out.push_str("### RELATIONS\n");
    let qn = |id: &NodeId| {
        graph
            .node(id.as_str())
            .map_or_else(|| id.to_string(), |n| n.qualified_name.clone())
    };
    let mut edges = sub.edges.clone();
    edges.sort();
    for edge in &edges {
        let _ = writeln!(out, "{} -[{}]-> {}", qn(&edge.src), edge.rel, qn(&edge.dst));
    }
    out
}

/// Render with the default budget and no node scores.
pub fn serialize_subgraph(graph: &CodeGraph, sub: &Subgraph) -> PromptContext {
    serialize_subgraph_with(graph, sub, &BTreeMap::new(), DEFAULT_CONTEXT_BUDGET)
}

/// Render a subgraph as prompt context of at most `budget` characters.
///
/// Over budget, non-seed nodes are dropped lowest score first (missing
/// scores count as 0, ties drop the larger id first) and the remainder is
/// re-rendered. If the seeds alone still do not fit, the text is cut.
pub fn serialize_subgraph_with(
    graph: &CodeGraph,
    sub: &Subgraph,
    scores: &BTreeMap<NodeId, f64>,
    budget: usize,
) -> PromptContext {
    let text = render_blocks(graph, sub);
    if text.chars().count() <= budget {
        return PromptContext {
            context_text: text,
            node_count: sub.node_ids.len(),
            edge_count: sub.edges.len(),
            truncated: false,
        };
    }

    let seeds: BTreeSet<NodeId> = sub.seed_ids.iter().cloned().collect();
    let mut droppable: Vec<&NodeId> = sub.node_ids.iter().filter(|id| !seeds.contains(*id)).collect();
    let score = |id: &NodeId| scores.get(id).copied().unwrap_or(0.0);
    droppable.sort_by(|a, b| score(a).total_cmp(&score(b)).then_with(|| b.cmp(a)));

    let mut kept: BTreeSet<NodeId> = sub.node_ids.iter().cloned().collect();
    let mut current = sub.clone();
    for id in droppable {
        kept.remove(id);
        current = induced_subgraph(
            graph,
            sub.node_ids.iter().filter(|n| kept.contains(*n)).cloned().collect(),
            &seeds,
        );
        let text = render_blocks(graph, &current);
        if text.chars().count() <= budget {
            return PromptContext {
                context_text: text,
                node_count: current.node_ids.len(),
                edge_count: current.edges.len(),
                truncated: true,
            };
        }
    }
    let text: String = render_blocks(graph, &current).chars().take(budget).collect();
    PromptContext {
        context_text: text,
        node_count: current.node_ids.len(),
        edge_count: current.edges.len(),
        truncated: true,
    }
}

/// System prompt plus user prompt carrying the context and the task.
pub fn build_generation_prompt(query: &str, ctx: &PromptContext, prompts: &PromptCatalog) -> Vec<Message> {
    vec![
        Message::system(prompts.generate_system.trim_end()),
        Message::user(render(
            &prompts.generate_user,
            &[("context", &ctx.context_text), ("query", query)],
        )),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extraction {
    Fenced,
    Whole,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedCode {
    pub code_text: String,
    pub raw_response: String,
    pub extraction: Extraction,
}

#[derive(Debug, thiserror::Error)]
pub enum GenerationError {
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error("no code in response: {reason}")]
    Extraction { reason: String, raw_response: String },
}

fn first_fenced_block(response: &str) -> Option<&str> {
    let open = response.find("```")?;
    let after = &response[open + 3..];
    let body_start = after.find('\n').map_or(after.len(), |i| i + 1);
    let body = &after[body_start..];
    let mut offset = 0;
    for line in body.split_inclusive('\n') {
        if line.trim_start().starts_with("```") {
            return Some(&body[..offset]);
        }
        offset += line.len();
    }
    Some(body)
}

fn strip_blank_edges(code: &str) -> &str {
    let code = code.trim_end();
    let first_content = code
        .split_inclusive('\n')
        .take_while(|l| l.trim().is_empty())
        .map(str::len)
        .sum::<usize>();
    &code[first_content..]
}

/// Pull code out of a model response: the first fenced block, or the whole
/// trimmed response when it is valid Python.
pub fn extract_code(response: &str) -> Result<(String, Extraction), String> {
    if let Some(block) = first_fenced_block(response) {
        let code = strip_blank_edges(block);
        if code.is_empty() {
            return Err("first fenced block is empty".into());
        }
        return Ok((code.to_string(), Extraction::Fenced));
    }
    let whole = response.trim();
    if whole.is_empty() {
        return Err("empty response".into());
    }
    if !is_valid_python(whole) {
        return Err("response has no fenced block and is not valid Python".into());
    }
    Ok((whole.to_string(), Extraction::Whole))
}

/// Send the prompt and extract code from the answer. `reference` is passed
/// through to the client for scripted benchmark mocks.
pub fn generate_code(
    messages: Vec<Message>,
    llm: &dyn LlmClient,
    reference: Option<String>,
) -> Result<GeneratedCode, GenerationError> {
    let exchange = llm.send(messages, Purpose::Generate, reference)?;
    match extract_code(&exchange.response_text) {
        Ok((code_text, extraction)) => Ok(GeneratedCode {
            code_text,
            raw_response: exchange.response_text,
            extraction,
        }),
        Err(reason) => Err(GenerationError::Extraction {
            reason,
            raw_response: exchange.response_text,
        }),
    }
}
