//! Functional descriptions of classes, methods and functions, stored as
//! `GeneratedDescription` nodes. An LLM writes them when available; a
//! deterministic template stands in otherwise.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::generation::llm::{LlmClient, Message, Purpose};
use crate::generation::prompts::{render, PromptCatalog};
use crate::graph::{CodeGraph, Edge, GraphError, Node, NodeId, NodeKind, Relation};
use crate::parser::summarize_code;

const DESCRIBE_SYSTEM: &str = "You write short, accurate functional descriptions of Python code.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DescriptionOrigin {
    Llm,
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptionRecord {
    pub owner_id: NodeId,
    pub text: String,
    pub origin: DescriptionOrigin,
}

#[derive(Debug, thiserror::Error)]
pub enum DescriptionError {
    #[error("{id} is a {kind} node; only classes, methods and functions are described")]
    NotDescribable { id: NodeId, kind: NodeKind },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn is_describable(kind: NodeKind) -> bool {
    matches!(kind, NodeKind::Class | NodeKind::Method | NodeKind::Function)
}

/// `<kind> `<qn>`(<params>): <first doc line>. Calls: <callees>.`
pub fn fallback_description(node: &Node) -> String {
    let start_col = node.span.as_ref().map_or(0, |s| s.start_col);
    let summary = node
        .kind
        .entity_kind()
        .map(|kind| summarize_code(kind, &node.text, start_col))
        .unwrap_or_default();
    let doc = summary
        .docstring
        .as_deref()
        .and_then(|d| d.lines().map(str::trim).find(|l| !l.is_empty()))
        .unwrap_or("no documentation");
    let calls = if summary.callees.is_empty() {
        "none".to_string()
    } else {
        summary.callees.join(", ")
    };
    format!(
        "{} `{}`({}): {}. Calls: {}.",
        node.kind,
        node.qualified_name,
        summary.params.join(", "),
        doc,
        calls
    )
}

/// Describe one class, method or function node.
pub fn generate_description(
    node: &Node,
    llm: &dyn LlmClient,
    prompts: &PromptCatalog,
) -> Result<DescriptionRecord, DescriptionError> {
    if !is_describable(node.kind) {
        return Err(DescriptionError::NotDescribable {
            id: node.id.clone(),
            kind: node.kind,
        });
    }
    let start_col = node.span.as_ref().map_or(0, |s| s.start_col);
    let summary = node
        .kind
        .entity_kind()
        .map(|kind| summarize_code(kind, &node.text, start_col))
        .unwrap_or_default();
    let prompt = render(
        &prompts.describe,
        &[
            ("kind", node.kind.as_str()),
            ("qualified_name", &node.qualified_name),
            ("signature", &summary.signature),
            ("docstring", summary.docstring.as_deref().unwrap_or("(none)")),
            ("source", &node.text),
        ],
    );
    let messages = vec![Message::system(DESCRIBE_SYSTEM), Message::user(prompt)];
    let from_llm = match llm.send(messages, Purpose::Describe, None) {
        Ok(exchange) => Some(exchange.response_text.trim().to_string()).filter(|t| !t.is_empty()),
        Err(err) => {
            log::debug!("description of {} falls back: {err}", node.id);
            None
        }
    };
    Ok(match from_llm {
        Some(text) => DescriptionRecord {
            owner_id: node.id.clone(),
            text,
            origin: DescriptionOrigin::Llm,
        },
        None => DescriptionRecord {
            owner_id: node.id.clone(),
            text: fallback_description(node),
            origin: DescriptionOrigin::Fallback,
        },
    })
}

/// Add one description node and `HAS_DESCRIPTION` edge per class, method and
/// function that does not have one yet. Generation runs on the current rayon
/// pool; merging follows ascending node id.
pub fn attach_descriptions(
    graph: &CodeGraph,
    llm: &dyn LlmClient,
    prompts: &PromptCatalog,
) -> Result<(CodeGraph, Vec<DescriptionRecord>), DescriptionError> {
    let pending: Vec<&Node> = graph
        .nodes()
        .filter(|n| is_describable(n.kind))
        .filter(|n| !graph.contains(NodeId::description_of(n.id.as_str()).as_str()))
        .collect();
    if pending.is_empty() {
        return Ok((graph.clone(), Vec::new()));
    }
    let records = pending
        .par_iter()
        .map(|node| generate_description(node, llm, prompts))
        .collect::<Result<Vec<_>, _>>()?;

    let mut nodes = Vec::with_capacity(records.len());
    let mut edges = Vec::with_capacity(records.len());
    for (owner, record) in pending.iter().zip(&records) {
        let id = NodeId::description_of(owner.id.as_str());
        nodes.push(Node {
            id: id.clone(),
            kind: NodeKind::GeneratedDescription,
            name: owner.name.clone(),
            qualified_name: id.to_string(),
            span: owner.span.clone(),
            text: record.text.clone(),
        });
        edges.push(Edge::new(owner.id.clone(), Relation::HasDescription, id));
    }
    Ok((graph.extended(nodes, edges)?, records))
}
