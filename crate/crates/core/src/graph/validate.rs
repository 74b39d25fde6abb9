use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{CodeGraph, Edge, NodeKind, Relation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub edge: Edge,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.edge, self.message)
    }
}

fn endpoint_kinds_allowed(rel: Relation, src: NodeKind, dst: NodeKind) -> bool {
    use NodeKind::*;
    match rel {
        Relation::DefinesClass => src == File && dst == Class,
        Relation::DefinesFunction => matches!(src, File | Class | Function) && dst == Function,
        Relation::HasMethod => src == Class && dst == Method,
        Relation::HasAttribute => src == Class && dst == Attribute,
        Relation::UsedIn => src.is_code() && dst.is_code(),
        Relation::HasDescription => src.is_code() && dst == GeneratedDescription,
        Relation::HasDocumentation => src.is_code() && dst == Documentation,
    }
}

/// Check relation endpoint kinds and edge uniqueness. Violations are data.
pub fn validate_schema(graph: &CodeGraph) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut counts: BTreeMap<&Edge, usize> = BTreeMap::new();
    for edge in graph.edges() {
        *counts.entry(edge).or_default() += 1;
        let (Some(src), Some(dst)) = (graph.node(edge.src.as_str()), graph.node(edge.dst.as_str())) else {
            violations.push(Violation {
                edge: edge.clone(),
                message: "endpoint missing from graph".into(),
            });
            continue;
        };
        if !endpoint_kinds_allowed(edge.rel, src.kind, dst.kind) {
            violations.push(Violation {
                edge: edge.clone(),
                message: format!("{} may not connect {} to {}", edge.rel, src.kind, dst.kind),
            });
        }
    }
    for (edge, count) in counts {
        if count > 1 {
            violations.push(Violation {
                edge: edge.clone(),
                message: format!("duplicate edge appears {count} times"),
            });
        }
    }
    violations
}
