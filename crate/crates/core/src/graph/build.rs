use std::collections::{BTreeSet, HashMap};

use super::{CodeGraph, Edge, GraphError, Node, NodeId, NodeKind, Relation};
use crate::parser::{CodeEntity, EntityKind, FileParse, SourceSpan, UsageRef};

fn location(span: &SourceSpan) -> String {
    format!("{}:{}:{}", span.file_path, span.start_line, span.start_col)
}

fn code_node(entity: &CodeEntity) -> Node {
    Node {
        id: NodeId::new(entity.qualified_name.clone()),
        kind: entity.kind.into(),
        name: entity.name.clone(),
        qualified_name: entity.qualified_name.clone(),
        span: Some(entity.span.clone()),
        text: entity.source_text.clone(),
    }
}

/// Materialize the schema graph for one repository snapshot.
pub fn build_graph(parses: &[FileParse], usages: &[UsageRef]) -> Result<CodeGraph, GraphError> {
    let mut ordered: Vec<&FileParse> = parses.iter().collect();
    ordered.sort_by(|a, b| a.file.span.file_path.cmp(&b.file.span.file_path));

    let mut seen: HashMap<&str, &SourceSpan> = HashMap::new();
    let mut nodes = Vec::new();
    let mut edges = BTreeSet::new();

    for parse in ordered {
        let file_qn = parse.file.qualified_name.as_str();
        for entity in std::iter::once(&parse.file).chain(&parse.entities) {
            if let Some(first) = seen.insert(entity.qualified_name.as_str(), &entity.span) {
                return Err(GraphError::DuplicateQualifiedName {
                    qualified_name: entity.qualified_name.clone(),
                    first: location(first),
                    second: location(&entity.span),
                });
            }
            nodes.push(code_node(entity));

            if let Some(doc) = entity.docstring.as_deref().filter(|d| !d.trim().is_empty()) {
                let doc_id = NodeId::documentation_of(&entity.qualified_name);
                nodes.push(Node {
                    id: doc_id.clone(),
                    kind: NodeKind::Documentation,
                    name: entity.name.clone(),
                    qualified_name: doc_id.to_string(),
                    span: Some(entity.span.clone()),
                    text: doc.to_string(),
                });
                edges.insert(Edge::new(
                    entity.qualified_name.as_str(),
                    Relation::HasDocumentation,
                    doc_id,
                ));
            }

            let parent = entity.parent_qualified_name.as_deref().unwrap_or(file_qn);
            let structural = match entity.kind {
                EntityKind::File => None,
                EntityKind::Class => Some(Relation::DefinesClass),
                EntityKind::Function => Some(Relation::DefinesFunction),
                EntityKind::Method => Some(Relation::HasMethod),
                EntityKind::Attribute => Some(Relation::HasAttribute),
            };
            if let Some(rel) = structural {
                edges.insert(Edge::new(parent, rel, entity.qualified_name.as_str()));
            }
        }
    }

    for usage in usages {
        let (used, user) = (usage.used_qualified_name.as_str(), usage.user_qualified_name.as_str());
        if used != user && seen.contains_key(used) && seen.contains_key(user) {
            edges.insert(Edge::new(used, Relation::UsedIn, user));
        }
    }

    CodeGraph::new(nodes, edges.into_iter().collect())
}
