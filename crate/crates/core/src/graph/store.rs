//! JSONL graph file: one header line, then node records sorted by id, then
//! edge records sorted by (src, rel, dst).

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CodeGraph, Edge, GraphError, Node, NodeId, NodeKind, Relation};
use crate::parser::SourceSpan;

const FORMAT: &str = "codegraph";
const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "t")]
enum Record {
    #[serde(rename = "n")]
    Node {
        id: String,
        kind: String,
        name: String,
        qn: String,
        path: Option<String>,
        span: Option<[usize; 4]>,
        text: String,
    },
    #[serde(rename = "e")]
    Edge { src: String, rel: String, dst: String },
}

fn node_record(node: &Node) -> Record {
    Record::Node {
        id: node.id.to_string(),
        kind: node.kind.as_str().to_string(),
        name: node.name.clone(),
        qn: node.qualified_name.clone(),
        path: node.span.as_ref().map(|s| s.file_path.clone()),
        span: node
            .span
            .as_ref()
            .map(|s| [s.start_line, s.start_col, s.end_line, s.end_col]),
        text: node.text.clone(),
    }
}

/// Serialize a graph to its JSONL text. Output is byte-deterministic.
pub fn to_jsonl(graph: &CodeGraph) -> String {
    let mut out = String::new();
    let header = Header {
        format: FORMAT.into(),
        version: VERSION,
    };
    let records = graph
        .nodes()
        .map(node_record)
        .chain(graph.edges().iter().map(|e| Record::Edge {
            src: e.src.to_string(),
            rel: e.rel.as_str().to_string(),
            dst: e.dst.to_string(),
        }));
    out.push_str(&serde_json::to_string(&header).expect("header serializes"));
    out.push('\n');
    for record in records {
        out.push_str(&serde_json::to_string(&record).expect("records serialize"));
        out.push('\n');
    }
    out
}

/// Parse graph JSONL text; errors carry the 1-based line number.
pub fn from_jsonl(text: &str) -> Result<CodeGraph, GraphError> {
    let format_err = |line: usize, message: String| GraphError::Format { line, message };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines.next().ok_or_else(|| format_err(1, "missing header".into()))?;
    let header: Header = serde_json::from_str(first).map_err(|e| format_err(1, format!("bad header: {e}")))?;
    if header.format != FORMAT || header.version != VERSION {
        return Err(format_err(
            1,
            format!("unsupported format {} version {}", header.format, header.version),
        ));
    }

    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (line_no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(line).map_err(|e| format_err(line_no, e.to_string()))?;
        match record {
            Record::Node {
                id,
                kind,
                name,
                qn,
                path,
                span,
                text,
            } => {
                let kind: NodeKind = kind.parse().map_err(|e| format_err(line_no, e))?;
                let span = match (path, span) {
                    (Some(file_path), Some([start_line, start_col, end_line, end_col])) => Some(SourceSpan {
                        file_path,
                        start_line,
                        start_col,
                        end_line,
                        end_col,
                    }),
                    (None, None) => None,
                    _ => return Err(format_err(line_no, "path and span must be given together".into())),
                };
                nodes.push(Node {
                    id: NodeId::new(id),
                    kind,
                    name,
                    qualified_name: qn,
                    span,
                    text,
                });
            }
            Record::Edge { src, rel, dst } => {
                let rel: Relation = rel.parse().map_err(|e| format_err(line_no, e))?;
                edges.push(Edge::new(src, rel, dst));
            }
        }
    }
    CodeGraph::new(nodes, edges)
}

pub fn persist_graph(graph: &CodeGraph, path: &Path) -> Result<(), GraphError> {
    std::fs::write(path, to_jsonl(graph)).map_err(|source| GraphError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_graph(path: &Path) -> Result<CodeGraph, GraphError> {
    let text = std::fs::read_to_string(path).map_err(|source| GraphError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_jsonl(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::test_support::node;

    #[test]
    fn empty_graph_round_trip() {
        let g = CodeGraph::default();
        let text = to_jsonl(&g);
        assert_eq!(text, "{\"format\":\"codegraph\",\"version\":1}\n");
        assert_eq!(from_jsonl(&text).unwrap(), g);
    }

    #[test]
    fn record_layout() {
        let mut f = node("m.f", NodeKind::Function);
        f.span = Some(SourceSpan {
            file_path: "m.py".into(),
            start_line: 1,
            start_col: 0,
            end_line: 2,
            end_col: 12,
        });
        f.text = "def f():\n    return 1".into();
        let g = CodeGraph::new(
            vec![node("m", NodeKind::File), f],
            vec![Edge::new("m", Relation::DefinesFunction, "m.f")],
        )
        .unwrap();
        let text = to_jsonl(&g);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[1],
            r#"{"t":"n","id":"m","kind":"File","name":"m","qn":"m","path":null,"span":null,"text":""}"#
        );
        assert_eq!(
            lines[2],
            r#"{"t":"n","id":"m.f","kind":"Function","name":"f","qn":"m.f","path":"m.py","span":[1,0,2,12],"text":"def f():\n    return 1"}"#
        );
        assert_eq!(lines[3], r#"{"t":"e","src":"m","rel":"DEFINES_FUNCTION","dst":"m.f"}"#);
        assert_eq!(from_jsonl(&text).unwrap(), g);
    }

    #[test]
    fn unknown_relation_cites_line() {
        let text = "{\"format\":\"codegraph\",\"version\":1}\n\
            {\"t\":\"n\",\"id\":\"a\",\"kind\":\"File\",\"name\":\"a\",\"qn\":\"a\",\"path\":null,\"span\":null,\"text\":\"\"}\n\
            {\"t\":\"e\",\"src\":\"a\",\"rel\":\"OWNS\",\"dst\":\"a\"}\n";
        let err = from_jsonl(text).unwrap_err();
        assert_eq!(err.to_string(), "line 3: unknown relation \"OWNS\"");
    }

    #[test]
    fn malformed_record_and_kind_errors() {
        let bad_json = "{\"format\":\"codegraph\",\"version\":1}\n{not json\n";
        assert!(matches!(from_jsonl(bad_json), Err(GraphError::Format { line: 2, .. })));
        let bad_kind = "{\"format\":\"codegraph\",\"version\":1}\n{\"t\":\"n\",\"id\":\"a\",\"kind\":\"Module\",\"name\":\"a\",\"qn\":\"a\",\"path\":null,\"span\":null,\"text\":\"\"}\n";
        assert!(from_jsonl(bad_kind).unwrap_err().to_string().contains("Module"));
        assert!(matches!(from_jsonl(""), Err(GraphError::Format { line: 1, .. })));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.jsonl");
        let g = CodeGraph::new(vec![node("x", NodeKind::File)], vec![]).unwrap();
        persist_graph(&g, &path).unwrap();
        assert_eq!(load_graph(&path).unwrap(), g);
        assert!(load_graph(&dir.path().join("missing.jsonl")).is_err());
    }
}
