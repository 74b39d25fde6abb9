//! Repository scanning and Python entity extraction.
//!
//! Source files are parsed with tree-sitter; every class, function, method and
//! class attribute becomes a [`CodeEntity`] addressed by its dotted qualified
//! name. Call and attribute-access sites are kept as [`ReferenceSite`]s so that
//! [`resolve_usages`] can link them across files once the whole snapshot has
//! been parsed.

mod python;
mod scan;
mod span;
mod usages;

use serde::{Deserialize, Serialize};

pub use python::{is_valid_python, locate_body, module_path, parse_file, summarize_code, BodyLocation, CodeSummary};
pub use scan::{scan_repository, ScanResult, SourceFile};
pub use span::{LineIndex, SourceSpan};
pub use usages::{resolve_usages, UsageResolution};

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("repository root {0} does not exist or is not a directory")]
    MissingRoot(String),
    #[error("invalid glob pattern {pattern:?}: {message}")]
    BadGlob { pattern: String, message: String },
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityKind {
    File,
    Class,
    Method,
    Function,
    Attribute,
}

impl EntityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntityKind::File => "File",
            EntityKind::Class => "Class",
            EntityKind::Method => "Method",
            EntityKind::Function => "Function",
            EntityKind::Attribute => "Attribute",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeEntity {
    pub kind: EntityKind,
    pub name: String,
    pub qualified_name: String,
    pub span: SourceSpan,
    /// Header text of a `def` or `class` up to and including the colon.
    pub signature: String,
    pub docstring: Option<String>,
    pub source_text: String,
    /// Enclosing class or function. Top-level entities have no parent; their
    /// file is implied by `span.file_path`.
    pub parent_qualified_name: Option<String>,
}

/// A call or attribute access found inside an entity body, not yet resolved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceSite {
    /// Dotted identifier chain, e.g. `["os", "path", "join"]`.
    pub chain: Vec<String>,
    pub user_qualified_name: String,
    /// Qualified names of the enclosing functions, innermost first.
    pub function_scopes: Vec<String>,
    /// Class bound to `self`/`cls` at this site, if inside a method.
    pub self_class: Option<String>,
    pub is_call: bool,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comment {
    pub span: SourceSpan,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Import {
    pub local_alias: String,
    pub imported_qualified_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileParse {
    pub file: CodeEntity,
    pub entities: Vec<CodeEntity>,
    pub comments: Vec<Comment>,
    pub imports: Vec<Import>,
    pub references: Vec<ReferenceSite>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UsageRef {
    pub user_qualified_name: String,
    pub used_qualified_name: String,
    pub span: SourceSpan,
}
