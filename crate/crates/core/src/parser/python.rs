use std::collections::HashSet;

use tree_sitter::{Node, Parser, Tree};

use super::span::{LineIndex, SourceSpan};
use super::{CodeEntity, Comment, EntityKind, FileParse, Import, ReferenceSite};

pub(crate) fn parse_tree(source: &str) -> Tree {
    let mut parser = Parser::new();
    parser
        .set_language(&tree_sitter_python::LANGUAGE.into())
        .expect("bundled python grammar is ABI compatible");
    parser
        .parse(source, None)
        .expect("parsing without a timeout always yields a tree")
}

/// Whether `source` parses as Python without syntax errors.
pub fn is_valid_python(source: &str) -> bool {
    !parse_tree(source).root_node().has_error()
}

/// Dotted module path for a repository-relative file path.
///
/// `pkg/sub/mod.py` becomes `pkg.sub.mod`; `pkg/__init__.py` becomes `pkg`.
pub fn module_path(path: &str) -> String {
    let trimmed = path.strip_suffix(".py").unwrap_or(path);
    let mut parts: Vec<&str> = trimmed.split('/').filter(|p| !p.is_empty()).collect();
    if parts.len() > 1 && parts.last() == Some(&"__init__") {
        parts.pop();
    }
    parts.join(".")
}

fn text<'s>(node: Node, src: &'s str) -> &'s str {
    &src[node.byte_range()]
}

fn named_children(node: Node) -> Vec<Node> {
    let mut cursor = node.walk();
    node.named_children(&mut cursor).collect()
}

fn children(node: Node) -> Vec<Node> {
    let mut cursor = node.walk();
    node.children(&mut cursor).collect()
}

/// Identifier chain of `a`, `a.b.c`; `None` when any link is not a plain name.
fn chain_of(node: Node, src: &str) -> Option<Vec<String>> {
    match node.kind() {
        "identifier" => Some(vec![text(node, src).to_string()]),
        "attribute" => {
            let mut chain = chain_of(node.child_by_field_name("object")?, src)?;
            chain.push(text(node.child_by_field_name("attribute")?, src).to_string());
            Some(chain)
        }
        _ => None,
    }
}

/// Python string literal to its contents, cleaned like `inspect.cleandoc`.
fn string_literal_value(literal: &str) -> String {
    let body = literal.trim_start_matches(|c: char| c.is_ascii_alphabetic());
    let inner = ["\"\"\"", "'''", "\"", "'"]
        .iter()
        .find_map(|q| body.strip_prefix(q).and_then(|b| b.strip_suffix(q)))
        .unwrap_or(body);
    clean_doc(inner)
}

fn clean_doc(raw: &str) -> String {
    let raw = raw.replace('\t', "        ");
    let lines: Vec<&str> = raw.lines().collect();
    if lines.is_empty() {
        return String::new();
    }
    let margin = lines[1..]
        .iter()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.len() - l.trim_start().len())
        .min()
        .unwrap_or(0);
    let mut out: Vec<String> = Vec::with_capacity(lines.len());
    out.push(lines[0].trim_start().to_string());
    for line in &lines[1..] {
        out.push(line.get(margin..).unwrap_or("").trim_end().to_string());
    }
    while out.last().is_some_and(|l| l.trim().is_empty()) {
        out.pop();
    }
    while out.first().is_some_and(|l| l.trim().is_empty()) {
        out.remove(0);
    }
    out.join("\n")
}

fn docstring_statement(block: Node) -> Option<Node> {
    let first = named_children(block).into_iter().find(|n| n.kind() != "comment")?;
    if first.kind() != "expression_statement" {
        return None;
    }
    let inner = named_children(first);
    (inner.len() == 1 && inner[0].kind() == "string").then_some(first)
}

fn docstring_of(block: Node, src: &str) -> Option<String> {
    let stmt = docstring_statement(block)?;
    let literal = named_children(stmt)[0];
    Some(string_literal_value(text(literal, src)))
}

/// Header of a definition, from its first byte through the block colon.
fn header_of(node: Node, src: &str) -> String {
    let colon = children(node).into_iter().find(|c| c.kind() == ":");
    match colon {
        Some(colon) => src[node.start_byte()..colon.end_byte()].to_string(),
        None => text(node, src).lines().next().unwrap_or("").to_string(),
    }
}

fn parameter_name(node: Node, src: &str) -> Option<String> {
    match node.kind() {
        "identifier" => Some(text(node, src).to_string()),
        "list_splat_pattern" => named_children(node).first().map(|n| format!("*{}", text(*n, src))),
        "dictionary_splat_pattern" => named_children(node).first().map(|n| format!("**{}", text(*n, src))),
        "default_parameter" | "typed_default_parameter" => parameter_name(node.child_by_field_name("name")?, src),
        "typed_parameter" => named_children(node).first().and_then(|n| parameter_name(*n, src)),
        _ => None,
    }
}

fn parameter_names(def: Node, src: &str) -> Vec<String> {
    def.child_by_field_name("parameters")
        .map(|params| {
            named_children(params)
                .into_iter()
                .filter_map(|p| parameter_name(p, src))
                .collect()
        })
        .unwrap_or_default()
}

fn collect_callees(node: Node, src: &str, out: &mut Vec<String>) {
    if node.kind() == "call" {
        if let Some(function) = node.child_by_field_name("function") {
            let name = match function.kind() {
                "identifier" => Some(text(function, src)),
                "attribute" => function.child_by_field_name("attribute").map(|a| text(a, src)),
                _ => None,
            };
            if let Some(name) = name {
                if !out.iter().any(|n| n == name) {
                    out.push(name.to_string());
                }
            }
        }
    }
    for child in named_children(node) {
        collect_callees(child, src, out);
    }
}

fn first_error(node: Node) -> Option<Node> {
    if node.is_error() || node.is_missing() {
        return Some(node);
    }
    if !node.has_error() {
        return None;
    }
    named_children(node)
        .into_iter()
        .chain(children(node))
        .find_map(first_error)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ScopeKind {
    Module,
    Class,
    Function,
    Method,
    /// Body of something that is not extracted; uses credit the enclosing entity.
    Opaque,
}

#[derive(Clone)]
struct Scope {
    kind: ScopeKind,
    owner: String,
    parent: Option<String>,
    function_scopes: Vec<String>,
    self_class: Option<String>,
    init_class: Option<String>,
    depth: usize,
}

impl Scope {
    fn opaque(&self) -> Scope {
        Scope {
            kind: ScopeKind::Opaque,
            init_class: None,
            ..self.clone()
        }
    }
}

struct Extractor<'s> {
    src: &'s str,
    path: &'s str,
    module: String,
    is_package: bool,
    lines: LineIndex,
    entities: Vec<(usize, usize, CodeEntity)>,
    attribute_candidates: Vec<(usize, usize, CodeEntity)>,
    taken: HashSet<String>,
    references: Vec<ReferenceSite>,
    imports: Vec<Import>,
    comments: Vec<Comment>,
    diagnostics: Vec<String>,
}

impl<'s> Extractor<'s> {
    fn span_of_bytes(&self, start: usize, end: usize) -> SourceSpan {
        let (sr, sc) = self.lines.position(start);
        let (er, ec) = self.lines.position(end);
        SourceSpan {
            file_path: self.path.to_string(),
            start_line: sr + 1,
            start_col: sc,
            end_line: er + 1,
            end_col: ec,
        }
    }

    fn span(&self, node: Node) -> SourceSpan {
        self.span_of_bytes(node.start_byte(), node.end_byte())
    }

    fn line_of(&self, node: Node) -> usize {
        node.start_position().row + 1
    }

    fn walk(&mut self, node: Node, scope: &Scope) {
        match node.kind() {
            "function_definition" => self.function(node, scope),
            "class_definition" => self.class(node, scope),
            "decorated_definition" => {
                for child in named_children(node) {
                    self.walk(child, scope);
                }
            }
            "import_statement" => self.import(node),
            "import_from_statement" => self.import_from(node),
            "future_import_statement" => {}
            "comment" => {
                if node.parent().is_some_and(|p| p.kind() == "module") {
                    self.comments.push(Comment {
                        span: self.span(node),
                        text: text(node, self.src).to_string(),
                    });
                }
            }
            "call" => self.call(node, scope),
            "attribute" => match chain_of(node, self.src) {
                Some(chain) => self.reference(chain, node, scope, false),
                None => {
                    if let Some(object) = node.child_by_field_name("object") {
                        self.walk(object, scope);
                    }
                }
            },
            "assignment" => self.assignment(node, scope),
            _ => {
                for child in named_children(node) {
                    self.walk(child, scope);
                }
            }
        }
    }

    fn reference(&mut self, chain: Vec<String>, site: Node, scope: &Scope, is_call: bool) {
        self.references.push(ReferenceSite {
            chain,
            user_qualified_name: scope.owner.clone(),
            function_scopes: scope.function_scopes.clone(),
            self_class: scope.self_class.clone(),
            is_call,
            span: self.span(site),
        });
    }

    fn call(&mut self, node: Node, scope: &Scope) {
        if let Some(function) = node.child_by_field_name("function") {
            match chain_of(function, self.src) {
                Some(chain) => self.reference(chain, node, scope, true),
                None => self.walk(function, scope),
            }
        }
        if let Some(arguments) = node.child_by_field_name("arguments") {
            self.walk(arguments, scope);
        }
    }

    fn assignment(&mut self, node: Node, scope: &Scope) {
        let left = node.child_by_field_name("left");
        let mut left_is_definition = false;
        if let Some(left) = left {
            if scope.kind == ScopeKind::Class {
                for name in assigned_names(left, self.src) {
                    self.attribute_candidate(&scope.owner, &name, node, scope.depth);
                }
            } else if let Some(class) = scope.init_class.clone() {
                if let Some(chain) = chain_of(left, self.src) {
                    if chain.len() == 2 && chain[0] == "self" {
                        self.attribute_candidate(&class, &chain[1], node, scope.depth);
                        left_is_definition = true;
                    }
                }
            }
        }
        for child in named_children(node) {
            if left_is_definition && Some(child) == left {
                continue;
            }
            self.walk(child, scope);
        }
    }

    fn attribute_candidate(&mut self, class: &str, name: &str, node: Node, depth: usize) {
        let entity = CodeEntity {
            kind: EntityKind::Attribute,
            name: name.to_string(),
            qualified_name: format!("{class}.{name}"),
            span: self.span(node),
            signature: String::new(),
            docstring: None,
            source_text: text(node, self.src).to_string(),
            parent_qualified_name: Some(class.to_string()),
        };
        self.attribute_candidates.push((node.start_byte(), depth + 1, entity));
    }

    fn claim(&mut self, qualified_name: &str, node: Node) -> bool {
        if self.taken.insert(qualified_name.to_string()) {
            true
        } else {
            self.diagnostics.push(format!(
                "{}:{}: duplicate definition of {} ignored",
                self.path,
                self.line_of(node),
                qualified_name
            ));
            false
        }
    }

    fn function(&mut self, node: Node, scope: &Scope) {
        let Some(name_node) = node.child_by_field_name("name") else {
            return;
        };
        let name = text(name_node, self.src).to_string();
        let body = node.child_by_field_name("body");
        let kind = match scope.kind {
            ScopeKind::Module | ScopeKind::Function => Some(EntityKind::Function),
            ScopeKind::Class => Some(EntityKind::Method),
            ScopeKind::Method | ScopeKind::Opaque => None,
        };
        let qualified_name = format!("{}.{}", scope.owner, name);
        let extracted = match kind {
            Some(_) => self.claim(&qualified_name, node),
            None => {
                self.diagnostics.push(format!(
                    "{}:{}: function {} nested in a method is not extracted",
                    self.path,
                    self.line_of(node),
                    name
                ));
                false
            }
        };

        for field in ["parameters", "return_type"] {
            if let Some(child) = node.child_by_field_name(field) {
                self.walk(child, scope);
            }
        }
        let Some(body) = body else { return };
        if !extracted {
            self.walk(body, &scope.opaque());
            return;
        }
        let kind = kind.expect("extracted definitions have a kind");
        let parent = match scope.kind {
            ScopeKind::Module => None,
            _ => scope.parent.clone(),
        };
        self.entities.push((
            node.start_byte(),
            scope.depth + 1,
            CodeEntity {
                kind,
                name: name.clone(),
                qualified_name: qualified_name.clone(),
                span: self.span(node),
                signature: header_of(node, self.src),
                docstring: docstring_of(body, self.src),
                source_text: text(node, self.src).to_string(),
                parent_qualified_name: parent,
            },
        ));

        let mut function_scopes = vec![qualified_name.clone()];
        function_scopes.extend(scope.function_scopes.iter().cloned());
        let is_method = kind == EntityKind::Method;
        let inner = Scope {
            kind: if is_method {
                ScopeKind::Method
            } else {
                ScopeKind::Function
            },
            owner: qualified_name.clone(),
            parent: Some(qualified_name),
            function_scopes,
            self_class: if is_method {
                Some(scope.owner.clone())
            } else {
                scope.self_class.clone()
            },
            init_class: (is_method && name == "__init__").then(|| scope.owner.clone()),
            depth: scope.depth + 1,
        };
        self.walk(body, &inner);
    }

    fn class(&mut self, node: Node, scope: &Scope) {
        let Some(name_node) = node.child_by_field_name("name") else {
            return;
        };
        let name = text(name_node, self.src).to_string();
        let qualified_name = format!("{}.{}", scope.owner, name);
        let extracted = if scope.kind == ScopeKind::Module {
            self.claim(&qualified_name, node)
        } else {
            self.diagnostics.push(format!(
                "{}:{}: nested class {} is not extracted",
                self.path,
                self.line_of(node),
                name
            ));
            false
        };
        let Some(body) = node.child_by_field_name("body") else {
            return;
        };
        if !extracted {
            let mut opaque = scope.opaque();
            opaque.self_class = None;
            if let Some(bases) = node.child_by_field_name("superclasses") {
                self.walk(bases, &opaque);
            }
            self.walk(body, &opaque);
            return;
        }
        self.entities.push((
            node.start_byte(),
            scope.depth + 1,
            CodeEntity {
                kind: EntityKind::Class,
                name,
                qualified_name: qualified_name.clone(),
                span: self.span(node),
                signature: header_of(node, self.src),
                docstring: docstring_of(body, self.src),
                source_text: text(node, self.src).to_string(),
                parent_qualified_name: None,
            },
        ));
        let inner = Scope {
            kind: ScopeKind::Class,
            owner: qualified_name.clone(),
            parent: Some(qualified_name),
            function_scopes: Vec::new(),
            self_class: None,
            init_class: None,
            depth: scope.depth + 1,
        };
        if let Some(bases) = node.child_by_field_name("superclasses") {
            self.walk(bases, &inner);
        }
        self.walk(body, &inner);
    }

    fn import(&mut self, node: Node) {
        for child in named_children(node) {
            match child.kind() {
                "dotted_name" => {
                    let full = text(child, self.src);
                    let head = full.split('.').next().unwrap_or(full);
                    self.imports.push(Import {
                        local_alias: head.to_string(),
                        imported_qualified_name: head.to_string(),
                    });
                }
                "aliased_import" => {
                    if let (Some(name), Some(alias)) =
                        (child.child_by_field_name("name"), child.child_by_field_name("alias"))
                    {
                        self.imports.push(Import {
                            local_alias: text(alias, self.src).to_string(),
                            imported_qualified_name: text(name, self.src).to_string(),
                        });
                    }
                }
                _ => {}
            }
        }
    }

    fn relative_base(&mut self, relative: Node) -> String {
        let mut level = 0;
        let mut suffix = None;
        for child in children(relative) {
            match child.kind() {
                "import_prefix" => level = text(child, self.src).matches('.').count(),
                "dotted_name" => suffix = Some(text(child, self.src).to_string()),
                _ => {}
            }
        }
        let mut parts: Vec<&str> = self.module.split('.').collect();
        if !self.is_package {
            parts.pop();
        }
        for _ in 1..level {
            if parts.pop().is_none() {
                self.diagnostics.push(format!(
                    "{}:{}: relative import escapes the repository root",
                    self.path,
                    self.line_of(relative)
                ));
                break;
            }
        }
        let mut base = parts.join(".");
        if let Some(suffix) = suffix {
            if !base.is_empty() {
                base.push('.');
            }
            base.push_str(&suffix);
        }
        base
    }

    fn import_from(&mut self, node: Node) {
        let Some(module) = node.child_by_field_name("module_name") else {
            return;
        };
        let base = if module.kind() == "relative_import" {
            self.relative_base(module)
        } else {
            text(module, self.src).to_string()
        };
        let qualify = |name: &str| {
            if base.is_empty() {
                name.to_string()
            } else {
                format!("{base}.{name}")
            }
        };
        let mut imports = Vec::new();
        let mut cursor = node.walk();
        for name in node.children_by_field_name("name", &mut cursor) {
            match name.kind() {
                "dotted_name" => {
                    let imported = text(name, self.src);
                    imports.push(Import {
                        local_alias: imported.to_string(),
                        imported_qualified_name: qualify(imported),
                    });
                }
                "aliased_import" => {
                    if let (Some(original), Some(alias)) =
                        (name.child_by_field_name("name"), name.child_by_field_name("alias"))
                    {
                        imports.push(Import {
                            local_alias: text(alias, self.src).to_string(),
                            imported_qualified_name: qualify(text(original, self.src)),
                        });
                    }
                }
                _ => {}
            }
        }
        if children(node).iter().any(|c| c.kind() == "wildcard_import") {
            self.diagnostics.push(format!(
                "{}:{}: star import from {} is not resolved",
                self.path,
                self.line_of(node),
                base
            ));
        }
        self.imports.extend(imports);
    }

    fn finish(mut self, file: CodeEntity) -> FileParse {
        for (start, depth, entity) in std::mem::take(&mut self.attribute_candidates) {
            if self.taken.insert(entity.qualified_name.clone()) {
                self.entities.push((start, depth, entity));
            }
        }
        self.entities.sort_by_key(|(start, depth, _)| (*start, *depth));
        FileParse {
            file,
            entities: self.entities.into_iter().map(|(_, _, e)| e).collect(),
            comments: self.comments,
            imports: self.imports,
            references: self.references,
            diagnostics: self.diagnostics,
        }
    }
}

fn assigned_names(left: Node, src: &str) -> Vec<String> {
    match left.kind() {
        "identifier" => vec![text(left, src).to_string()],
        "pattern_list" | "tuple_pattern" | "list_pattern" => named_children(left)
            .into_iter()
            .flat_map(|n| assigned_names(n, src))
            .collect(),
        _ => Vec::new(),
    }
}

fn file_entity(path: &str, source: &str, module: &str, docstring: Option<String>) -> CodeEntity {
    let lines = LineIndex::new(source);
    let (row, col) = lines.position(source.len());
    CodeEntity {
        kind: EntityKind::File,
        name: module.rsplit('.').next().unwrap_or(module).to_string(),
        qualified_name: module.to_string(),
        span: SourceSpan {
            file_path: path.to_string(),
            start_line: 1,
            start_col: 0,
            end_line: row + 1,
            end_col: col,
        },
        signature: String::new(),
        docstring,
        source_text: source.to_string(),
        parent_qualified_name: None,
    }
}

/// Extract every schema entity, import, comment and reference site of one file.
///
/// Syntax errors degrade to a parse holding only the file entity plus a
/// diagnostic.
pub fn parse_file(path: &str, source_text: &str) -> FileParse {
    let module = module_path(path);
    let tree = parse_tree(source_text);
    let root = tree.root_node();

    if let Some(error) = first_error(root) {
        let pos = error.start_position();
        return FileParse {
            file: file_entity(path, source_text, &module, None),
            entities: Vec::new(),
            comments: Vec::new(),
            imports: Vec::new(),
            references: Vec::new(),
            diagnostics: vec![format!(
                "{path}:{}:{}: syntax error, file reduced to its module node",
                pos.row + 1,
                pos.column
            )],
        };
    }

    let file = file_entity(path, source_text, &module, docstring_of(root, source_text));
    let mut extractor = Extractor {
        src: source_text,
        path,
        module: module.clone(),
        is_package: path.ends_with("__init__.py"),
        lines: LineIndex::new(source_text),
        entities: Vec::new(),
        attribute_candidates: Vec::new(),
        taken: HashSet::new(),
        references: Vec::new(),
        imports: Vec::new(),
        comments: Vec::new(),
        diagnostics: Vec::new(),
    };
    let scope = Scope {
        kind: ScopeKind::Module,
        owner: module,
        parent: None,
        function_scopes: Vec::new(),
        self_class: None,
        init_class: None,
        depth: 0,
    };
    extractor.walk(root, &scope);
    extractor.finish(file)
}

/// Facts recovered from the source text of a single code node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodeSummary {
    pub signature: String,
    pub docstring: Option<String>,
    /// Parameter names for functions, base-class expressions for classes.
    pub params: Vec<String>,
    /// Names of called functions in source order, without repeats.
    pub callees: Vec<String>,
}

fn dedent_snippet(text: &str, start_col: usize) -> String {
    let mut out = String::with_capacity(text.len());
    for (i, line) in text.split_inclusive('\n').enumerate() {
        if i == 0 {
            out.push_str(line);
            continue;
        }
        let strip = line
            .bytes()
            .take(start_col)
            .take_while(|b| *b == b' ' || *b == b'\t')
            .count();
        out.push_str(&line[strip..]);
    }
    out
}

/// Re-parse a node's source text (which starts at column `start_col`) and
/// recover its header, docstring, parameters and callees.
pub fn summarize_code(kind: EntityKind, text_: &str, start_col: usize) -> CodeSummary {
    let src = dedent_snippet(text_, start_col);
    let tree = parse_tree(&src);
    let root = tree.root_node();
    match kind {
        EntityKind::File => {
            let mut callees = Vec::new();
            collect_callees(root, &src, &mut callees);
            CodeSummary {
                signature: String::new(),
                docstring: docstring_of(root, &src),
                params: Vec::new(),
                callees,
            }
        }
        EntityKind::Attribute => CodeSummary::default(),
        EntityKind::Class | EntityKind::Function | EntityKind::Method => {
            let mut def = named_children(root).into_iter().find(|n| n.kind() != "comment");
            if let Some(node) = def.filter(|n| n.kind() == "decorated_definition") {
                def = node.child_by_field_name("definition");
            }
            let Some(def) = def else {
                return CodeSummary::default();
            };
            let params = if def.kind() == "class_definition" {
                def.child_by_field_name("superclasses")
                    .map(|bases| {
                        named_children(bases)
                            .into_iter()
                            .filter(|b| b.kind() != "comment")
                            .map(|b| text(b, &src).to_string())
                            .collect()
                    })
                    .unwrap_or_default()
            } else {
                parameter_names(def, &src)
            };
            let mut callees = Vec::new();
            let body = def.child_by_field_name("body");
            if let Some(body) = body {
                collect_callees(body, &src, &mut callees);
            }
            CodeSummary {
                signature: header_of(def, &src),
                docstring: body.and_then(|b| docstring_of(b, &src)),
                params,
                callees,
            }
        }
    }
}

/// Byte range of a function body, excluding a leading docstring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BodyLocation {
    pub start: usize,
    pub end: usize,
    /// Whitespace prefix of body lines.
    pub indent: String,
    /// Body shares the line of the `def` header.
    pub inline: bool,
    /// The body consists of a single `pass` statement.
    pub only_pass: bool,
}

/// Find the body of the function or method named `qualified_name` in a file.
pub fn locate_body(path: &str, source: &str, qualified_name: &str) -> Result<BodyLocation, String> {
    let parse = parse_file(path, source);
    if let Some(diag) = parse.diagnostics.iter().find(|d| d.contains("syntax error")) {
        return Err(diag.clone());
    }
    let entity = parse
        .entities
        .iter()
        .find(|e| e.qualified_name == qualified_name)
        .ok_or_else(|| format!("{qualified_name} is not defined in {path}"))?;
    if !matches!(entity.kind, EntityKind::Function | EntityKind::Method) {
        return Err(format!(
            "{qualified_name} is a {}, not a function",
            entity.kind.as_str()
        ));
    }
    let lines = LineIndex::new(source);
    let start = lines
        .offset(entity.span.start_line, entity.span.start_col)
        .ok_or("entity span outside file")?;
    let end = lines
        .offset(entity.span.end_line, entity.span.end_col)
        .ok_or("entity span outside file")?;
    let tree = parse_tree(source);
    let mut node = tree
        .root_node()
        .descendant_for_byte_range(start, end)
        .ok_or("definition node not found")?;
    while !(node.kind() == "function_definition" && node.start_byte() == start) {
        node = node.parent().ok_or("definition node not found")?;
    }
    let body = node.child_by_field_name("body").ok_or("definition has no body")?;
    let doc = docstring_statement(body);
    let statements: Vec<Node> = named_children(body)
        .into_iter()
        .filter(|n| n.kind() != "comment" && Some(*n) != doc)
        .collect();
    let (Some(first), Some(last)) = (statements.first(), statements.last()) else {
        return Err(format!("{qualified_name} has no body statements besides its docstring"));
    };
    let line_start = source[..first.start_byte()].rfind('\n').map_or(0, |i| i + 1);
    let prefix = &source[line_start..first.start_byte()];
    let (indent, inline) = if prefix.chars().all(|c| c == ' ' || c == '\t') {
        (prefix.to_string(), false)
    } else {
        let def_line_start = source[..start].rfind('\n').map_or(0, |i| i + 1);
        let def_indent: String = source[def_line_start..start]
            .chars()
            .take_while(|c| *c == ' ' || *c == '\t')
            .collect();
        (format!("{def_indent}    "), true)
    };
    Ok(BodyLocation {
        start: first.start_byte(),
        end: last.end_byte(),
        indent,
        inline,
        only_pass: statements.len() == 1 && first.kind() == "pass_statement",
    })
}
