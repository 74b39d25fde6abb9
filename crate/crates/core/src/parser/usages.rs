use std::collections::{BTreeMap, HashMap};

use super::{EntityKind, FileParse, ReferenceSite, UsageRef};

const MAX_REEXPORT_DEPTH: usize = 8;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UsageResolution {
    pub usages: Vec<UsageRef>,
    /// One line per reference site that did not resolve to an extracted entity.
    pub diagnostics: Vec<String>,
}

struct SymbolTable<'p> {
    kinds: HashMap<&'p str, EntityKind>,
    /// module qualified name -> alias -> imported qualified name (last binding wins)
    imports: HashMap<&'p str, BTreeMap<&'p str, &'p str>>,
}

impl<'p> SymbolTable<'p> {
    fn new(parses: &'p [FileParse]) -> Self {
        let mut kinds = HashMap::new();
        let mut imports: HashMap<&str, BTreeMap<&str, &str>> = HashMap::new();
        for parse in parses {
            kinds.insert(parse.file.qualified_name.as_str(), EntityKind::File);
            for entity in &parse.entities {
                kinds.insert(entity.qualified_name.as_str(), entity.kind);
            }
            let table = imports.entry(parse.file.qualified_name.as_str()).or_default();
            for import in &parse.imports {
                table.insert(import.local_alias.as_str(), import.imported_qualified_name.as_str());
            }
        }
        SymbolTable { kinds, imports }
    }

    fn exists(&self, qn: &str) -> bool {
        self.kinds.contains_key(qn)
    }

    /// Follow `from x import y` re-exports until `qn` names an entity.
    fn canonical(&self, qn: &str, depth: usize) -> Option<String> {
        if self.exists(qn) {
            return Some(qn.to_string());
        }
        if depth >= MAX_REEXPORT_DEPTH {
            return None;
        }
        let parts: Vec<&str> = qn.split('.').collect();
        for split in (1..parts.len()).rev() {
            let module = parts[..split].join(".");
            if self.kinds.get(module.as_str()) != Some(&EntityKind::File) {
                continue;
            }
            let Some(target) = self.imports.get(module.as_str()).and_then(|t| t.get(parts[split])) else {
                continue;
            };
            let mut redirected = target.to_string();
            for rest in &parts[split + 1..] {
                redirected.push('.');
                redirected.push_str(rest);
            }
            if let Some(found) = self.canonical(&redirected, depth + 1) {
                return Some(found);
            }
        }
        None
    }

    fn resolve_head(&self, module: &str, site: &ReferenceSite) -> Option<String> {
        let head = site.chain.first()?;
        if head == "self" || head == "cls" {
            if let Some(class) = &site.self_class {
                return Some(class.clone());
            }
        }
        for scope in &site.function_scopes {
            let candidate = format!("{scope}.{head}");
            if self.exists(&candidate) {
                return Some(candidate);
            }
        }
        let candidate = format!("{module}.{head}");
        if self.exists(&candidate) {
            return Some(candidate);
        }
        self.imports
            .get(module)
            .and_then(|t| t.get(head.as_str()))
            .map(|target| target.to_string())
    }

    /// Longest resolvable prefix of the chain (at least two links unless the
    /// chain is a single name).
    fn resolve(&self, module: &str, site: &ReferenceSite) -> Option<String> {
        let head = self.resolve_head(module, site)?;
        let min_len = site.chain.len().min(2);
        for len in (min_len..=site.chain.len()).rev() {
            let mut qn = head.clone();
            for part in &site.chain[1..len] {
                qn.push('.');
                qn.push_str(part);
            }
            if let Some(found) = self.canonical(&qn, 0) {
                return Some(found);
            }
        }
        None
    }
}

/// Link every reference site to the entity it names, across the snapshot.
///
/// Resolution is purely by name: enclosing function scopes, then same-module
/// definitions, then import aliases (following re-exports). Everything else
/// is reported as unresolved.
pub fn resolve_usages(parses: &[FileParse]) -> UsageResolution {
    let mut ordered: Vec<&FileParse> = parses.iter().collect();
    ordered.sort_by(|a, b| a.file.span.file_path.cmp(&b.file.span.file_path));
    let table = SymbolTable::new(parses);
    let mut result = UsageResolution::default();

    for parse in ordered {
        let module = parse.file.qualified_name.as_str();
        for site in &parse.references {
            match table.resolve(module, site) {
                Some(used) if used == site.user_qualified_name => {}
                Some(used) => result.usages.push(UsageRef {
                    user_qualified_name: site.user_qualified_name.clone(),
                    used_qualified_name: used,
                    span: site.span.clone(),
                }),
                None => result.diagnostics.push(format!(
                    "{}:{}: unresolved name {} in {}",
                    site.span.file_path,
                    site.span.start_line,
                    site.chain.join("."),
                    site.user_qualified_name
                )),
            }
        }
    }
    result.usages.sort();
    result.usages.dedup();
    result
}
