//! Prompt templates with `{placeholder}` substitution.

use std::path::{Path, PathBuf};

pub const DESCRIBE: &str = "describe.txt";
pub const GENERATE_SYSTEM: &str = "generate_system.txt";
pub const GENERATE_USER: &str = "generate_user.txt";
pub const EXTRACT_ENTITIES: &str = "extract_entities.txt";

#[derive(Debug, thiserror::Error)]
pub enum PromptError {
    #[error("missing prompt template {}", .0.display())]
    MissingTemplate(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptCatalog {
    pub describe: String,
    pub generate_system: String,
    pub generate_user: String,
    pub extract_entities: String,
}

impl Default for PromptCatalog {
    fn default() -> Self {
        PromptCatalog::builtin()
    }
}

impl PromptCatalog {
    /// Templates shipped in the crate's `prompts/` directory.
    pub fn builtin() -> Self {
        PromptCatalog {
            describe: include_str!("../../prompts/describe.txt").to_string(),
            generate_system: include_str!("../../prompts/generate_system.txt").to_string(),
            generate_user: include_str!("../../prompts/generate_user.txt").to_string(),
            extract_entities: include_str!("../../prompts/extract_entities.txt").to_string(),
        }
    }

    pub fn load(dir: &Path) -> Result<Self, PromptError> {
        let read = |name: &str| {
            let path = dir.join(name);
            std::fs::read_to_string(&path).map_err(|_| PromptError::MissingTemplate(path))
        };
        Ok(PromptCatalog {
            describe: read(DESCRIBE)?,
            generate_system: read(GENERATE_SYSTEM)?,
            generate_user: read(GENERATE_USER)?,
            extract_entities: read(EXTRACT_ENTITIES)?,
        })
    }
}

/// Replace `{name}` occurrences with their values in a single pass over the
/// template; substituted text is never rescanned and unknown placeholders
/// are left as written.
pub fn render(template: &str, vars: &[(&str, &str)]) -> String {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let replaced = after.find('}').and_then(|close| {
            let key = &after[..close];
            vars.iter()
                .find(|(name, _)| *name == key)
                .map(|(_, value)| (close, *value))
        });
        match replaced {
            Some((close, value)) => {
                out.push_str(value);
                rest = &after[close + 1..];
            }
            None => {
                out.push('{');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    out
}
