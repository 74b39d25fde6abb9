use std::path::Path;

use globset::{GlobBuilder, GlobSet, GlobSetBuilder};
use walkdir::WalkDir;

use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    /// Repository-relative path with forward slashes.
    pub path: String,
    pub text: String,
}

#[derive(Debug, Clone, Default)]
pub struct ScanResult {
    pub files: Vec<SourceFile>,
    pub diagnostics: Vec<String>,
}

fn glob_set(patterns: &[String]) -> Result<GlobSet, ParseError> {
    let mut builder = GlobSetBuilder::new();
    for pattern in patterns {
        let glob = GlobBuilder::new(pattern)
            .literal_separator(true)
            .build()
            .map_err(|e| ParseError::BadGlob {
                pattern: pattern.clone(),
                message: e.to_string(),
            })?;
        builder.add(glob);
    }
    builder.build().map_err(|e| ParseError::BadGlob {
        pattern: patterns.join(","),
        message: e.to_string(),
    })
}

/// Collect every file under `root` matching `include` and not `exclude`,
/// sorted by relative path. Unreadable or non-UTF-8 files become diagnostics.
pub fn scan_repository(root: &Path, include: &[String], exclude: &[String]) -> Result<ScanResult, ParseError> {
    if !root.is_dir() {
        return Err(ParseError::MissingRoot(root.display().to_string()));
    }
    let include = glob_set(include)?;
    let exclude = glob_set(exclude)?;
    let mut result = ScanResult::default();

    let walker = WalkDir::new(root)
        .follow_links(false)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| e.depth() == 0 || e.file_name() != ".git");
    for entry in walker {
        let entry = match entry {
            Ok(entry) => entry,
            Err(err) => {
                result.diagnostics.push(format!("walk error: {err}"));
                continue;
            }
        };
        if !entry.file_type().is_file() {
            continue;
        }
        let Ok(relative) = entry.path().strip_prefix(root) else {
            continue;
        };
        let rel = relative
            .components()
            .map(|c| c.as_os_str().to_string_lossy())
            .collect::<Vec<_>>()
            .join("/");
        if !include.is_match(&rel) || exclude.is_match(&rel) {
            continue;
        }
        match std::fs::read(entry.path()) {
            Ok(bytes) => match String::from_utf8(bytes) {
                Ok(text) => result.files.push(SourceFile { path: rel, text }),
                Err(_) => result.diagnostics.push(format!("{rel}: skipped, not valid UTF-8")),
            },
            Err(err) => result.diagnostics.push(format!("{rel}: unreadable: {err}")),
        }
    }
    result.files.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(result)
}
