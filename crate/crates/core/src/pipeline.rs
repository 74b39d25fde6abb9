//! Repository to described graph: scan, parse, resolve usages, build, describe.

use std::path::Path;

use rayon::prelude::*;

use crate::descriptions::{attach_descriptions, DescriptionError};
use crate::generation::llm::LlmClient;
use crate::generation::prompts::PromptCatalog;
use crate::graph::{build_graph, CodeGraph, GraphError};
use crate::parser::{parse_file, resolve_usages, scan_repository, ParseError};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Description(#[from] DescriptionError),
}

#[derive(Debug, Clone)]
pub struct RepositoryIndex {
    pub graph: CodeGraph,
    pub files: usize,
    pub descriptions: usize,
    pub diagnostics: Vec<String>,
}

/// Build the described knowledge graph of the repository at `root`.
pub fn index_repository(
    root: &Path,
    include: &[String],
    exclude: &[String],
    llm: &dyn LlmClient,
    prompts: &PromptCatalog,
) -> Result<RepositoryIndex, PipelineError> {
    let scan = scan_repository(root, include, exclude)?;
    let parses: Vec<_> = scan.files.par_iter().map(|f| parse_file(&f.path, &f.text)).collect();
    let resolution = resolve_usages(&parses);
    let graph = build_graph(&parses, &resolution.usages)?;
    let (graph, records) = attach_descriptions(&graph, llm, prompts)?;

    let mut diagnostics = scan.diagnostics;
    diagnostics.extend(parses.iter().flat_map(|p| p.diagnostics.iter().cloned()));
    diagnostics.extend(resolution.diagnostics);
    Ok(RepositoryIndex {
        graph,
        files: parses.len(),
        descriptions: records.len(),
        diagnostics,
    })
}
