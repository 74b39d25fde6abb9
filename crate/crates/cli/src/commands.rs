use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use codegraph_core::eval::{load_samples, render_summary, run_batch, EvalConfig, EvalError};
use codegraph_core::generation::llm::{CannedResponses, LlmClient, MockLlm, MockScript, RemoteLlm};
use codegraph_core::generation::prompts::PromptCatalog;
use codegraph_core::generation::{build_generation_prompt, generate_code, serialize_subgraph_with, GenerationError};
use codegraph_core::graph::{load_graph, persist_graph, validate_schema, CodeGraph, GraphError, NodeKind, Relation};
use codegraph_core::index::{Embedder, HashingEmbedder, Indexes, RemoteEmbedder};
use codegraph_core::parser::ParseError;
use codegraph_core::pipeline::{index_repository, PipelineError};
use codegraph_core::retrieval::{retrieve, RetrievalConfig, RetrievalResult};

use crate::config::Config;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_EXTRACTION: u8 = 3;
pub const EXIT_INFRASTRUCTURE: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn infrastructure(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INFRASTRUCTURE,
            message: message.into(),
        }
    }
}

pub fn fail(failure: Failure) -> ExitCode {
    eprintln!("error: {}", failure.message);
    ExitCode::from(failure.code)
}

type CmdResult = Result<(), Failure>;

fn prompts(config: &Config) -> Result<PromptCatalog, Failure> {
    match &config.prompts_dir {
        Some(dir) => PromptCatalog::load(dir).map_err(|e| Failure::usage(e.to_string())),
        None => Ok(PromptCatalog::builtin()),
    }
}

fn llm_client(config: &Config) -> Result<Box<dyn LlmClient>, Failure> {
    let script = match config.llm.as_str() {
        "mock:offline" => MockScript::Offline,
        "mock:echo-reference" => MockScript::EchoReference,
        "mock:always-pass-keyword" => MockScript::AlwaysPassKeyword,
        "mock:canned" => {
            let path = config
                .llm_canned_path
                .as_deref()
                .ok_or_else(|| Failure::usage("llm_canned_path is required for mock:canned"))?;
            MockScript::Canned(CannedResponses::load(path).map_err(|e| Failure::usage(e.to_string()))?)
        }
        "remote" => {
            let client = RemoteLlm::new(
                &config.llm_base_url,
                &config.llm_model,
                config.llm_temperature,
                config.llm_timeout(),
            )
            .map_err(|e| Failure::infrastructure(e.to_string()))?;
            return Ok(Box::new(client));
        }
        other => return Err(Failure::usage(format!("unknown llm mode {other:?}"))),
    };
    Ok(Box::new(MockLlm::new(script)))
}

fn embedder(config: &Config) -> Result<Box<dyn Embedder>, Failure> {
    match config.embedder.as_str() {
        "default" => Ok(Box::new(HashingEmbedder::new(config.embedder_dimension))),
        "remote" => RemoteEmbedder::new(
            &config.embedder_base_url,
            &config.embedder_model,
            config.embedder_dimension,
            config.llm_timeout(),
        )
        .map(|e| Box::new(e) as Box<dyn Embedder>)
        .map_err(|e| Failure::infrastructure(e.to_string())),
        other => Err(Failure::usage(format!("unknown embedder mode {other:?}"))),
    }
}

fn retrieval_config(config: &Config) -> RetrievalConfig {
    RetrievalConfig {
        seed_k: config.seed_k,
        hops: config.hops,
        filter_k: config.filter_k,
        fulltext_threshold: config.fulltext_threshold,
        vector_threshold: config.vector_threshold,
    }
}

fn load(config: &Config) -> Result<CodeGraph, Failure> {
    let path = config.graph_file();
    if !path.is_file() {
        return Err(Failure::usage(format!(
            "graph file {} not found; run `codegraph index` first",
            path.display()
        )));
    }
    load_graph(&path).map_err(|e| match e {
        GraphError::Io { .. } => Failure::infrastructure(e.to_string()),
        other => Failure::usage(format!("{}: {other}", path.display())),
    })
}

pub fn index(config: &Config) -> CmdResult {
    let llm = llm_client(config)?;
    let prompts = prompts(config)?;
    let index = index_repository(
        &config.repo_root,
        &config.include,
        &config.exclude,
        llm.as_ref(),
        &prompts,
    )
    .map_err(|e| match e {
        PipelineError::Parse(ParseError::Io { .. }) => Failure::infrastructure(e.to_string()),
        other => Failure::usage(other.to_string()),
    })?;
    for diagnostic in &index.diagnostics {
        log::info!("{diagnostic}");
    }
    let path = config.graph_file();
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)
            .map_err(|e| Failure::infrastructure(format!("creating {}: {e}", parent.display())))?;
    }
    persist_graph(&index.graph, &path).map_err(|e| Failure::infrastructure(e.to_string()))?;
    println!(
        "nodes={} edges={} descriptions={}",
        index.graph.node_count(),
        index.graph.edge_count(),
        index.descriptions
    );
    Ok(())
}

fn run_retrieval(config: &Config, query: &str) -> Result<(CodeGraph, RetrievalResult), Failure> {
    let graph = load(config)?;
    let embedder = embedder(config)?;
    let llm = llm_client(config)?;
    let prompts = prompts(config)?;
    let indexes = Indexes::build(&graph, embedder.as_ref()).map_err(|e| Failure::infrastructure(e.to_string()))?;
    let result = retrieve(
        &graph,
        &indexes,
        embedder.as_ref(),
        llm.as_ref(),
        &prompts,
        query,
        &retrieval_config(config),
    )
    .map_err(|e| Failure::infrastructure(e.to_string()))?;
    Ok((graph, result))
}

fn render_table(graph: &CodeGraph, result: &RetrievalResult) -> String {
    let mut out = String::new();
    if result.subgraph.is_empty() {
        out.push_str("0 nodes retrieved\n");
        return out;
    }
    let _ = writeln!(out, "{:<8}  {:<20}  {:<4}  node", "score", "kind", "seed");
    for id in &result.subgraph.node_ids {
        let kind = graph.node(id.as_str()).map_or("?", |n| n.kind.as_str());
        let score = result.node_scores.get(id).copied().unwrap_or(0.0);
        let seed = if result.subgraph.seed_ids.contains(id) { "*" } else { "" };
        let _ = writeln!(out, "{score:<8.4}  {kind:<20}  {seed:<4}  {id}");
    }
    let d = &result.diagnostics;
    let _ = writeln!(
        out,
        "{} nodes retrieved, {} edges (seeds={} expanded={} filtered={})",
        result.subgraph.node_ids.len(),
        result.subgraph.edges.len(),
        d.seeds,
        d.expanded_nodes,
        d.filtered_nodes
    );
    out
}

pub fn query(config: &Config, query: &str, json: bool) -> CmdResult {
    let (graph, result) = run_retrieval(config, query)?;
    if json {
        let text = serde_json::to_string_pretty(&result).map_err(|e| Failure::infrastructure(e.to_string()))?;
        println!("{text}");
    } else {
        print!("{}", render_table(&graph, &result));
    }
    Ok(())
}

fn debug_response_path(config: &Config) -> PathBuf {
    let graph = config.graph_file();
    let dir = graph
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    dir.join("last_response.txt")
}

pub fn generate(config: &Config, query: &str, dump_context: Option<&Path>) -> CmdResult {
    let (graph, result) = run_retrieval(config, query)?;
    if result.subgraph.is_empty() {
        eprintln!("warning: no repository context retrieved; generating without it");
    }
    let context = serialize_subgraph_with(&graph, &result.subgraph, &result.node_scores, config.context_budget);
    if let Some(path) = dump_context {
        std::fs::write(path, &context.context_text)
            .map_err(|e| Failure::infrastructure(format!("writing {}: {e}", path.display())))?;
    }
    let prompts = prompts(config)?;
    let llm = llm_client(config)?;
    let messages = build_generation_prompt(query, &context, &prompts);
    match generate_code(messages, llm.as_ref(), None) {
        Ok(code) => {
            println!("{}", code.code_text);
            Ok(())
        }
        Err(GenerationError::Extraction { reason, raw_response }) => {
            let path = debug_response_path(config);
            let saved = std::fs::write(&path, raw_response).map(|_| path.display().to_string());
            Err(Failure {
                code: EXIT_EXTRACTION,
                message: match saved {
                    Ok(p) => format!("{reason}; raw response saved to {p}"),
                    Err(e) => format!("{reason}; saving raw response failed: {e}"),
                },
            })
        }
        Err(GenerationError::Llm(e)) => Err(Failure::infrastructure(e.to_string())),
    }
}

pub fn eval(config: &Config, samples_path: &Path, report_path: Option<&Path>) -> CmdResult {
    let (samples, skipped) = load_samples(samples_path).map_err(|e| Failure::usage(e.to_string()))?;
    for line in &skipped {
        eprintln!(
            "warning: {} line {}: {}",
            samples_path.display(),
            line.line,
            line.message
        );
    }
    let llm = llm_client(config)?;
    let embedder = embedder(config)?;
    let prompts = prompts(config)?;
    let eval_config = EvalConfig {
        retrieval: retrieval_config(config),
        context_budget: config.context_budget,
        timeout: config.eval_timeout(),
        include: config.include.clone(),
        exclude: config.eval_exclude.clone(),
        jobs: config.jobs,
    };
    let mut report =
        run_batch(&samples, &eval_config, llm.as_ref(), embedder.as_ref(), &prompts).map_err(|e| match e {
            EvalError::NoOutcomes => Failure::usage(format!("{} contains no usable samples", samples_path.display())),
            other => Failure::infrastructure(other.to_string()),
        })?;
    report.skipped_lines = skipped;
    if let Some(path) = report_path {
        let json = serde_json::to_string_pretty(&report).map_err(|e| Failure::infrastructure(e.to_string()))?;
        std::fs::write(path, json + "\n")
            .map_err(|e| Failure::infrastructure(format!("writing {}: {e}", path.display())))?;
    }
    print!("{}", render_summary(&report));
    Ok(())
}

pub fn inspect(config: &Config) -> CmdResult {
    let graph = load(config)?;
    println!("nodes={} edges={}", graph.node_count(), graph.edge_count());
    for kind in NodeKind::ALL {
        let count = graph.nodes().filter(|n| n.kind == kind).count();
        println!("  {:<22}{count}", kind.as_str());
    }
    for rel in Relation::ALL {
        let count = graph.edges().iter().filter(|e| e.rel == rel).count();
        println!("  {:<22}{count}", rel.as_str());
    }
    let violations = validate_schema(&graph);
    println!("violations={}", violations.len());
    for v in &violations {
        println!("  {v}");
    }
    Ok(())
}
