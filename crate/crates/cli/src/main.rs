mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{Config, ConfigLayer};

/// Build a code knowledge graph of a Python repository, query it and use the
/// retrieved context for code generation.
#[derive(Debug, Parser)]
#[command(name = "codegraph", version)]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(flatten)]
    overrides: Overrides,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Overrides {
    /// Repository to index.
    #[arg(long, global = true)]
    repo_root: Option<PathBuf>,
    /// Graph file to write or read.
    #[arg(long = "graph", global = true)]
    graph_path: Option<PathBuf>,
    /// Glob of files to index (repeatable).
    #[arg(long, global = true)]
    include: Vec<String>,
    /// Glob of files to skip (repeatable).
    #[arg(long, global = true)]
    exclude: Vec<String>,
    /// LLM mode: mock:offline, mock:echo-reference, mock:always-pass-keyword, mock:canned or remote.
    #[arg(long, global = true)]
    llm: Option<String>,
    /// JSON file of canned responses for mock:canned.
    #[arg(long, global = true)]
    llm_canned_path: Option<PathBuf>,
    /// Embedder mode: default or remote.
    #[arg(long, global = true)]
    embedder: Option<String>,
    #[arg(long, global = true)]
    seed_k: Option<usize>,
    #[arg(long, global = true)]
    hops: Option<usize>,
    #[arg(long, global = true)]
    filter_k: Option<usize>,
    /// Prompt context budget in characters.
    #[arg(long, global = true)]
    context_budget: Option<usize>,
    /// Worker threads for parsing, description and evaluation.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

impl Overrides {
    fn into_layer(self) -> ConfigLayer {
        let list = |v: Vec<String>| (!v.is_empty()).then_some(v);
        ConfigLayer {
            repo_root: self.repo_root,
            graph_path: self.graph_path,
            include: list(self.include),
            exclude: list(self.exclude),
            llm: self.llm,
            llm_canned_path: self.llm_canned_path,
            embedder: self.embedder,
            seed_k: self.seed_k,
            hops: self.hops,
            filter_k: self.filter_k,
            context_budget: self.context_budget,
            jobs: self.jobs,
            ..ConfigLayer::default()
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse the repository, build and describe the graph, write the graph file.
    Index,
    /// Retrieve the subgraph relevant to a query.
    Query {
        query: String,
        /// Print the full retrieval result as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Generate code for a request using retrieved context.
    Generate {
        query: String,
        /// Write the exact prompt context to this file.
        #[arg(long)]
        dump_context: Option<PathBuf>,
    },
    /// Run a benchmark samples file and report pass@1.
    Eval {
        samples: PathBuf,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Per-sample test timeout in seconds.
        #[arg(long)]
        timeout: Option<u64>,
    },
    /// Print graph statistics and the schema validation report.
    Inspect,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    let mut flags = cli.overrides.into_layer();
    if let Command::Eval { timeout, .. } = &cli.command {
        flags.eval_timeout_secs = *timeout;
    }
    let file = match cli.config.as_deref().map(ConfigLayer::from_file).transpose() {
        Ok(file) => file,
        Err(e) => return commands::fail(commands::Failure::usage(e.to_string())),
    };
    let config =
        ConfigLayer::from_env(|name| std::env::var(name).ok()).and_then(|env| Config::resolve(file, env, flags));
    let config = match config {
        Ok(config) => config,
        Err(e) => return commands::fail(commands::Failure::usage(e.to_string())),
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(config.jobs).build_global() {
        eprintln!("warning: thread pool: {e}");
    }

    let result = match cli.command {
        Command::Index => commands::index(&config),
        Command::Query { query, json } => commands::query(&config, &query, json),
        Command::Generate { query, dump_context } => commands::generate(&config, &query, dump_context.as_deref()),
        Command::Eval { samples, report, .. } => commands::eval(&config, &samples, report.as_deref()),
        Command::Inspect => commands::inspect(&config),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => commands::fail(failure),
    }
}
