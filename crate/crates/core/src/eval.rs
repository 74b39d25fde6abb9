//! Repository-level benchmark harness: blank a target body, retrieve a
//! two-hop context around it, generate, splice the result back and run the
//! sample's tests in a scratch copy.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use wait_timeout::ChildExt;
use walkdir::WalkDir;

use crate::generation::llm::LlmClient;
use crate::generation::prompts::PromptCatalog;
use crate::generation::{build_generation_prompt, generate_code, serialize_subgraph_with, DEFAULT_CONTEXT_BUDGET};
use crate::graph::{NodeId, NodeKind};
use crate::index::Embedder;
use crate::parser::{locate_body, module_path};
use crate::pipeline::index_repository;
use crate::retrieval::{retrieve_from_seeds, RetrievalConfig, RetrievalDiagnostics};

/// Expansion depth of the evaluation protocol.
pub const EVAL_HOPS: usize = 2;
const OUTPUT_LIMIT: usize = 8_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalSample {
    pub sample_id: String,
    pub namespace: String,
    pub file_path: String,
    pub requirement: String,
    pub signature: String,
    pub test_command: String,
    pub repo_root: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureStage {
    Retrieve,
    Generate,
    Splice,
    Test,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOutcome {
    pub sample_id: String,
    pub passed: bool,
    pub generated_body: Option<String>,
    pub retrieval: Option<RetrievalDiagnostics>,
    pub failure_stage: Option<FailureStage>,
    pub message: Option<String>,
    pub exit_code: Option<i32>,
    pub stdout: String,
    pub stderr: String,
}

impl EvalOutcome {
    fn new(sample_id: &str) -> Self {
        EvalOutcome {
            sample_id: sample_id.to_string(),
            passed: false,
            generated_body: None,
            retrieval: None,
            failure_stage: None,
            message: None,
            exit_code: None,
            stdout: String::new(),
            stderr: String::new(),
        }
    }

    fn failed(mut self, stage: FailureStage, message: impl Into<String>) -> Self {
        self.passed = false;
        self.failure_stage = Some(stage);
        self.message = Some(message.into());
        self
    }
}

/// A sample line that could not be read.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedLine {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub outcomes: Vec<EvalOutcome>,
    pub pass_at_1: f64,
    pub passed: usize,
    pub total: usize,
    pub stage_failures: BTreeMap<FailureStage, usize>,
    pub skipped_lines: Vec<SkippedLine>,
}

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("pass@k needs at least one outcome")]
    NoOutcomes,
    #[error("pass@{0} needs {0} generations per sample; only pass@1 is supported")]
    UnsupportedK(usize),
    #[error("samples file {path}: {source}")]
    SamplesFile {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub retrieval: RetrievalConfig,
    pub context_budget: usize,
    pub timeout: Duration,
    pub include: Vec<String>,
    /// Files kept out of the graph, typically the tests that judge samples.
    pub exclude: Vec<String>,
    pub jobs: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            retrieval: RetrievalConfig::default(),
            context_budget: DEFAULT_CONTEXT_BUDGET,
            timeout: Duration::from_secs(60),
            include: vec!["**/*.py".into()],
            exclude: vec!["tests/**".into()],
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

/// Read a JSONL sample file. Relative `repo_root` values resolve against the
/// file's directory; bad lines are reported and skipped.
pub fn load_samples(path: &Path) -> Result<(Vec<EvalSample>, Vec<SkippedLine>), EvalError> {
    let text = std::fs::read_to_string(path).map_err(|source| EvalError::SamplesFile {
        path: path.display().to_string(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<EvalSample>(line) {
            Ok(mut sample) if !sample.test_command.trim().is_empty() => {
                if sample.repo_root.is_relative() {
                    sample.repo_root = base.join(&sample.repo_root);
                }
                samples.push(sample);
            }
            Ok(_) => skipped.push(SkippedLine {
                line: i + 1,
                message: "empty test_command".into(),
            }),
            Err(e) => skipped.push(SkippedLine {
                line: i + 1,
                message: e.to_string(),
            }),
        }
    }
    Ok((samples, skipped))
}

/// A file whose target body was replaced by `pass`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlankedFile {
    pub text: String,
    /// Removed body with the body indentation stripped.
    pub original_body: String,
}

fn dedent_by(body: &str, indent: &str) -> String {
    body.split_inclusive('\n')
        .map(|line| {
            if line.trim().is_empty() {
                line
            } else {
                line.strip_prefix(indent).unwrap_or(line)
            }
        })
        .collect()
}

fn indent_by(body: &str, indent: &str) -> String {
    let mut out = String::with_capacity(body.len());
    for (i, line) in body.split_inclusive('\n').enumerate() {
        if i > 0 && !line.trim().is_empty() {
            out.push_str(indent);
        }
        out.push_str(line);
    }
    out
}

/// Strip the whitespace prefix shared by all non-blank lines.
fn dedent_common(code: &str) -> String {
    let prefix = code
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| &l[..l.len() - l.trim_start().len()])
        .reduce(|a, b| {
            let shared = a.bytes().zip(b.bytes()).take_while(|(x, y)| x == y).count();
            &a[..shared]
        })
        .unwrap_or("");
    dedent_by(code, prefix)
}

/// Replace the body of `namespace` with a single `pass` at the body indentation.
/// Signature, decorators and docstring stay in place.
pub fn blank_body(file_text: &str, file_path: &str, namespace: &str) -> Result<BlankedFile, String> {
    let loc = locate_body(file_path, file_text, namespace)?;
    let original = &file_text[loc.start..loc.end];
    let mut text = String::with_capacity(file_text.len());
    text.push_str(&file_text[..loc.start]);
    text.push_str("pass");
    text.push_str(&file_text[loc.end..]);
    Ok(BlankedFile {
        text,
        original_body: dedent_by(original, &loc.indent),
    })
}

/// Put `body` (indentation relative to its first line) in place of the blanked
/// target's `pass`.
pub fn splice_body(file_text: &str, file_path: &str, namespace: &str, body: &str) -> Result<String, String> {
    if body.trim().is_empty() {
        return Err("generated body is empty".into());
    }
    let loc = locate_body(file_path, file_text, namespace)?;
    if !loc.only_pass {
        return Err(format!("{namespace} is not blanked"));
    }
    let body = body.trim_end();
    let placed = if loc.inline && body.contains('\n') {
        format!("\n{}{}", loc.indent, indent_by(body, &loc.indent))
    } else {
        indent_by(body, &loc.indent)
    };
    let mut text = String::with_capacity(file_text.len() + placed.len());
    text.push_str(&file_text[..loc.start]);
    text.push_str(&placed);
    text.push_str(&file_text[loc.end..]);
    Ok(text)
}

/// Reduce generated code to a body: a complete `def` of the target yields its
/// body, anything else is treated as a body already.
pub fn body_from_generated(code: &str, namespace: &str) -> String {
    let name = namespace.rsplit('.').next().unwrap_or(namespace);
    let candidate = dedent_common(code);
    let scratch = "generated.py";
    let qualified = format!("{}.{name}", module_path(scratch));
    match locate_body(scratch, &candidate, &qualified) {
        Ok(loc) => dedent_by(&candidate[loc.start..loc.end], &loc.indent),
        Err(_) => candidate.trim_start_matches('\n').to_string(),
    }
}

fn copy_tree(from: &Path, to: &Path) -> std::io::Result<()> {
    let walker = WalkDir::new(from)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| e.depth() == 0 || !matches!(e.file_name().to_str(), Some(".git" | "__pycache__")));
    for entry in walker {
        let entry = entry.map_err(std::io::Error::other)?;
        let rel = entry.path().strip_prefix(from).map_err(std::io::Error::other)?;
        let target = to.join(rel);
        if entry.file_type().is_dir() {
            std::fs::create_dir_all(&target)?;
        } else if entry.file_type().is_file() {
            std::fs::copy(entry.path(), &target)?;
        }
    }
    Ok(())
}

fn tail(bytes: &[u8]) -> String {
    let text = String::from_utf8_lossy(bytes);
    let count = text.chars().count();
    if count <= OUTPUT_LIMIT {
        return text.into_owned();
    }
    text.chars().skip(count - OUTPUT_LIMIT).collect()
}

struct TestRun {
    exit_code: Option<i32>,
    timed_out: bool,
    stdout: String,
    stderr: String,
}

fn run_test_command(command: &str, repo: &Path, logs: &Path, timeout: Duration) -> std::io::Result<TestRun> {
    let out_path = logs.join("stdout.txt");
    let err_path = logs.join("stderr.txt");
    let mut cmd = Command::new("sh");
    cmd.arg("-c")
        .arg(command)
        .current_dir(repo)
        .env("PYTHONDONTWRITEBYTECODE", "1")
        .stdin(Stdio::null())
        .stdout(File::create(&out_path)?)
        .stderr(File::create(&err_path)?);
    #[cfg(unix)]
    std::os::unix::process::CommandExt::process_group(&mut cmd, 0);
    let mut child = cmd.spawn()?;
    let status = child.wait_timeout(timeout)?;
    let timed_out = status.is_none();
    let status = match status {
        Some(status) => status,
        None => {
            #[cfg(unix)]
            if let Ok(group) = libc::pid_t::try_from(child.id()) {
                // SAFETY: killpg only sends a signal; the group was created for this child.
                unsafe {
                    libc::killpg(group, libc::SIGKILL);
                }
            }
            let _ = child.kill();
            child.wait()?
        }
    };
    Ok(TestRun {
        exit_code: status.code(),
        timed_out,
        stdout: tail(&std::fs::read(&out_path)?),
        stderr: tail(&std::fs::read(&err_path)?),
    })
}

/// The generation task for a sample: requirement plus expected signature.
pub fn task_statement(sample: &EvalSample) -> String {
    format!(
        "{}\nWrite the body of `{}` in {}:\n{}",
        sample.requirement, sample.namespace, sample.file_path, sample.signature
    )
}

/// Run one sample end to end in a scratch copy of its repository.
/// Failures are recorded in the outcome, never returned.
pub fn run_sample(
    sample: &EvalSample,
    config: &EvalConfig,
    llm: &dyn LlmClient,
    embedder: &dyn Embedder,
    prompts: &PromptCatalog,
) -> EvalOutcome {
    let outcome = EvalOutcome::new(&sample.sample_id);
    let scratch = match tempfile::tempdir() {
        Ok(dir) => dir,
        Err(e) => return outcome.failed(FailureStage::Retrieve, format!("scratch directory: {e}")),
    };
    let repo = scratch.path().join("repo");
    if let Err(e) = copy_tree(&sample.repo_root, &repo) {
        return outcome.failed(
            FailureStage::Retrieve,
            format!("copying {}: {e}", sample.repo_root.display()),
        );
    }
    let target_path = repo.join(&sample.file_path);
    let source = match std::fs::read_to_string(&target_path) {
        Ok(text) => text,
        Err(e) => return outcome.failed(FailureStage::Splice, format!("reading {}: {e}", sample.file_path)),
    };
    let blanked = match blank_body(&source, &sample.file_path, &sample.namespace) {
        Ok(b) => b,
        Err(e) => return outcome.failed(FailureStage::Splice, e),
    };
    if let Err(e) = std::fs::write(&target_path, &blanked.text) {
        return outcome.failed(FailureStage::Splice, format!("writing {}: {e}", sample.file_path));
    }

    let mut outcome = outcome;
    let index = match index_repository(&repo, &config.include, &config.exclude, llm, prompts) {
        Ok(index) => index,
        Err(e) => return outcome.failed(FailureStage::Retrieve, e.to_string()),
    };
    let target = NodeId::from(sample.namespace.as_str());
    match index.graph.node(target.as_str()).map(|n| n.kind) {
        Some(NodeKind::Function | NodeKind::Method) => {}
        _ => {
            return outcome.failed(
                FailureStage::Retrieve,
                format!("{} is not a function or method in the graph", sample.namespace),
            )
        }
    }
    let retrieval_config = RetrievalConfig {
        hops: EVAL_HOPS,
        ..config.retrieval
    };
    let task = task_statement(sample);
    let seeds = BTreeSet::from([target]);
    let retrieval = match retrieve_from_seeds(&index.graph, embedder, &sample.requirement, &seeds, &retrieval_config) {
        Ok(r) => r,
        Err(e) => return outcome.failed(FailureStage::Retrieve, e.to_string()),
    };
    outcome.retrieval = Some(retrieval.diagnostics.clone());

    let context = serialize_subgraph_with(
        &index.graph,
        &retrieval.subgraph,
        &retrieval.node_scores,
        config.context_budget,
    );
    let messages = build_generation_prompt(&task, &context, prompts);
    let generated = match generate_code(messages, llm, Some(blanked.original_body.clone())) {
        Ok(g) => g,
        Err(e) => return outcome.failed(FailureStage::Generate, e.to_string()),
    };
    let body = body_from_generated(&generated.code_text, &sample.namespace);
    outcome.generated_body = Some(body.clone());
    let spliced = match splice_body(&blanked.text, &sample.file_path, &sample.namespace, &body) {
        Ok(text) => text,
        Err(e) => return outcome.failed(FailureStage::Splice, e),
    };
    if let Err(e) = std::fs::write(&target_path, spliced) {
        return outcome.failed(FailureStage::Splice, format!("writing {}: {e}", sample.file_path));
    }

    let run = match run_test_command(&sample.test_command, &repo, scratch.path(), config.timeout) {
        Ok(run) => run,
        Err(e) => return outcome.failed(FailureStage::Test, format!("running tests: {e}")),
    };
    outcome.exit_code = run.exit_code;
    outcome.stdout = run.stdout;
    outcome.stderr = run.stderr;
    if run.timed_out {
        return outcome.failed(
            FailureStage::Test,
            format!("timed out after {}s", config.timeout.as_secs_f64()),
        );
    }
    if run.exit_code != Some(0) {
        let code = run.exit_code.map_or("signal".to_string(), |c| c.to_string());
        return outcome.failed(FailureStage::Test, format!("test command exited with {code}"));
    }
    outcome.passed = true;
    outcome
}

/// Fraction of samples that passed. Only k = 1 is defined for one generation
/// per sample.
pub fn pass_at_k(outcomes: &[EvalOutcome], k: usize) -> Result<f64, EvalError> {
    if k != 1 {
        return Err(EvalError::UnsupportedK(k));
    }
    if outcomes.is_empty() {
        return Err(EvalError::NoOutcomes);
    }
    Ok(outcomes.iter().filter(|o| o.passed).count() as f64 / outcomes.len() as f64)
}

/// Run every sample on a pool of `config.jobs` threads; outcomes are ordered
/// by sample id.
pub fn run_batch(
    samples: &[EvalSample],
    config: &EvalConfig,
    llm: &dyn LlmClient,
    embedder: &dyn Embedder,
    prompts: &PromptCatalog,
) -> Result<BenchmarkReport, EvalError> {
    let run_all = || -> Vec<EvalOutcome> {
        samples
            .par_iter()
            .map(|s| run_sample(s, config, llm, embedder, prompts))
            .collect()
    };
    let mut outcomes = match rayon::ThreadPoolBuilder::new().num_threads(config.jobs.max(1)).build() {
        Ok(pool) => pool.install(run_all),
        Err(_) => run_all(),
    };
    outcomes.sort_by(|a, b| a.sample_id.cmp(&b.sample_id));
    let pass_at_1 = pass_at_k(&outcomes, 1)?;
    let mut stage_failures = BTreeMap::new();
    for stage in outcomes.iter().filter_map(|o| o.failure_stage) {
        *stage_failures.entry(stage).or_default() += 1;
    }
    Ok(BenchmarkReport {
        passed: outcomes.iter().filter(|o| o.passed).count(),
        total: outcomes.len(),
        outcomes,
        pass_at_1,
        stage_failures,
        skipped_lines: Vec::new(),
    })
}

/// Plain-text table of outcomes followed by the pass@1 line.
pub fn render_summary(report: &BenchmarkReport) -> String {
    let width = report
        .outcomes
        .iter()
        .map(|o| o.sample_id.len())
        .chain(std::iter::once("sample".len()))
        .max()
        .unwrap_or(6);
    let mut out = format!("{:<width$}  result  stage\n", "sample");
    for o in &report.outcomes {
        let stage = match o.failure_stage {
            Some(FailureStage::Retrieve) => "retrieve",
            Some(FailureStage::Generate) => "generate",
            Some(FailureStage::Splice) => "splice",
            Some(FailureStage::Test) => "test",
            None => "-",
        };
        let result = if o.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{:<width$}  {result:<6}  {stage}\n", o.sample_id));
    }
    for skipped in &report.skipped_lines {
        out.push_str(&format!("skipped line {}: {}\n", skipped.line, skipped.message));
    }
    out.push_str(&format!(
        "pass@1 = {:.1}% ({}/{})\n",
        report.pass_at_1 * 100.0,
        report.passed,
        report.total
    ));
    out
}
