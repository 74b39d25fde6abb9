//! Layered configuration: defaults, then a TOML file, then `CODEGRAPH_*`
//! environment variables, then command-line flags.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Deserialize;

pub const ENV_PREFIX: &str = "CODEGRAPH_";

pub const LLM_MODES: &[&str] = &[
    "mock:offline",
    "mock:echo-reference",
    "mock:always-pass-keyword",
    "mock:canned",
    "remote",
];
pub const EMBEDDER_MODES: &[&str] = &["default", "remote"];

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub repo_root: PathBuf,
    pub include: Vec<String>,
    pub exclude: Vec<String>,
    /// Graph file; `<repo_root>/.codegraph/graph.jsonl` when unset.
    pub graph_path: Option<PathBuf>,
    pub seed_k: usize,
    pub hops: usize,
    pub filter_k: usize,
    pub fulltext_threshold: f64,
    pub vector_threshold: f64,
    pub embedder: String,
    pub embedder_base_url: String,
    pub embedder_model: String,
    pub embedder_dimension: usize,
    pub llm: String,
    pub llm_base_url: String,
    pub llm_model: String,
    pub llm_temperature: f64,
    pub llm_timeout_secs: u64,
    pub llm_canned_path: Option<PathBuf>,
    pub prompts_dir: Option<PathBuf>,
    pub context_budget: usize,
    pub eval_timeout_secs: u64,
    pub eval_exclude: Vec<String>,
    pub jobs: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            repo_root: PathBuf::from("."),
            include: vec!["**/*.py".into()],
            exclude: Vec::new(),
            graph_path: None,
            seed_k: 10,
            hops: 2,
            filter_k: 25,
            fulltext_threshold: 0.0,
            vector_threshold: 0.25,
            embedder: "default".into(),
            embedder_base_url: "http://localhost:8000/v1".into(),
            embedder_model: "text-embedding".into(),
            embedder_dimension: 256,
            llm: "mock:offline".into(),
            llm_base_url: "http://localhost:8000/v1".into(),
            llm_model: "default".into(),
            llm_temperature: 0.0,
            llm_timeout_secs: 120,
            llm_canned_path: None,
            prompts_dir: None,
            context_budget: 24_000,
            eval_timeout_secs: 60,
            eval_exclude: vec!["tests/**".into()],
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("config file {path}: {message}")]
    File { path: String, message: String },
    #[error("{key}: {message}")]
    Value { key: String, message: String },
}

/// One source of settings; unset fields leave lower layers in place.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub repo_root: Option<PathBuf>,
    pub include: Option<Vec<String>>,
    pub exclude: Option<Vec<String>>,
    pub graph_path: Option<PathBuf>,
    pub seed_k: Option<usize>,
    pub hops: Option<usize>,
    pub filter_k: Option<usize>,
    pub fulltext_threshold: Option<f64>,
    pub vector_threshold: Option<f64>,
    pub embedder: Option<String>,
    pub embedder_base_url: Option<String>,
    pub embedder_model: Option<String>,
    pub embedder_dimension: Option<usize>,
    pub llm: Option<String>,
    pub llm_base_url: Option<String>,
    pub llm_model: Option<String>,
    pub llm_temperature: Option<f64>,
    pub llm_timeout_secs: Option<u64>,
    pub llm_canned_path: Option<PathBuf>,
    pub prompts_dir: Option<PathBuf>,
    pub context_budget: Option<usize>,
    pub eval_timeout_secs: Option<u64>,
    pub eval_exclude: Option<Vec<String>>,
    pub jobs: Option<usize>,
}

pub const KEYS: &[&str] = &[
    "repo_root",
    "include",
    "exclude",
    "graph_path",
    "seed_k",
    "hops",
    "filter_k",
    "fulltext_threshold",
    "vector_threshold",
    "embedder",
    "embedder_base_url",
    "embedder_model",
    "embedder_dimension",
    "llm",
    "llm_base_url",
    "llm_model",
    "llm_temperature",
    "llm_timeout_secs",
    "llm_canned_path",
    "prompts_dir",
    "context_budget",
    "eval_timeout_secs",
    "eval_exclude",
    "jobs",
];

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.trim().parse().map_err(|e: T::Err| ConfigError::Value {
        key: key.to_string(),
        message: format!("cannot parse {value:?}: {e}"),
    })
}

fn list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

impl ConfigLayer {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let err = |message: String| ConfigError::File {
            path: path.display().to_string(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
        let mut layer: ConfigLayer = toml::from_str(&text).map_err(|e| err(e.to_string()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for field in [
            &mut layer.repo_root,
            &mut layer.graph_path,
            &mut layer.llm_canned_path,
            &mut layer.prompts_dir,
        ] {
            if let Some(p) = field.as_mut().filter(|p| p.is_relative()) {
                *p = base.join(&*p);
            }
        }
        Ok(layer)
    }

    /// Read `CODEGRAPH_<KEY>` variables through `lookup`; lists are comma separated.
    pub fn from_env(lookup: impl Fn(&str) -> Option<String>) -> Result<Self, ConfigError> {
        let mut layer = ConfigLayer::default();
        for key in KEYS {
            if let Some(value) = lookup(&format!("{ENV_PREFIX}{}", key.to_uppercase())) {
                layer.set(key, &value)?;
            }
        }
        Ok(layer)
    }

    /// Set one key from its string form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let text = || Some(value.to_string());
        match key {
            "repo_root" => self.repo_root = Some(value.into()),
            "include" => self.include = Some(list(value)),
            "exclude" => self.exclude = Some(list(value)),
            "graph_path" => self.graph_path = Some(value.into()),
            "seed_k" => self.seed_k = Some(parse(key, value)?),
            "hops" => self.hops = Some(parse(key, value)?),
            "filter_k" => self.filter_k = Some(parse(key, value)?),
            "fulltext_threshold" => self.fulltext_threshold = Some(parse(key, value)?),
            "vector_threshold" => self.vector_threshold = Some(parse(key, value)?),
            "embedder" => self.embedder = text(),
            "embedder_base_url" => self.embedder_base_url = text(),
            "embedder_model" => self.embedder_model = text(),
            "embedder_dimension" => self.embedder_dimension = Some(parse(key, value)?),
            "llm" => self.llm = text(),
            "llm_base_url" => self.llm_base_url = text(),
            "llm_model" => self.llm_model = text(),
            "llm_temperature" => self.llm_temperature = Some(parse(key, value)?),
            "llm_timeout_secs" => self.llm_timeout_secs = Some(parse(key, value)?),
            "llm_canned_path" => self.llm_canned_path = Some(value.into()),
            "prompts_dir" => self.prompts_dir = Some(value.into()),
            "context_budget" => self.context_budget = Some(parse(key, value)?),
            "eval_timeout_secs" => self.eval_timeout_secs = Some(parse(key, value)?),
            "eval_exclude" => self.eval_exclude = Some(list(value)),
            "jobs" => self.jobs = Some(parse(key, value)?),
            _ => {
                return Err(ConfigError::Value {
                    key: key.to_string(),
                    message: "unknown configuration key".into(),
                })
            }
        }
        Ok(())
    }
}

macro_rules! overlay {
    ($config:ident, $layer:ident, [$($field:ident),*], [$($optional:ident),*]) => {
        $(if let Some(v) = $layer.$field { $config.$field = v; })*
        $(if let Some(v) = $layer.$optional { $config.$optional = Some(v); })*
    };
}

impl Config {
    pub fn apply(mut self, layer: ConfigLayer) -> Self {
        overlay!(
            self,
            layer,
            [
                repo_root,
                include,
                exclude,
                seed_k,
                hops,
                filter_k,
                fulltext_threshold,
                vector_threshold,
                embedder,
                embedder_base_url,
                embedder_model,
                embedder_dimension,
                llm,
                llm_base_url,
                llm_model,
                llm_temperature,
                llm_timeout_secs,
                context_budget,
                eval_timeout_secs,
                eval_exclude,
                jobs
            ],
            [graph_path, llm_canned_path, prompts_dir]
        );
        self
    }

    /// Defaults < file < environment < flags, then validated.
    pub fn resolve(file: Option<ConfigLayer>, env: ConfigLayer, flags: ConfigLayer) -> Result<Self, ConfigError> {
        let config = Config::default()
            .apply(file.unwrap_or_default())
            .apply(env)
            .apply(flags);
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |key: &str, message: String| {
            Err(ConfigError::Value {
                key: key.to_string(),
                message,
            })
        };
        if !LLM_MODES.contains(&self.llm.as_str()) {
            return bad("llm", format!("{:?} is not one of {}", self.llm, LLM_MODES.join(", ")));
        }
        if self.llm == "mock:canned" && self.llm_canned_path.is_none() {
            return bad("llm_canned_path", "required when llm = \"mock:canned\"".into());
        }
        if !EMBEDDER_MODES.contains(&self.embedder.as_str()) {
            return bad(
                "embedder",
                format!("{:?} is not one of {}", self.embedder, EMBEDDER_MODES.join(", ")),
            );
        }
        if !self.fulltext_threshold.is_finite() || self.fulltext_threshold < 0.0 {
            return bad("fulltext_threshold", "must be a finite number >= 0".into());
        }
        if !(-1.0..=1.0).contains(&self.vector_threshold) {
            return bad("vector_threshold", "must lie in [-1, 1]".into());
        }
        if !(0.0..=2.0).contains(&self.llm_temperature) {
            return bad("llm_temperature", "must lie in [0, 2]".into());
        }
        for (key, value) in [
            ("embedder_dimension", self.embedder_dimension as u64),
            ("context_budget", self.context_budget as u64),
            ("eval_timeout_secs", self.eval_timeout_secs),
            ("llm_timeout_secs", self.llm_timeout_secs),
            ("jobs", self.jobs as u64),
        ] {
            if value == 0 {
                return bad(key, "must be positive".into());
            }
        }
        if self.hops > 16 {
            return bad("hops", "must be at most 16".into());
        }
        Ok(())
    }

    pub fn graph_file(&self) -> PathBuf {
        self.graph_path
            .clone()
            .unwrap_or_else(|| self.repo_root.join(".codegraph").join("graph.jsonl"))
    }

    pub fn llm_timeout(&self) -> Duration {
        Duration::from_secs(self.llm_timeout_secs)
    }

    pub fn eval_timeout(&self) -> Duration {
        Duration::from_secs(self.eval_timeout_secs)
    }
}
