//! Chat-completion client contract, the scripted mock and the HTTP client.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const API_KEY_ENV: &str = "CODEGRAPH_LLM_KEY";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub role: Role,
    pub content: String,
}

impl Message {
    pub fn system(content: impl Into<String>) -> Self {
        Message {
            role: Role::System,
            content: content.into(),
        }
    }

    pub fn user(content: impl Into<String>) -> Self {
        Message {
            role: Role::User,
            content: content.into(),
        }
    }
}

/// What a request is for. Lets scripted mocks answer only the calls they
/// are meant to answer; never sent over the wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Purpose {
    Describe,
    ExtractEntities,
    #[default]
    Generate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChatRequest {
    pub model: String,
    pub temperature: f64,
    pub messages: Vec<Message>,
    #[serde(skip)]
    pub purpose: Purpose,
    /// Known-good answer for benchmark runs; read only by the echo mock.
    #[serde(skip)]
    pub reference: Option<String>,
}

impl ChatRequest {
    pub fn new(messages: Vec<Message>, purpose: Purpose) -> Self {
        ChatRequest {
            model: String::new(),
            temperature: 0.0,
            messages,
            purpose,
            reference: None,
        }
    }

    /// Hex SHA-256 over roles and contents; keys canned mock responses.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for message in &self.messages {
            hasher.update(serde_json::to_string(&message.role).unwrap_or_default().as_bytes());
            hasher.update([0]);
            hasher.update(message.content.as_bytes());
            hasher.update([0]);
        }
        hex::encode(hasher.finalize())
    }

    fn validate(&self) -> Result<(), LlmError> {
        match self.messages.first() {
            None => Err(LlmError::InvalidRequest("no messages".into())),
            Some(m) if m.role != Role::System => Err(LlmError::InvalidRequest(
                "first message must be the system prompt".into(),
            )),
            Some(_) => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Remote,
    Mock,
}

#[derive(Debug, Clone, Serialize)]
pub struct LlmExchange {
    pub request: ChatRequest,
    pub response_text: String,
    pub latency: Duration,
    pub origin: Origin,
}

#[derive(Debug, thiserror::Error)]
pub enum LlmError {
    #[error("LLM is offline")]
    Offline,
    #[error("mock has no scripted response for this {0:?} request")]
    NoScriptedResponse(Purpose),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("unexpected response: {0}")]
    BadResponse(String),
    #[error("canned response file {path}: {message}")]
    CannedFile { path: String, message: String },
}

pub trait LlmClient: Send + Sync {
    fn complete(&self, request: ChatRequest) -> Result<LlmExchange, LlmError>;

    fn model(&self) -> &str;

    fn temperature(&self) -> f64;

    /// Fill in model and temperature, then send.
    fn send(
        &self,
        messages: Vec<Message>,
        purpose: Purpose,
        reference: Option<String>,
    ) -> Result<LlmExchange, LlmError> {
        let request = ChatRequest {
            model: self.model().to_string(),
            temperature: self.temperature(),
            messages,
            purpose,
            reference,
        };
        self.complete(request)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CannedResponses {
    #[serde(default)]
    pub fingerprints: BTreeMap<String, String>,
    #[serde(default)]
    pub generate: Option<String>,
    #[serde(default)]
    pub describe: Option<String>,
    #[serde(default)]
    pub extract_entities: Option<String>,
    #[serde(default)]
    pub default: Option<String>,
}

impl CannedResponses {
    pub fn load(path: &Path) -> Result<Self, LlmError> {
        let err = |message: String| LlmError::CannedFile {
            path: path.display().to_string(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| err(e.to_string()))
    }

    fn lookup(&self, request: &ChatRequest) -> Option<&String> {
        let by_purpose = match request.purpose {
            Purpose::Generate => self.generate.as_ref(),
            Purpose::Describe => self.describe.as_ref(),
            Purpose::ExtractEntities => self.extract_entities.as_ref(),
        };
        self.fingerprints
            .get(&request.fingerprint())
            .or(by_purpose)
            .or(self.default.as_ref())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MockScript {
    /// Every call fails, so callers take their offline fallbacks.
    Offline,
    /// Generation calls return the request's reference body in a fence.
    EchoReference,
    /// Generation calls return a fenced `pass`.
    AlwaysPassKeyword,
    Canned(CannedResponses),
}

impl MockScript {
    pub fn name(&self) -> &'static str {
        match self {
            MockScript::Offline => "offline",
            MockScript::EchoReference => "echo-reference",
            MockScript::AlwaysPassKeyword => "always-pass-keyword",
            MockScript::Canned(_) => "canned",
        }
    }
}

#[derive(Debug, Clone)]
pub struct MockLlm {
    script: MockScript,
    model: String,
}

impl MockLlm {
    pub fn new(script: MockScript) -> Self {
        MockLlm {
            model: format!("mock:{}", script.name()),
            script,
        }
    }

    pub fn offline() -> Self {
        MockLlm::new(MockScript::Offline)
    }

    /// Canned mock answering every request with `text`.
    pub fn fixed(text: impl Into<String>) -> Self {
        MockLlm::new(MockScript::Canned(CannedResponses {
            default: Some(text.into()),
            ..CannedResponses::default()
        }))
    }
}

impl LlmClient for MockLlm {
    fn complete(&self, request: ChatRequest) -> Result<LlmExchange, LlmError> {
        request.validate()?;
        let started = Instant::now();
        let generate = request.purpose == Purpose::Generate;
        let response = match &self.script {
            MockScript::Offline => return Err(LlmError::Offline),
            MockScript::EchoReference if generate => match &request.reference {
                Some(body) => format!("```python\n{body}\n```"),
                None => return Err(LlmError::NoScriptedResponse(request.purpose)),
            },
            MockScript::AlwaysPassKeyword if generate => "```python\npass\n```".to_string(),
            MockScript::EchoReference | MockScript::AlwaysPassKeyword => {
                return Err(LlmError::NoScriptedResponse(request.purpose))
            }
            MockScript::Canned(canned) => canned
                .lookup(&request)
                .cloned()
                .ok_or(LlmError::NoScriptedResponse(request.purpose))?,
        };
        Ok(LlmExchange {
            request,
            response_text: response,
            latency: started.elapsed(),
            origin: Origin::Mock,
        })
    }

    fn model(&self) -> &str {
        &self.model
    }

    fn temperature(&self) -> f64 {
        0.0
    }
}

/// OpenAI-compatible `/chat/completions` client.
pub struct RemoteLlm {
    base_url: String,
    model: String,
    temperature: f64,
    api_key: Option<String>,
    http: reqwest::blocking::Client,
}

impl RemoteLlm {
    pub fn new(base_url: &str, model: &str, temperature: f64, timeout: Duration) -> Result<Self, LlmError> {
        let http = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| LlmError::Transport(e.to_string()))?;
        Ok(RemoteLlm {
            base_url: base_url.trim_end_matches('/').to_string(),
            model: model.to_string(),
            temperature,
            api_key: std::env::var(API_KEY_ENV).ok().filter(|k| !k.is_empty()),
            http,
        })
    }

    pub fn with_api_key(mut self, key: Option<String>) -> Self {
        self.api_key = key;
        self
    }
}

#[derive(Deserialize)]
struct CompletionResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ChoiceMessage,
}

#[derive(Deserialize)]
struct ChoiceMessage {
    content: Option<String>,
}

impl LlmClient for RemoteLlm {
    fn complete(&self, request: ChatRequest) -> Result<LlmExchange, LlmError> {
        request.validate()?;
        let started = Instant::now();
        let mut call = self
            .http
            .post(format!("{}/chat/completions", self.base_url))
            .json(&request);
        if let Some(key) = &self.api_key {
            call = call.bearer_auth(key);
        }
        let response = call.send().map_err(|e| LlmError::Transport(e.to_string()))?;
        let status = response.status();
        let body = response.text().map_err(|e| LlmError::Transport(e.to_string()))?;
        if !status.is_success() {
            return Err(LlmError::Transport(format!("HTTP {status}: {body}")));
        }
        let parsed: CompletionResponse =
            serde_json::from_str(&body).map_err(|e| LlmError::BadResponse(e.to_string()))?;
        let content = parsed
            .choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .ok_or_else(|| LlmError::BadResponse("missing choices[0].message.content".into()))?;
        Ok(LlmExchange {
            request,
            response_text: content,
            latency: started.elapsed(),
            origin: Origin::Remote,
        })
    }

    fn model(&self) -> &str {
        &self.model
    }

    fn temperature(&self) -> f64 {
        self.temperature
    }
}
