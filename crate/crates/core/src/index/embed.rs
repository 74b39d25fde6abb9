use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::tokenize_identifier;
use crate::generation::llm::API_KEY_ENV;

pub const DEFAULT_DIMENSION: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingVector {
    values: Vec<f64>,
    norm: f64,
}

impl EmbeddingVector {
    pub fn new(values: Vec<f64>) -> Self {
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        EmbeddingVector { values, norm }
    }

    pub fn zeros(dimension: usize) -> Self {
        EmbeddingVector::new(vec![0.0; dimension])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn dimension(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.norm == 0.0
    }

    /// Cosine similarity; 0 when either vector is zero. Dimensions must match.
    pub fn cosine(&self, other: &EmbeddingVector) -> f64 {
        if self.is_zero() || other.is_zero() {
            return 0.0;
        }
        let dot: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        (dot / (self.norm * other.norm)).clamp(-1.0, 1.0)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EmbedError {
    #[error("embedding service transport error: {0}")]
    Transport(String),
    #[error("embedding service returned an unexpected response: {0}")]
    BadResponse(String),
}

pub trait Embedder: Send + Sync {
    fn dimension(&self) -> usize;

    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, EmbedError>;

    fn embed(&self, text: &str) -> Result<EmbeddingVector, EmbedError> {
        let mut out = self.embed_batch(&[text])?;
        out.pop()
            .ok_or_else(|| EmbedError::BadResponse("no embedding returned".into()))
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// MurmurHash3 64-bit finalizer; spreads FNV's weakly mixed high bits.
fn fmix64(mut h: u64) -> u64 {
    h ^= h >> 33;
    h = h.wrapping_mul(0xff51_afd7_ed55_8ccd);
    h ^= h >> 33;
    h = h.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    h ^ (h >> 33)
}

fn token_hash(token: &str) -> u64 {
    fmix64(fnv1a(token.as_bytes()))
}

/// Signed feature hashing of identifier tokens, L2-normalized.
///
/// Token `t` hashes to `h = fmix64(fnv1a(t))` and adds 1 to bucket `h % dim`,
/// negated when the top bit of `h` is set. If opposite signs cancel every
/// bucket of a nonempty token list, the unsigned counts are used instead so
/// only empty input maps to the zero vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashingEmbedder {
    dimension: usize,
}

impl Default for HashingEmbedder {
    fn default() -> Self {
        HashingEmbedder::new(DEFAULT_DIMENSION)
    }
}

impl HashingEmbedder {
    pub fn new(dimension: usize) -> Self {
        assert!(dimension > 0, "embedding dimension must be positive");
        HashingEmbedder { dimension }
    }

    pub fn vector(&self, text: &str) -> EmbeddingVector {
        let tokens = tokenize_identifier(text);
        let mut signed = vec![0.0; self.dimension];
        let mut unsigned = vec![0.0; self.dimension];
        for token in &tokens {
            let h = token_hash(token);
            let bucket = (h % self.dimension as u64) as usize;
            signed[bucket] += if h >> 63 == 1 { -1.0 } else { 1.0 };
            unsigned[bucket] += 1.0;
        }
        let raw = if !tokens.is_empty() && signed.iter().all(|v| *v == 0.0) {
            unsigned
        } else {
            signed
        };
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return EmbeddingVector::new(raw);
        }
        EmbeddingVector::new(raw.into_iter().map(|v| v / norm).collect())
    }
}

impl Embedder for HashingEmbedder {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, EmbedError> {
        Ok(texts.iter().map(|t| self.vector(t)).collect())
    }
}

/// Client for an OpenAI-compatible `/embeddings` endpoint.
pub struct RemoteEmbedder {
    base_url: String,
    model: String,
    dimension: usize,
    api_key: Option<String>,
    http: reqwest::blocking::Client,
}

#[derive(Serialize)]
struct EmbeddingRequest<'a> {
    model: &'a str,
    input: &'a [&'a str],
}

#[derive(Deserialize)]
struct EmbeddingResponse {
    data: Vec<EmbeddingDatum>,
}

#[derive(Deserialize)]
struct EmbeddingDatum {
    embedding: Vec<f64>,
}

impl RemoteEmbedder {
    pub fn new(base_url: &str, model: &str, dimension: usize, timeout: Duration) -> Result<Self, EmbedError> {
        let http = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| EmbedError::Transport(e.to_string()))?;
        Ok(RemoteEmbedder {
            base_url: base_url.trim_end_matches('/').to_string(),
            model: model.to_string(),
            dimension,
            api_key: std::env::var(API_KEY_ENV).ok().filter(|k| !k.is_empty()),
            http,
        })
    }
}

impl Embedder for RemoteEmbedder {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, EmbedError> {
        if texts.is_empty() {
            return Ok(Vec::new());
        }
        let mut call = self
            .http
            .post(format!("{}/embeddings", self.base_url))
            .json(&EmbeddingRequest {
                model: &self.model,
                input: texts,
            });
        if let Some(key) = &self.api_key {
            call = call.bearer_auth(key);
        }
        let response = call.send().map_err(|e| EmbedError::Transport(e.to_string()))?;
        let status = response.status();
        let body = response.text().map_err(|e| EmbedError::Transport(e.to_string()))?;
        if !status.is_success() {
            return Err(EmbedError::Transport(format!("HTTP {status}: {body}")));
        }
        let parsed: EmbeddingResponse =
            serde_json::from_str(&body).map_err(|e| EmbedError::BadResponse(e.to_string()))?;
        if parsed.data.len() != texts.len() {
            return Err(EmbedError::BadResponse(format!(
                "expected {} embeddings, got {}",
                texts.len(),
                parsed.data.len()
            )));
        }
        parsed
            .data
            .into_iter()
            .map(|d| {
                if d.embedding.len() == self.dimension {
                    Ok(EmbeddingVector::new(d.embedding))
                } else {
                    Err(EmbedError::BadResponse(format!(
                        "embedding has dimension {}, expected {}",
                        d.embedding.len(),
                        self.dimension
                    )))
                }
            })
            .collect()
    }
}
