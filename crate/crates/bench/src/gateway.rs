//! Uniform completion interface over a live HTTP endpoint, a deterministic
//! replay store, and inline fixtures.
//!
//! Every live completion is persisted to a write-once cache keyed by a
//! content hash of the full request; replay and fixture backends never
//! touch the network, so whole evaluation runs are pure functions of
//! (dataset, fixtures, config).

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// A single completion call. Temperature defaults to 0 for reproducible
/// decoding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionRequest {
    pub prompt: String,
    pub model_id: String,
    pub temperature: f64,
    pub max_tokens: u32,
    pub stop: Vec<String>,
}

impl CompletionRequest {
    pub fn new(prompt: impl Into<String>, model_id: impl Into<String>) -> Self {
        CompletionRequest {
            prompt: prompt.into(),
            model_id: model_id.into(),
            temperature: 0.0,
            max_tokens: 256,
            stop: Vec::new(),
        }
    }

    pub fn with_stop<I, S>(mut self, stop: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.stop = stop.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_max_tokens(mut self, max_tokens: u32) -> Self {
        self.max_tokens = max_tokens;
        self
    }
}

/// Stable content hash over every request field. Identical requests
/// collide; any field change produces a different key.
pub fn cache_key(req: &CompletionRequest) -> String {
    let mut hasher = Sha256::new();
    let mut feed = |bytes: &[u8]| {
        hasher.update((bytes.len() as u64).to_le_bytes());
        hasher.update(bytes);
    };
    feed(req.model_id.as_bytes());
    feed(&req.temperature.to_le_bytes());
    feed(&req.max_tokens.to_le_bytes());
    feed(&(req.stop.len() as u64).to_le_bytes());
    for s in &req.stop {
        feed(s.as_bytes());
    }
    feed(req.prompt.as_bytes());
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, thiserror::Error)]
pub enum GatewayError {
    #[error("replay miss for key {0}")]
    ReplayMiss(String),
    #[error("transport error: {message}{}", retry_after.map(|s| format!(" (retry after {s}s)")).unwrap_or_default())]
    Transport {
        message: String,
        retry_after: Option<u64>,
    },
    #[error("credential environment variable {0} is not set")]
    Auth(String),
    #[error("cache conflict: key {0} already stores a different completion")]
    CacheConflict(String),
    #[error("cache io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache entry is not valid json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid gateway configuration: {0}")]
    InvalidConfig(String),
}

/// One network failure, with enough detail to decide about a retry.
#[derive(Debug)]
pub struct TransportFailure {
    pub message: String,
    pub status: Option<u16>,
    pub retry_after: Option<u64>,
}

impl TransportFailure {
    /// Retries cover transport-level failures, 5xx, and 429 — never other
    /// 4xx responses.
    fn retryable(&self) -> bool {
        match self.status {
            None => true,
            Some(429) => true,
            Some(s) => (500..600).contains(&s),
        }
    }
}

/// Pluggable HTTP layer so tests can count invocations without a server.
pub trait Transport: Send + Sync {
    fn post(
        &self,
        endpoint: &str,
        credential: Option<&str>,
        req: &CompletionRequest,
        timeout_secs: u64,
    ) -> Result<String, TransportFailure>;
}

/// Completion-style HTTP transport. A prompt maps onto the standard
/// completions request body; responses are accepted in either
/// `{"choices": [{"text": ...}]}` or `{"completion": ...}` shape.
pub struct HttpTransport;

impl Transport for HttpTransport {
    fn post(
        &self,
        endpoint: &str,
        credential: Option<&str>,
        req: &CompletionRequest,
        timeout_secs: u64,
    ) -> Result<String, TransportFailure> {
        let body = serde_json::json!({
            "model": req.model_id,
            "prompt": req.prompt,
            "temperature": req.temperature,
            "max_tokens": req.max_tokens,
            "stop": req.stop,
        });
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(timeout_secs)))
            .build()
            .into();
        let mut request = agent.post(endpoint);
        if let Some(cred) = credential {
            request = request.header("authorization", &format!("Bearer {cred}"));
        }
        let mut response = request.send_json(&body).map_err(|e| match e {
            ureq::Error::StatusCode(code) => TransportFailure {
                message: format!("endpoint returned status {code}"),
                status: Some(code),
                retry_after: None,
            },
            other => TransportFailure {
                message: other.to_string(),
                status: None,
                retry_after: None,
            },
        })?;
        let value: serde_json::Value =
            response.body_mut().read_json().map_err(|e| TransportFailure {
                message: format!("invalid response body: {e}"),
                status: None,
                retry_after: None,
            })?;
        value["choices"][0]["text"]
            .as_str()
            .or_else(|| value["completion"].as_str())
            .or_else(|| value["text"].as_str())
            .map(str::to_string)
            .ok_or_else(|| TransportFailure {
                message: "response contains no completion text".to_string(),
                status: None,
                retry_after: None,
            })
    }
}

/// Live endpoint configuration. The credential is looked up from the
/// environment at call time and never logged or persisted.
#[derive(Clone)]
pub struct LiveConfig {
    pub endpoint: String,
    pub credential_env: String,
    pub cache_dir: PathBuf,
    pub timeout_secs: u64,
    pub transport: Arc<dyn Transport>,
}

/// Completion source. Replay and fixture backends never perform network
/// access.
pub enum Backend {
    Live(LiveConfig),
    Replay { dir: PathBuf },
    Fixture { entries: HashMap<String, String> },
}

/// One persisted completion, stored as `<cache_dir>/<key>.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub model_id: String,
    pub temperature: f64,
    pub max_tokens: u32,
    pub stop: Vec<String>,
    pub prompt: String,
    pub completion: String,
    /// Unix seconds.
    pub created_at: u64,
}

pub fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.json"))
}

pub fn read_cache_entry(dir: &Path, key: &str) -> Result<Option<CacheEntry>, GatewayError> {
    let path = entry_path(dir, key);
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(path)?;
    Ok(Some(serde_json::from_str(&text)?))
}

/// Write-once store: rewriting a key with identical text is a no-op,
/// rewriting it with different text is a conflict.
pub fn write_cache_entry(
    dir: &Path,
    req: &CompletionRequest,
    completion: &str,
) -> Result<(), GatewayError> {
    let key = cache_key(req);
    if let Some(existing) = read_cache_entry(dir, &key)? {
        if existing.completion == completion {
            return Ok(());
        }
        return Err(GatewayError::CacheConflict(key));
    }
    fs::create_dir_all(dir)?;
    let entry = CacheEntry {
        key: key.clone(),
        model_id: req.model_id.clone(),
        temperature: req.temperature,
        max_tokens: req.max_tokens,
        stop: req.stop.clone(),
        prompt: req.prompt.clone(),
        completion: completion.to_string(),
        created_at: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };
    fs::write(entry_path(dir, &key), serde_json::to_string_pretty(&entry)?)?;
    Ok(())
}

const MAX_ATTEMPTS: u32 = 3;
const BACKOFF_BASE_MS: u64 = 500;

/// Thread-safe completion frontend over a [`Backend`].
pub struct Gateway {
    backend: Backend,
    cache_lock: Mutex<()>,
    live_calls: AtomicUsize,
}

impl Gateway {
    pub fn new(backend: Backend) -> Self {
        Gateway {
            backend,
            cache_lock: Mutex::new(()),
            live_calls: AtomicUsize::new(0),
        }
    }

    /// Number of transport invocations performed so far (live mode only).
    pub fn transport_invocations(&self) -> usize {
        self.live_calls.load(Ordering::SeqCst)
    }

    pub fn complete(&self, req: &CompletionRequest) -> Result<String, GatewayError> {
        let key = cache_key(req);
        match &self.backend {
            Backend::Fixture { entries } => entries
                .get(&key)
                .cloned()
                .ok_or(GatewayError::ReplayMiss(key)),
            Backend::Replay { dir } => read_cache_entry(dir, &key)?
                .map(|e| e.completion)
                .ok_or(GatewayError::ReplayMiss(key)),
            Backend::Live(cfg) => self.complete_live(cfg, req, &key),
        }
    }

    fn complete_live(
        &self,
        cfg: &LiveConfig,
        req: &CompletionRequest,
        key: &str,
    ) -> Result<String, GatewayError> {
        if let Some(entry) = read_cache_entry(&cfg.cache_dir, key)? {
            return Ok(entry.completion);
        }
        let credential = if cfg.credential_env.is_empty() {
            None
        } else {
            match std::env::var(&cfg.credential_env) {
                Ok(v) => Some(v),
                Err(_) => return Err(GatewayError::Auth(cfg.credential_env.clone())),
            }
        };

        let mut last_failure: Option<TransportFailure> = None;
        for attempt in 0..MAX_ATTEMPTS {
            if attempt > 0 {
                let failure = last_failure.as_ref().expect("set on previous attempt");
                // Exponential backoff with full jitter.
                let cap = BACKOFF_BASE_MS * (1 << (attempt - 1));
                let base = failure.retry_after.map(|s| s * 1000).unwrap_or(cap);
                let sleep_ms = rand::thread_rng().gen_range(0..=base);
                std::thread::sleep(Duration::from_millis(sleep_ms));
            }
            self.live_calls.fetch_add(1, Ordering::SeqCst);
            match cfg.transport.post(
                &cfg.endpoint,
                credential.as_deref(),
                req,
                cfg.timeout_secs,
            ) {
                Ok(completion) => {
                    let _guard = self.cache_lock.lock().expect("cache lock");
                    write_cache_entry(&cfg.cache_dir, req, &completion)?;
                    return Ok(completion);
                }
                Err(failure) => {
                    if !failure.retryable() {
                        return Err(GatewayError::Transport {
                            message: failure.message,
                            retry_after: failure.retry_after,
                        });
                    }
                    last_failure = Some(failure);
                }
            }
        }
        let failure = last_failure.expect("at least one attempt");
        Err(GatewayError::Transport {
            message: failure.message,
            retry_after: failure.retry_after,
        })
    }
}

/// Live-mode settings file (JSON).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiveSettings {
    pub endpoint: String,
    #[serde(default)]
    pub credential_env: String,
    #[serde(default = "default_timeout")]
    pub timeout_secs: u64,
    pub cache_dir: PathBuf,
}

fn default_timeout() -> u64 {
    60
}

pub fn load_live_settings(path: &Path) -> Result<LiveSettings, GatewayError> {
    let text = fs::read_to_string(path)
        .map_err(|e| GatewayError::InvalidConfig(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| GatewayError::InvalidConfig(format!("{}: {e}", path.display())))
}
