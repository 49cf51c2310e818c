use std::str::FromStr;
use std::sync::{Condvar, Mutex};
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cache::{Cache, CacheEntry};
use crate::{CacheKey, GatewayError, LlmRequest, LlmResponse, Usage};

pub const ENV_ENDPOINT: &str = "LLM_ENDPOINT_URL";
pub const ENV_API_KEY: &str = "LLM_API_KEY";
pub const ENV_ORG: &str = "LLM_ORG_ID";

/// Anything that can answer a chat-completion request.
pub trait LlmClient: Send + Sync {
    fn complete(&self, req: &LlmRequest, replicate_index: u32) -> Result<LlmResponse, GatewayError>;
}

/// Raw transport to a model, without caching.
pub trait Backend: Send + Sync {
    fn call(&self, req: &LlmRequest) -> Result<(String, Usage), GatewayError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Read-through cache: hits are served, misses call the endpoint and are stored.
    #[default]
    Live,
    /// Always call the endpoint and overwrite the cache.
    Record,
    /// Serve only from the cache; a miss is an error.
    Replay,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "live" => Ok(Mode::Live),
            "record" => Ok(Mode::Record),
            "replay" => Ok(Mode::Replay),
            other => Err(format!("unknown mode `{other}` (live, record, replay)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            attempts: 3,
            base_delay: Duration::from_millis(500),
        }
    }
}

/// OpenAI-style `/chat/completions` endpoint over blocking HTTP.
pub struct HttpBackend {
    endpoint: String,
    api_key: String,
    org_id: Option<String>,
    retry: RetryPolicy,
    http: reqwest::blocking::Client,
}

impl std::fmt::Debug for HttpBackend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // the key is deliberately absent
        f.debug_struct("HttpBackend")
            .field("endpoint", &self.endpoint)
            .field("retry", &self.retry)
            .finish_non_exhaustive()
    }
}

impl HttpBackend {
    pub fn new(endpoint: impl Into<String>, api_key: impl Into<String>, org_id: Option<String>) -> Result<Self, GatewayError> {
        let http = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(600))
            .build()
            .map_err(|e| GatewayError::Config(format!("http client: {e}")))?;
        Ok(HttpBackend {
            endpoint: endpoint.into(),
            api_key: api_key.into(),
            org_id,
            retry: RetryPolicy::default(),
            http,
        })
    }

    /// Reads endpoint, key and org from the environment.
    pub fn from_env() -> Result<Self, GatewayError> {
        let var = |k: &str| std::env::var(k).ok().filter(|v| !v.trim().is_empty());
        let endpoint = var(ENV_ENDPOINT).ok_or_else(|| GatewayError::Config(format!("{ENV_ENDPOINT} is not set")))?;
        let key = var(ENV_API_KEY).ok_or_else(|| GatewayError::Config(format!("{ENV_API_KEY} is not set")))?;
        HttpBackend::new(endpoint, key, var(ENV_ORG))
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    fn body(req: &LlmRequest) -> Value {
        let mut body = json!({ "model": req.model_id, "messages": req.messages });
        if let Some(t) = req.temperature {
            body["temperature"] = json!(t);
        }
        if let Some(m) = req.max_output_tokens {
            body["max_tokens"] = json!(m);
        }
        body
    }

    fn attempt(&self, body: &Value) -> Result<(String, Usage), Attempt> {
        let mut rb = self.http.post(&self.endpoint).bearer_auth(&self.api_key).json(body);
        if let Some(org) = &self.org_id {
            rb = rb.header("OpenAI-Organization", org);
        }
        let resp = rb.send().map_err(|e| Attempt::Transient(GatewayError::Endpoint {
            status: None,
            body: excerpt(&e.to_string()),
        }))?;
        let status = resp.status();
        let text = resp.text().unwrap_or_default();
        if !status.is_success() {
            let err = GatewayError::Endpoint {
                status: Some(status.as_u16()),
                body: excerpt(&text),
            };
            return Err(if status.as_u16() == 429 || status.is_server_error() {
                Attempt::Transient(err)
            } else {
                Attempt::Fatal(err)
            });
        }
        parse_completion(&text).map_err(Attempt::Fatal)
    }
}

enum Attempt {
    Transient(GatewayError),
    Fatal(GatewayError),
}

fn excerpt(s: &str) -> String {
    const MAX: usize = 300;
    match s.char_indices().nth(MAX) {
        Some((i, _)) => format!("{}...", &s[..i]),
        None => s.to_string(),
    }
}

/// Pulls `choices[0].message.content` and token usage out of a response body.
pub fn parse_completion(body: &str) -> Result<(String, Usage), GatewayError> {
    let bad = |msg: &str| GatewayError::Endpoint {
        status: None,
        body: format!("{msg}: {}", excerpt(body)),
    };
    let v: Value = serde_json::from_str(body).map_err(|_| bad("response is not JSON"))?;
    let text = v["choices"][0]["message"]["content"]
        .as_str()
        .ok_or_else(|| bad("response has no choices[0].message.content"))?
        .to_string();
    let usage = Usage {
        input_tokens: v["usage"]["prompt_tokens"].as_u64().unwrap_or(0),
        output_tokens: v["usage"]["completion_tokens"].as_u64().unwrap_or(0),
    };
    Ok((text, usage))
}

impl Backend for HttpBackend {
    fn call(&self, req: &LlmRequest) -> Result<(String, Usage), GatewayError> {
        let body = Self::body(req);
        let mut last = None;
        for attempt in 0..self.retry.attempts.max(1) {
            if attempt > 0 {
                let delay = self.retry.base_delay * 2u32.pow(attempt - 1);
                log::warn!("retrying {} in {:?} (attempt {})", req.model_id, delay, attempt + 1);
                thread::sleep(delay);
            }
            match self.attempt(&body) {
                Ok(out) => return Ok(out),
                Err(Attempt::Fatal(e)) => return Err(e),
                Err(Attempt::Transient(e)) => last = Some(e),
            }
        }
        Err(last.expect("at least one attempt"))
    }
}

/// Counting semaphore bounding concurrent endpoint calls.
struct Limiter {
    free: Mutex<usize>,
    cv: Condvar,
}

impl Limiter {
    fn new(n: usize) -> Self {
        Limiter {
            free: Mutex::new(n.max(1)),
            cv: Condvar::new(),
        }
    }

    fn acquire(&self) -> Permit<'_> {
        let mut free = self.free.lock().unwrap_or_else(|p| p.into_inner());
        while *free == 0 {
            free = self.cv.wait(free).unwrap_or_else(|p| p.into_inner());
        }
        *free -= 1;
        Permit(self)
    }
}

struct Permit<'a>(&'a Limiter);

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().unwrap_or_else(|p| p.into_inner()) += 1;
        self.0.cv.notify_one();
    }
}

/// The client the harness uses: a cache in front of an optional backend.
pub struct Gateway {
    mode: Mode,
    cache: Option<Cache>,
    backend: Option<Box<dyn Backend>>,
    limiter: Limiter,
}

impl Gateway {
    /// Replay needs a cache; live and record need a backend.
    pub fn new(mode: Mode, cache: Option<Cache>, backend: Option<Box<dyn Backend>>, max_in_flight: usize) -> Result<Self, GatewayError> {
        match mode {
            Mode::Replay if cache.is_none() => {
                return Err(GatewayError::Config("replay mode requires a cache directory".into()))
            }
            Mode::Live | Mode::Record if backend.is_none() => {
                return Err(GatewayError::Config(format!("{mode:?} mode requires an endpoint")))
            }
            _ => {}
        }
        Ok(Gateway {
            mode,
            cache,
            backend,
            limiter: Limiter::new(max_in_flight),
        })
    }

    pub fn replay(cache: Cache) -> Self {
        Gateway::new(Mode::Replay, Some(cache), None, 1).expect("replay with cache is valid")
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }
}

impl LlmClient for Gateway {
    fn complete(&self, req: &LlmRequest, replicate_index: u32) -> Result<LlmResponse, GatewayError> {
        req.validate()?;
        let key = CacheKey::of(req, replicate_index);
        if self.mode != Mode::Record {
            if let Some(cache) = &self.cache {
                if let Some(e) = cache.get(&key)? {
                    log::debug!("cache hit {key}");
                    return Ok(LlmResponse {
                        text: e.text,
                        usage: e.usage,
                        cached: true,
                    });
                }
            }
        }
        let backend = match (self.mode, &self.backend) {
            (Mode::Replay, _) | (_, None) => return Err(GatewayError::CacheMiss(key)),
            (_, Some(b)) => b,
        };
        log::debug!("calling {} for {key}", req.model_id);
        let (text, usage) = {
            let _permit = self.limiter.acquire();
            backend.call(req)?
        };
        if let Some(cache) = &self.cache {
            cache.put(&CacheEntry::new(req.clone(), replicate_index, text.clone(), usage))?;
        }
        Ok(LlmResponse {
            text,
            usage,
            cached: false,
        })
    }
}

impl<T: LlmClient + ?Sized> LlmClient for &T {
    fn complete(&self, req: &LlmRequest, replicate_index: u32) -> Result<LlmResponse, GatewayError> {
        (**self).complete(req, replicate_index)
    }
}

impl<T: LlmClient + ?Sized> LlmClient for Box<T> {
    fn complete(&self, req: &LlmRequest, replicate_index: u32) -> Result<LlmResponse, GatewayError> {
        (**self).complete(req, replicate_index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Message;
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Arc;

    struct Echo(Arc<AtomicUsize>);

    impl Backend for Echo {
        fn call(&self, req: &LlmRequest) -> Result<(String, Usage), GatewayError> {
            self.0.fetch_add(1, Ordering::SeqCst);
            Ok((format!("echo: {}", req.messages[0].content), Usage { input_tokens: 1, output_tokens: 2 }))
        }
    }

    fn req() -> LlmRequest {
        LlmRequest::new("m", vec![Message::user("hello")])
    }

    #[test]
    fn second_call_is_cached() {
        let dir = tempfile::tempdir().unwrap();
        let calls = Arc::new(AtomicUsize::new(0));
        let gw = Gateway::new(Mode::Live, Some(Cache::open(dir.path()).unwrap()), Some(Box::new(Echo(calls.clone()))), 2).unwrap();
        let a = gw.complete(&req(), 0).unwrap();
        let b = gw.complete(&req(), 0).unwrap();
        assert!(!a.cached && b.cached);
        assert_eq!(a.text, b.text);
        assert_eq!(calls.load(Ordering::SeqCst), 1);
        gw.complete(&req(), 1).unwrap();
        assert_eq!(calls.load(Ordering::SeqCst), 2);
    }

    #[test]
    fn record_always_calls() {
        let dir = tempfile::tempdir().unwrap();
        let calls = Arc::new(AtomicUsize::new(0));
        let gw = Gateway::new(Mode::Record, Some(Cache::open(dir.path()).unwrap()), Some(Box::new(Echo(calls.clone()))), 1).unwrap();
        gw.complete(&req(), 0).unwrap();
        gw.complete(&req(), 0).unwrap();
        assert_eq!(calls.load(Ordering::SeqCst), 2);
        let replay = Gateway::replay(Cache::open(dir.path()).unwrap());
        assert!(replay.complete(&req(), 0).unwrap().cached);
    }

    #[test]
    fn replay_miss_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let gw = Gateway::replay(Cache::open(dir.path()).unwrap());
        assert!(matches!(gw.complete(&req(), 0), Err(GatewayError::CacheMiss(_))));
        assert!(matches!(
            Gateway::new(Mode::Replay, None, None, 1),
            Err(GatewayError::Config(_))
        ));
    }

    #[test]
    fn invalid_request_never_reaches_backend() {
        let calls = Arc::new(AtomicUsize::new(0));
        let gw = Gateway::new(Mode::Live, None, Some(Box::new(Echo(calls.clone()))), 1).unwrap();
        let empty = LlmRequest::new("m", vec![]);
        assert!(matches!(gw.complete(&empty, 0), Err(GatewayError::InvalidRequest(_))));
        assert_eq!(calls.load(Ordering::SeqCst), 0);
    }

    #[test]
    fn completion_parsing() {
        let (t, u) = parse_completion(r#"{"choices":[{"message":{"content":" x "}}],"usage":{"prompt_tokens":3,"completion_tokens":4}}"#).unwrap();
        assert_eq!(t, " x ");
        assert_eq!((u.input_tokens, u.output_tokens), (3, 4));
        assert!(parse_completion("{}").is_err());
    }
}
