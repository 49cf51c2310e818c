//! Chat-completion access for the benchmark: one request type, a
//! content-addressed cache and live/record/replay modes.

mod cache;
mod client;
mod request;

pub use cache::{Cache, CacheEntry};
pub use client::{
    parse_completion, Backend, Gateway, HttpBackend, LlmClient, Mode, RetryPolicy, ENV_API_KEY,
    ENV_ENDPOINT, ENV_ORG,
};
pub use request::{CacheKey, LlmRequest, LlmResponse, Message, Role, Usage};

#[derive(Debug, thiserror::Error)]
pub enum GatewayError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("endpoint error{}: {body}", status.map(|s| format!(" (HTTP {s})")).unwrap_or_default())]
    Endpoint { status: Option<u16>, body: String },
    #[error("cache miss for key {0} in replay mode")]
    CacheMiss(CacheKey),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("cache error: {0}")]
    Cache(String),
}
