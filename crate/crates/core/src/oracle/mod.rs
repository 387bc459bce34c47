//! Natural-language backend: prompt rendering, schema-checked answers,
//! caching, rate limiting, retries, and the HTTP and scripted backends.

mod cache;
mod client;
mod http;
mod limiter;
mod prompts;
mod request;
mod response;
mod stub;

use thiserror::Error;

pub use cache::ResponseCache;
pub use client::{OracleClient, RetryPolicy};
pub use http::{HttpBackend, API_KEY_ENV};
pub use limiter::RateLimiter;
pub use prompts::{load_prompts, PromptRegistry};
pub use request::{collapse_whitespace, CacheKey, OracleRequest, Payload, Task, DEFAULT_PROMPT_VERSION};
pub use response::{parse_answer, Answer, OracleResponse, StepAnswer, VerifyLabel};
pub use stub::{StubBackend, UNSCRIPTED_REPLY};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("transport failure: {message}")]
    Transport { message: String, transient: bool },
    #[error("malformed {task} response: {raw:?}")]
    Malformed { task: Task, raw: String },
    #[error("backend not configured: {0}")]
    Unconfigured(String),
    #[error("no prompt template for {task}{}", version.as_ref().map(|v| format!(" version {v}")).unwrap_or_default())]
    MissingTemplate { task: Task, version: Option<String> },
    #[error("template {task}.{version} lacks {{{{{placeholder}}}}}")]
    MissingPlaceholder {
        task: Task,
        version: String,
        placeholder: String,
    },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("io: {0}")]
    Io(String),
}

impl OracleError {
    pub fn is_transient(&self) -> bool {
        matches!(self, OracleError::Transport { transient: true, .. })
    }
}

/// Something that turns a rendered prompt into raw completion text.
pub trait Backend: Send + Sync {
    fn name(&self) -> &str;

    fn complete(&self, req: &OracleRequest, prompt: &str) -> Result<String, OracleError>;
}
