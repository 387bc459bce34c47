use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use super::{
    parse_answer, Backend, CacheKey, OracleError, OracleRequest, OracleResponse, PromptRegistry, RateLimiter,
    ResponseCache,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_retries: 2,
            base_delay: Duration::from_millis(250),
        }
    }
}

/// Front door for every oracle task. Safe to share between threads.
pub struct OracleClient {
    backend: Arc<dyn Backend>,
    prompts: PromptRegistry,
    cache: ResponseCache,
    limiter: Option<Arc<RateLimiter>>,
    retry: RetryPolicy,
    prompt_version: Option<String>,
}

impl OracleClient {
    pub fn new(backend: Arc<dyn Backend>) -> Self {
        OracleClient {
            backend,
            prompts: PromptRegistry::builtin(),
            cache: ResponseCache::in_memory(),
            limiter: None,
            retry: RetryPolicy::default(),
            prompt_version: None,
        }
    }

    pub fn with_prompts(mut self, prompts: PromptRegistry) -> Self {
        self.prompts = prompts;
        self
    }

    pub fn with_cache(mut self, cache: ResponseCache) -> Self {
        self.cache = cache;
        self
    }

    pub fn with_limiter(mut self, limiter: Arc<RateLimiter>) -> Self {
        self.limiter = Some(limiter);
        self
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    /// Renders every request with this template version instead of its own.
    pub fn with_prompt_version(mut self, version: impl Into<String>) -> Self {
        self.prompt_version = Some(version.into());
        self
    }

    pub fn backend_name(&self) -> &str {
        self.backend.name()
    }

    pub fn cache(&self) -> &ResponseCache {
        &self.cache
    }

    /// Cache first; on a miss, render the prompt, call the backend (retrying
    /// transient failures with exponential backoff) and parse the reply under
    /// the task schema. Only well-formed replies are cached.
    pub fn query(&self, req: &OracleRequest) -> Result<OracleResponse, OracleError> {
        let pinned;
        let req = match &self.prompt_version {
            Some(v) if *v != req.prompt_version => {
                pinned = req.clone().with_version(v.clone());
                &pinned
            }
            _ => req,
        };
        req.validate()?;
        let key = CacheKey::of(req);
        if let Some(raw) = self.cache.get(&key) {
            let answer = parse_answer(req.task, &raw)?;
            return Ok(OracleResponse {
                answer,
                raw,
                latency_ms: 0,
                from_cache: true,
            });
        }
        let prompt = self.prompts.render(req)?;
        let started = Instant::now();
        let mut attempt = 0;
        let raw = loop {
            if let Some(limiter) = &self.limiter {
                limiter.acquire();
            }
            match self.backend.complete(req, &prompt) {
                Ok(raw) => break raw,
                Err(e) if e.is_transient() && attempt < self.retry.max_retries => {
                    thread::sleep(self.retry.base_delay * 2u32.pow(attempt));
                    attempt += 1;
                }
                Err(e) => return Err(e),
            }
        };
        let latency_ms = started.elapsed().as_millis() as u64;
        let answer = parse_answer(req.task, &raw)?;
        self.cache.insert(&key, &raw)?;
        Ok(OracleResponse {
            answer,
            raw,
            latency_ms,
            from_cache: false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{Answer, StubBackend, Task, VerifyLabel};
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Mutex;

    struct Flaky {
        failures: AtomicUsize,
        calls: AtomicUsize,
        transient: bool,
    }

    impl Backend for Flaky {
        fn name(&self) -> &str {
            "flaky"
        }

        fn complete(&self, _: &OracleRequest, _: &str) -> Result<String, OracleError> {
            self.calls.fetch_add(1, Ordering::SeqCst);
            if self.failures.load(Ordering::SeqCst) > 0 {
                self.failures.fetch_sub(1, Ordering::SeqCst);
                return Err(OracleError::Transport {
                    message: "reset".into(),
                    transient: self.transient,
                });
            }
            Ok("VALID".into())
        }
    }

    fn fast() -> RetryPolicy {
        RetryPolicy {
            max_retries: 2,
            base_delay: Duration::from_millis(1),
        }
    }

    fn flaky(failures: usize, transient: bool) -> Arc<Flaky> {
        Arc::new(Flaky {
            failures: AtomicUsize::new(failures),
            calls: AtomicUsize::new(0),
            transient,
        })
    }

    fn step() -> OracleRequest {
        OracleRequest::verify_step(vec!["Cat(tom)".into()], "Animal(tom)", "SUPPORTS")
    }

    #[test]
    fn scripted_verification() {
        let stub = StubBackend::new().with(
            Task::VerifyTranslation,
            "Every cat is an animal. => forall x.(Cat(x)->Animal(x))",
            &["LABEL: verified"],
        );
        let client = OracleClient::new(Arc::new(stub));
        let resp = client
            .query(&OracleRequest::verify_translation(
                "Every cat is an animal.",
                "forall x.(Cat(x)->Animal(x))",
            ))
            .unwrap();
        assert_eq!(resp.answer, Answer::Label(VerifyLabel::Verified));
    }

    #[test]
    fn second_identical_request_hits_cache() {
        let stub = Arc::new(StubBackend::new().with(Task::VerifyStep, "*", &["VALID"]));
        let client = OracleClient::new(stub.clone());
        let first = client.query(&step()).unwrap();
        assert_eq!(stub.calls(), 1);
        let second = client.query(&step()).unwrap();
        assert_eq!(stub.calls(), 1);
        assert!(second.from_cache);
        assert_eq!((first.answer, first.raw), (second.answer, second.raw));
    }

    #[test]
    fn malformed_replies_are_not_cached() {
        let stub = Arc::new(StubBackend::new());
        let client = OracleClient::new(stub.clone());
        assert!(matches!(client.query(&step()), Err(OracleError::Malformed { .. })));
        assert!(matches!(client.query(&step()), Err(OracleError::Malformed { .. })));
        assert_eq!(stub.calls(), 2);
        assert!(client.cache().is_empty());
    }

    #[test]
    fn transient_failures_retry_twice() {
        let b = flaky(2, true);
        let client = OracleClient::new(b.clone()).with_retry(fast());
        assert!(client.query(&step()).is_ok());
        assert_eq!(b.calls.load(Ordering::SeqCst), 3);

        let b = flaky(3, true);
        let client = OracleClient::new(b.clone()).with_retry(fast());
        assert!(matches!(client.query(&step()), Err(OracleError::Transport { .. })));
        assert_eq!(b.calls.load(Ordering::SeqCst), 3);
    }

    #[test]
    fn permanent_failures_do_not_retry() {
        let b = flaky(1, false);
        let client = OracleClient::new(b.clone()).with_retry(fast());
        assert!(client.query(&step()).is_err());
        assert_eq!(b.calls.load(Ordering::SeqCst), 1);
    }

    #[test]
    fn warm_cache_file_replays_cold_run() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.tsv");
        let reqs = [
            step(),
            OracleRequest::translate("Tom is a cat."),
            OracleRequest::reason_step(vec!["Cat(tom)".into()], "Animal(tom)", vec![]),
            step(),
        ];
        let script = || {
            StubBackend::new()
                .with(Task::VerifyStep, "*", &["VALID"])
                .with(Task::Translate, "*", &["FORMULA: Cat(tom)"])
                .with(Task::ReasonStep, "*", &["REFINE: Cat(tom)"])
        };
        let cold = OracleClient::new(Arc::new(script())).with_cache(ResponseCache::open(&path).unwrap());
        let cold_out: Vec<_> = reqs.iter().map(|r| cold.query(r).unwrap().raw).collect();
        drop(cold);
        let backend = Arc::new(StubBackend::new());
        let warm = OracleClient::new(backend.clone()).with_cache(ResponseCache::open(&path).unwrap());
        let warm_out: Vec<_> = reqs.iter().map(|r| warm.query(r).unwrap().raw).collect();
        assert_eq!(cold_out, warm_out);
        assert_eq!(backend.calls(), 0);
    }

    struct Counting {
        stamps: Mutex<Vec<Instant>>,
    }

    impl Backend for Counting {
        fn name(&self) -> &str {
            "counting"
        }

        fn complete(&self, _: &OracleRequest, _: &str) -> Result<String, OracleError> {
            self.stamps.lock().unwrap().push(Instant::now());
            Ok("INVALID".into())
        }
    }

    #[test]
    fn concurrent_callers_respect_rate() {
        let rps = 20.0;
        let backend = Arc::new(Counting {
            stamps: Mutex::new(Vec::new()),
        });
        let client = Arc::new(OracleClient::new(backend.clone()).with_limiter(Arc::new(RateLimiter::new(rps))));
        let handles: Vec<_> = (0..3)
            .map(|t| {
                let client = client.clone();
                thread::spawn(move || {
                    for i in 0..10 {
                        let req = OracleRequest::verify_step(vec![], &format!("H{t}_{i}"), "SUPPORTS");
                        client.query(&req).unwrap();
                    }
                })
            })
            .collect();
        for h in handles {
            h.join().unwrap();
        }
        let mut stamps = backend.stamps.lock().unwrap().clone();
        stamps.sort();
        assert_eq!(stamps.len(), 30);
        // at most `rps` starts in any half-open one-second window
        for (i, start) in stamps.iter().enumerate() {
            let in_window = stamps[i..]
                .iter()
                .take_while(|t| t.duration_since(*start) < Duration::from_secs(1))
                .count();
            assert!(in_window as f64 <= rps, "{in_window} calls within one second");
        }
    }
}
