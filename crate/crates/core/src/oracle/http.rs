use std::time::Duration;

use serde_json::{json, Value};

use super::{Backend, OracleError, OracleRequest};

pub const API_KEY_ENV: &str = "HBLR_API_KEY";

/// Chat-completion client: `POST {base_url}/chat/completions`, temperature 0.
pub struct HttpBackend {
    base_url: String,
    model: String,
    api_key: Option<String>,
    agent: ureq::Agent,
    trace: bool,
}

impl HttpBackend {
    pub fn new(base_url: &str, model: &str, api_key: Option<String>) -> Self {
        HttpBackend {
            base_url: base_url.trim_end_matches('/').to_string(),
            model: model.to_string(),
            api_key,
            agent: ureq::AgentBuilder::new().timeout(Duration::from_secs(60)).build(),
            trace: false,
        }
    }

    /// Reads the credential from `HBLR_API_KEY`.
    pub fn from_env(base_url: &str, model: &str) -> Self {
        Self::new(base_url, model, std::env::var(API_KEY_ENV).ok().filter(|k| !k.is_empty()))
    }

    /// Logs request and response bodies to stderr, credential redacted.
    pub fn with_trace(mut self, on: bool) -> Self {
        self.trace = on;
        self
    }

    fn log(&self, what: &str, body: &str) {
        if self.trace {
            let mut line = body.to_string();
            if let Some(key) = &self.api_key {
                line = line.replace(key.as_str(), "[REDACTED]");
            }
            eprintln!("[oracle] {what}: {line}");
        }
    }
}

fn transport(message: String, transient: bool) -> OracleError {
    OracleError::Transport { message, transient }
}

impl Backend for HttpBackend {
    fn name(&self) -> &str {
        "http"
    }

    fn complete(&self, req: &OracleRequest, prompt: &str) -> Result<String, OracleError> {
        let key = self
            .api_key
            .as_ref()
            .ok_or_else(|| OracleError::Unconfigured(format!("{API_KEY_ENV} is not set")))?;
        let url = format!("{}/chat/completions", self.base_url);
        let body = json!({
            "model": self.model,
            "temperature": 0,
            "messages": [{"role": "user", "content": prompt}],
        });
        self.log("request", &format!("POST {url} Authorization: Bearer [REDACTED] {body}"));
        let result = self
            .agent
            .post(&url)
            .set("Authorization", &format!("Bearer {key}"))
            .send_json(body);
        let response = match result {
            Ok(r) => r,
            Err(ureq::Error::Status(code, r)) => {
                let text = r.into_string().unwrap_or_default();
                self.log("response", &format!("HTTP {code} {text}"));
                return Err(transport(format!("HTTP {code}"), code == 429 || code >= 500));
            }
            Err(e) => return Err(transport(e.to_string(), true)),
        };
        let text = response.into_string().map_err(|e| transport(e.to_string(), true))?;
        self.log("response", &text);
        let value: Value = serde_json::from_str(&text).map_err(|_| OracleError::Malformed {
            task: req.task,
            raw: text.clone(),
        })?;
        value["choices"][0]["message"]["content"]
            .as_str()
            .map(str::to_string)
            .ok_or(OracleError::Malformed { task: req.task, raw: text })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{OracleClient, Task};
    use std::io::{BufRead, BufReader, Read, Write};
    use std::net::TcpListener;
    use std::sync::Arc;
    use std::thread;

    /// Serves `n` requests, each answered with `reply` as the assistant message.
    fn serve(reply: &'static str, n: usize) -> (String, thread::JoinHandle<Vec<String>>) {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        let handle = thread::spawn(move || {
            let mut seen = Vec::new();
            for _ in 0..n {
                let (stream, _) = listener.accept().unwrap();
                let mut reader = BufReader::new(stream.try_clone().unwrap());
                let mut len = 0;
                let mut head = String::new();
                loop {
                    let mut line = String::new();
                    reader.read_line(&mut line).unwrap();
                    if line == "\r\n" || line.is_empty() {
                        break;
                    }
                    if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                        len = v.trim().parse().unwrap();
                    }
                    head.push_str(&line);
                }
                let mut body = vec![0; len];
                reader.read_exact(&mut body).unwrap();
                seen.push(format!("{head}\n{}", String::from_utf8(body).unwrap()));
                let payload = json!({"choices": [{"message": {"role": "assistant", "content": reply}}]}).to_string();
                let mut stream = stream;
                write!(
                    stream,
                    "HTTP/1.1 200 OK\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{}",
                    payload.len(),
                    payload
                )
                .unwrap();
            }
            seen
        });
        (format!("http://{addr}"), handle)
    }

    #[test]
    fn free_text_verdict_is_malformed() {
        let (url, server) = serve("Looks fine to me!", 1);
        let backend = HttpBackend::new(&url, "test-model", Some("secret".into()));
        let client = OracleClient::new(Arc::new(backend));
        let err = client
            .query(&OracleRequest::verify_translation("Tom is a cat.", "Cat(tom)"))
            .unwrap_err();
        assert!(matches!(err, OracleError::Malformed { task: Task::VerifyTranslation, .. }));
        let seen = server.join().unwrap();
        assert!(seen[0].contains("authorization: Bearer secret") || seen[0].contains("Authorization: Bearer secret"));
        assert!(seen[0].contains("\"temperature\":0"));
        assert!(seen[0].contains("test-model"));
    }

    #[test]
    fn well_formed_reply_parses() {
        let (url, server) = serve("LABEL: verified", 1);
        let client = OracleClient::new(Arc::new(HttpBackend::new(&url, "m", Some("k".into()))));
        let resp = client
            .query(&OracleRequest::verify_translation("Tom is a cat.", "Cat(tom)"))
            .unwrap();
        assert_eq!(resp.raw, "LABEL: verified");
        server.join().unwrap();
    }

    #[test]
    fn missing_key_is_unconfigured() {
        let backend = HttpBackend::new("http://127.0.0.1:9", "m", None);
        let err = backend.complete(&OracleRequest::translate("x"), "p").unwrap_err();
        assert!(matches!(err, OracleError::Unconfigured(_)));
    }
}
