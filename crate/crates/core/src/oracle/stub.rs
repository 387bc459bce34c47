use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::{collapse_whitespace, Backend, OracleError, OracleRequest, Task};

/// Reply to any request the script does not cover. It fits no answer
/// schema, so the caller sees a malformed response.
pub const UNSCRIPTED_REPLY: &str = "UNKNOWN";

/// Scripted offline backend.
///
/// Entries are keyed by task and the request's primary text (the sentence
/// for translation tasks, the hypothesis for step tasks). A key of the form
/// `primary => secondary` narrows on the formula or proposed step as well,
/// and `*` matches anything for that task. Each key holds a reply sequence
/// consumed one per call; the last reply repeats once the sequence runs out.
#[derive(Debug, Default)]
pub struct StubBackend {
    script: HashMap<(Task, String), Vec<String>>,
    cursors: Mutex<HashMap<(Task, String), usize>>,
    calls: AtomicUsize,
}

fn secondary(req: &OracleRequest) -> Option<&str> {
    match req.task {
        Task::VerifyTranslation => req.payload.formula.as_deref(),
        Task::VerifyStep => req.payload.step.as_deref(),
        Task::Translate | Task::ReasonStep => None,
    }
}

impl StubBackend {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with<S: AsRef<str>>(mut self, task: Task, key: &str, replies: &[S]) -> Self {
        self.add(task, key, replies.iter().map(|r| r.as_ref().to_string()).collect());
        self
    }

    pub fn add(&mut self, task: Task, key: &str, replies: Vec<String>) {
        assert!(!replies.is_empty(), "a script entry needs at least one reply");
        self.script.insert((task, normalize_key(key)), replies);
    }

    /// Reads a script file: one `task<TAB>key<TAB>reply[<TAB>reply...]`
    /// entry per line; blank lines and `#` comments are skipped.
    pub fn from_file(path: &Path) -> Result<Self, OracleError> {
        let text = fs::read_to_string(path).map_err(|e| OracleError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|(line, msg)| OracleError::Io(format!("{}:{line}: {msg}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, (usize, String)> {
        let mut stub = StubBackend::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() < 3 {
                return Err((n + 1, "expected task, key and at least one reply".into()));
            }
            let task: Task = fields[0].trim().parse().map_err(|e| (n + 1, e))?;
            stub.add(task, fields[1], fields[2..].iter().map(|s| s.to_string()).collect());
        }
        Ok(stub)
    }

    /// Number of completions served so far.
    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    fn lookup(&self, req: &OracleRequest) -> Option<(Task, String)> {
        let primary = collapse_whitespace(req.primary_text());
        let mut keys = Vec::with_capacity(3);
        if let Some(second) = secondary(req) {
            keys.push(format!("{primary} => {}", collapse_whitespace(second)));
        }
        keys.push(primary);
        keys.push("*".to_string());
        keys.into_iter()
            .map(|k| (req.task, k))
            .find(|k| self.script.contains_key(k))
    }
}

fn normalize_key(key: &str) -> String {
    match key.split_once("=>") {
        Some((a, b)) => format!("{} => {}", collapse_whitespace(a), collapse_whitespace(b)),
        None => collapse_whitespace(key),
    }
}

impl Backend for StubBackend {
    fn name(&self) -> &str {
        "stub"
    }

    fn complete(&self, req: &OracleRequest, _prompt: &str) -> Result<String, OracleError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        let Some(key) = self.lookup(req) else {
            return Ok(UNSCRIPTED_REPLY.to_string());
        };
        let replies = &self.script[&key];
        let mut cursors = self.cursors.lock().unwrap();
        let cursor = cursors.entry(key).or_insert(0);
        let reply = replies[(*cursor).min(replies.len() - 1)].clone();
        *cursor += 1;
        Ok(reply)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keyed_lookup_and_sequences() {
        let stub = StubBackend::new()
            .with(Task::VerifyTranslation, "Every cat is an animal. => forall x. (Cat(x) -> Animal(x))", &["LABEL: verified"])
            .with(Task::VerifyTranslation, "*", &["LABEL: rejected"])
            .with(Task::VerifyStep, "Animal(tom)", &["VALID", "INVALID"]);
        let ok = OracleRequest::verify_translation("Every cat is an animal.", "forall x. (Cat(x) -> Animal(x))");
        let other = OracleRequest::verify_translation("Every cat is an animal.", "forall x. (Animal(x) -> Cat(x))");
        assert_eq!(stub.complete(&ok, "").unwrap(), "LABEL: verified");
        assert_eq!(stub.complete(&other, "").unwrap(), "LABEL: rejected");
        let step = OracleRequest::verify_step(vec![], "Animal(tom)", "SUPPORTS");
        assert_eq!(stub.complete(&step, "").unwrap(), "VALID");
        assert_eq!(stub.complete(&step, "").unwrap(), "INVALID");
        assert_eq!(stub.complete(&step, "").unwrap(), "INVALID");
        let unscripted = OracleRequest::translate("Tom is a cat.");
        assert_eq!(stub.complete(&unscripted, "").unwrap(), UNSCRIPTED_REPLY);
        assert_eq!(stub.calls(), 6);
    }

    #[test]
    fn script_file_format() {
        let stub = StubBackend::parse("# comment\nreason_step\t*\tREFINE: Cat(tom)\tSUPPORTS\n\n").unwrap();
        let req = OracleRequest::reason_step(vec![], "Animal(tom)", vec![]);
        assert_eq!(stub.complete(&req, "").unwrap(), "REFINE: Cat(tom)");
        assert_eq!(stub.complete(&req, "").unwrap(), "SUPPORTS");
        assert!(StubBackend::parse("reason_step\tonly-two").is_err());
        assert!(StubBackend::parse("guess\tk\tv").is_err());
    }
}
