use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::OracleError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Task {
    Translate,
    VerifyTranslation,
    ReasonStep,
    VerifyStep,
}

impl Task {
    pub const ALL: [Task; 4] = [Task::Translate, Task::VerifyTranslation, Task::ReasonStep, Task::VerifyStep];

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Translate => "translate",
            Task::VerifyTranslation => "verify_translation",
            Task::ReasonStep => "reason_step",
            Task::VerifyStep => "verify_step",
        }
    }

    /// Payload fields the task cannot do without. Each is also a required
    /// `{{placeholder}}` in the task's prompt template.
    pub fn required_fields(self) -> &'static [&'static str] {
        match self {
            Task::Translate => &["sentence"],
            Task::VerifyTranslation => &["sentence", "formula"],
            Task::ReasonStep => &["premises", "hypothesis"],
            Task::VerifyStep => &["premises", "hypothesis", "step"],
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Task::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown oracle task `{s}`"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Payload {
    pub sentence: Option<String>,
    pub formula: Option<String>,
    pub premises: Option<Vec<String>>,
    pub hypothesis: Option<String>,
    pub step: Option<String>,
    /// Answers already rejected for this hypothesis.
    pub excluded: Vec<String>,
}

impl Payload {
    /// Field values in a fixed order, rendered as prompt text.
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        if let Some(s) = &self.sentence {
            out.push(("sentence", s.clone()));
        }
        if let Some(s) = &self.formula {
            out.push(("formula", s.clone()));
        }
        if let Some(p) = &self.premises {
            let listing = p
                .iter()
                .enumerate()
                .map(|(i, s)| format!("{}. {}", i + 1, s))
                .collect::<Vec<_>>()
                .join("\n");
            out.push(("premises", listing));
        }
        if let Some(s) = &self.hypothesis {
            out.push(("hypothesis", s.clone()));
        }
        if let Some(s) = &self.step {
            out.push(("step", s.clone()));
        }
        let excluded = if self.excluded.is_empty() {
            "(none)".to_string()
        } else {
            self.excluded.join("\n")
        };
        out.push(("excluded", excluded));
        out
    }

    fn has(&self, field: &str) -> bool {
        match field {
            "sentence" => self.sentence.is_some(),
            "formula" => self.formula.is_some(),
            "premises" => self.premises.is_some(),
            "hypothesis" => self.hypothesis.is_some(),
            "step" => self.step.is_some(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OracleRequest {
    pub task: Task,
    pub payload: Payload,
    pub prompt_version: String,
}

pub const DEFAULT_PROMPT_VERSION: &str = "v1";

impl OracleRequest {
    pub fn translate(sentence: &str) -> Self {
        Self::new(
            Task::Translate,
            Payload {
                sentence: Some(sentence.to_string()),
                ..Payload::default()
            },
        )
    }

    pub fn verify_translation(sentence: &str, formula: &str) -> Self {
        Self::new(
            Task::VerifyTranslation,
            Payload {
                sentence: Some(sentence.to_string()),
                formula: Some(formula.to_string()),
                ..Payload::default()
            },
        )
    }

    pub fn reason_step(premises: Vec<String>, hypothesis: &str, excluded: Vec<String>) -> Self {
        Self::new(
            Task::ReasonStep,
            Payload {
                premises: Some(premises),
                hypothesis: Some(hypothesis.to_string()),
                excluded,
                ..Payload::default()
            },
        )
    }

    pub fn verify_step(premises: Vec<String>, hypothesis: &str, step: &str) -> Self {
        Self::new(
            Task::VerifyStep,
            Payload {
                premises: Some(premises),
                hypothesis: Some(hypothesis.to_string()),
                step: Some(step.to_string()),
                ..Payload::default()
            },
        )
    }

    pub fn new(task: Task, payload: Payload) -> Self {
        OracleRequest {
            task,
            payload,
            prompt_version: DEFAULT_PROMPT_VERSION.to_string(),
        }
    }

    pub fn with_version(mut self, version: impl Into<String>) -> Self {
        self.prompt_version = version.into();
        self
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        for field in self.task.required_fields() {
            if !self.payload.has(field) {
                return Err(OracleError::InvalidRequest(format!(
                    "{} request is missing `{field}`",
                    self.task
                )));
            }
        }
        Ok(())
    }

    /// The field a scripted stub keys on.
    pub fn primary_text(&self) -> &str {
        let field = match self.task {
            Task::Translate | Task::VerifyTranslation => &self.payload.sentence,
            Task::ReasonStep | Task::VerifyStep => &self.payload.hypothesis,
        };
        field.as_deref().unwrap_or("")
    }
}

pub fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Digest of (task, prompt version, whitespace-collapsed payload).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CacheKey(pub String);

impl CacheKey {
    pub fn of(req: &OracleRequest) -> Self {
        let mut h = Sha256::new();
        h.update(req.task.as_str().as_bytes());
        h.update([0u8]);
        h.update(req.prompt_version.as_bytes());
        for (name, value) in req.payload.fields() {
            h.update([0u8]);
            h.update(name.as_bytes());
            h.update(b"=");
            h.update(collapse_whitespace(&value).as_bytes());
        }
        CacheKey(hex::encode(h.finalize()))
    }
}

impl fmt::Display for CacheKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}
