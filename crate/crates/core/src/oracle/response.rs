use std::fmt;

use super::{OracleError, Task};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerifyLabel {
    Verified,
    Uncertain,
    Rejected,
}

impl VerifyLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            VerifyLabel::Verified => "verified",
            VerifyLabel::Uncertain => "uncertain",
            VerifyLabel::Rejected => "rejected",
        }
    }
}

/// One reasoning move proposed for a hypothesis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StepAnswer {
    Supports,
    Contradicts,
    Refine(String),
}

impl fmt::Display for StepAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepAnswer::Supports => f.write_str("SUPPORTS"),
            StepAnswer::Contradicts => f.write_str("CONTRADICTS"),
            StepAnswer::Refine(s) => write!(f, "REFINE: {s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Answer {
    /// Candidate formula text, not yet parsed.
    Formula(String),
    /// The backend declined to translate.
    NoFormula,
    Label(VerifyLabel),
    Step(StepAnswer),
    StepValid(bool),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResponse {
    pub answer: Answer,
    pub raw: String,
    pub latency_ms: u64,
    pub from_cache: bool,
}

fn strip_keyword<'a>(line: &'a str, keyword: &str) -> Option<&'a str> {
    let head = line.get(..keyword.len())?;
    if head.eq_ignore_ascii_case(keyword) {
        Some(line[keyword.len()..].trim())
    } else {
        None
    }
}

/// Parses a raw completion under the task's answer schema. The whole
/// trimmed response must be a single schema line; nothing is repaired.
pub fn parse_answer(task: Task, raw: &str) -> Result<Answer, OracleError> {
    let malformed = || OracleError::Malformed {
        task,
        raw: raw.to_string(),
    };
    let line = raw.trim();
    if line.is_empty() || line.contains('\n') {
        return Err(malformed());
    }
    let answer = match task {
        Task::Translate => {
            if line.eq_ignore_ascii_case("NONE") {
                Answer::NoFormula
            } else {
                match strip_keyword(line, "FORMULA:") {
                    Some(f) if !f.is_empty() => Answer::Formula(f.to_string()),
                    _ => return Err(malformed()),
                }
            }
        }
        Task::VerifyTranslation => {
            let label = strip_keyword(line, "LABEL:").ok_or_else(malformed)?;
            Answer::Label(match label.to_ascii_lowercase().as_str() {
                "verified" => VerifyLabel::Verified,
                "uncertain" => VerifyLabel::Uncertain,
                "rejected" => VerifyLabel::Rejected,
                _ => return Err(malformed()),
            })
        }
        Task::ReasonStep => {
            if line.eq_ignore_ascii_case("SUPPORTS") {
                Answer::Step(StepAnswer::Supports)
            } else if line.eq_ignore_ascii_case("CONTRADICTS") {
                Answer::Step(StepAnswer::Contradicts)
            } else {
                match strip_keyword(line, "REFINE:") {
                    Some(s) if !s.is_empty() => Answer::Step(StepAnswer::Refine(s.to_string())),
                    _ => return Err(malformed()),
                }
            }
        }
        Task::VerifyStep => {
            if line.eq_ignore_ascii_case("VALID") {
                Answer::StepValid(true)
            } else if line.eq_ignore_ascii_case("INVALID") {
                Answer::StepValid(false)
            } else {
                return Err(malformed());
            }
        }
    };
    Ok(answer)
}
