//! Selective translation of premise sentences into logic, with a
//! conservative verifier and reversion to text on any doubt.

mod context;
mod filter;
mod normalize;
mod template;
mod verbalize;
mod verify;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::fol::{print_formula, Formula};
use crate::oracle::{OracleError, VerifyLabel};

pub use context::{build_hybrid_context, Backends};
pub use filter::{structural_filter, Pattern, PatternInventory};
pub use normalize::{normalize, tokenize};
pub use template::{singularize, template_translate};
pub use verbalize::verbalize;
pub use verify::{offline_verify, semantic_verify, translate_candidate, Candidate, Translator, Verifier};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Premise,
    Conclusion,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SentenceSpan {
    pub text: String,
    pub index: usize,
    pub role: Role,
}

impl SentenceSpan {
    pub fn premise(index: usize, text: impl Into<String>) -> Self {
        SentenceSpan {
            text: text.into(),
            index,
            role: Role::Premise,
        }
    }

    pub fn conclusion(text: impl Into<String>) -> Self {
        SentenceSpan {
            text: text.into(),
            index: 0,
            role: Role::Conclusion,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HybridStatement {
    Logic { formula: Formula, origin: SentenceSpan },
    Text(SentenceSpan),
}

impl HybridStatement {
    pub fn span(&self) -> &SentenceSpan {
        match self {
            HybridStatement::Logic { origin, .. } => origin,
            HybridStatement::Text(span) => span,
        }
    }

    pub fn formula(&self) -> Option<&Formula> {
        match self {
            HybridStatement::Logic { formula, .. } => Some(formula),
            HybridStatement::Text(_) => None,
        }
    }

    pub fn is_text(&self) -> bool {
        matches!(self, HybridStatement::Text(_))
    }
}

/// Logic statements render as formulas, text as the sentence itself.
impl fmt::Display for HybridStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HybridStatement::Logic { formula, .. } => f.write_str(&print_formula(formula)),
            HybridStatement::Text(span) => f.write_str(span.text.trim()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridContext {
    pub premises: Vec<HybridStatement>,
    pub conclusion: HybridStatement,
    pub retention_ratio: f64,
}

impl HybridContext {
    /// Builds a context directly, computing the retention ratio.
    pub fn new(premises: Vec<HybridStatement>, conclusion: HybridStatement) -> Result<Self, TranslationError> {
        if premises.is_empty() {
            return Err(TranslationError::EmptyPremises);
        }
        let text = premises.iter().filter(|p| p.is_text()).count();
        let retention_ratio = text as f64 / premises.len() as f64;
        Ok(HybridContext {
            premises,
            conclusion,
            retention_ratio,
        })
    }

    /// A purely symbolic context, with the printed formulas as origin text.
    pub fn symbolic(premises: &[Formula], conclusion: Formula) -> Result<Self, TranslationError> {
        let premises = premises
            .iter()
            .enumerate()
            .map(|(i, f)| HybridStatement::Logic {
                formula: f.clone(),
                origin: SentenceSpan::premise(i, print_formula(f)),
            })
            .collect();
        let conclusion = HybridStatement::Logic {
            origin: SentenceSpan::conclusion(print_formula(&conclusion)),
            formula: conclusion,
        };
        Self::new(premises, conclusion)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterVerdict {
    pub accepted: bool,
    pub matched_patterns: Vec<String>,
    pub rationale: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifierVerdict {
    pub accepted: bool,
    pub confidence: VerifyLabel,
    pub evidence: String,
}

impl VerifierVerdict {
    pub fn from_label(confidence: VerifyLabel, evidence: impl Into<String>) -> Self {
        VerifierVerdict {
            accepted: confidence == VerifyLabel::Verified,
            confidence,
            evidence: evidence.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Selective,
    AllNl,
    AllFol,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Selective, Mode::AllNl, Mode::AllFol];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Selective => "selective",
            Mode::AllNl => "all-nl",
            Mode::AllFol => "all-fol",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| format!("unknown mode `{s}` (expected selective, all-nl or all-fol)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslationError {
    #[error("context needs at least one premise")]
    EmptyPremises,
    #[error("translation backend failed: {0}")]
    Backend(#[from] OracleError),
    #[error("pattern inventory line {line}: {message}")]
    Pattern { line: usize, message: String },
}
