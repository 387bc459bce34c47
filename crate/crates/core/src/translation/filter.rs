use std::fs;
use std::path::Path;

use regex::Regex;

use super::{normalize, FilterVerdict, SentenceSpan, TranslationError};

const BUILTIN: &str = include_str!("../../data/patterns.tsv");

#[derive(Debug, Clone)]
pub struct Pattern {
    pub id: String,
    pub regex: Regex,
}

/// Ordered list of logic-compatibility cues.
#[derive(Debug, Clone)]
pub struct PatternInventory {
    patterns: Vec<Pattern>,
}

impl PatternInventory {
    /// The inventory shipped in `data/patterns.tsv`.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("shipped inventory is valid")
    }

    pub fn load(path: &Path) -> Result<Self, TranslationError> {
        let text = fs::read_to_string(path).map_err(|e| TranslationError::Pattern {
            line: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, TranslationError> {
        let mut patterns = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| TranslationError::Pattern { line: n + 1, message };
            let (id, cue) = line.split_once('\t').ok_or_else(|| err("expected id<TAB>regex".into()))?;
            let regex = Regex::new(&format!("(?i){cue}")).map_err(|e| err(e.to_string()))?;
            patterns.push(Pattern {
                id: id.trim().to_string(),
                regex,
            });
        }
        Ok(PatternInventory { patterns })
    }

    pub fn ids(&self) -> Vec<&str> {
        self.patterns.iter().map(|p| p.id.as_str()).collect()
    }

    pub fn filter(&self, s: &SentenceSpan) -> FilterVerdict {
        let text = normalize(&s.text);
        let matched_patterns: Vec<String> = self
            .patterns
            .iter()
            .filter(|p| p.regex.is_match(&text))
            .map(|p| p.id.clone())
            .collect();
        let accepted = !matched_patterns.is_empty();
        let rationale = if accepted {
            format!("matched {}", matched_patterns.join(", "))
        } else {
            "no logic-compatible pattern".to_string()
        };
        FilterVerdict {
            accepted,
            matched_patterns,
            rationale,
        }
    }
}

impl Default for PatternInventory {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Filters against the shipped inventory.
pub fn structural_filter(s: &SentenceSpan) -> FilterVerdict {
    thread_local! {
        static INVENTORY: PatternInventory = PatternInventory::builtin();
    }
    INVENTORY.with(|inv| inv.filter(s))
}
