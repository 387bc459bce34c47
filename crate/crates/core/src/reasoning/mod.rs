//! Hypothesis-driven backward reasoning over a hybrid context, a
//! forward-chaining baseline, step verification, and essential-step marking.

mod backward;
mod delegate;
mod essential;
mod export;
mod forward;
mod kb;
mod verify;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::fol::{HornRule, Literal, Substitution};
use crate::oracle::OracleClient;
use crate::translation::{HybridContext, HybridStatement};

pub use backward::backward_prove;
pub use essential::mark_essential;
pub use export::{export_trace, TraceRecord};
pub use forward::forward_prove;
pub use kb::{conclusion_goals, KbRule, KnowledgeBase};
pub use verify::verify_step;

pub const DEFAULT_BUDGET: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::True => "True",
            Verdict::False => "False",
            Verdict::Unknown => "Unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "true" => Ok(Verdict::True),
            "false" => Ok(Verdict::False),
            "unknown" | "uncertain" => Ok(Verdict::Unknown),
            _ => Err(format!("not a verdict: `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Backward,
    Forward,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Backward => "backward",
            Strategy::Forward => "forward",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "backward" => Ok(Strategy::Backward),
            "forward" => Ok(Strategy::Forward),
            _ => Err(format!("unknown strategy `{s}` (expected backward or forward)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub statement: HybridStatement,
    /// Position in the refinement lineage; the conclusion has depth 0.
    pub depth: usize,
    /// Step whose derivation introduced this hypothesis.
    pub parent: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    /// `unifier` makes `rule.head` equal to `goal`, the hypothesis (backward)
    /// or the derived fact (forward).
    RuleApplication {
        premise: usize,
        rule: HornRule,
        unifier: Substitution,
        goal: Literal,
    },
    PremiseMatch(usize),
    ContradictionWith(usize),
    OracleStep {
        prompt_digest: String,
        response_digest: String,
        /// The schema line the step rests on, e.g. `REFINE: ...`.
        answer: String,
    },
}

impl Justification {
    pub fn kind(&self) -> &'static str {
        match self {
            Justification::RuleApplication { .. } => "rule_application",
            Justification::PremiseMatch(_) => "premise_match",
            Justification::ContradictionWith(_) => "contradiction_with",
            Justification::OracleStep { .. } => "oracle_step",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReasoningStep {
    pub from_hypothesis: Hypothesis,
    pub derived: HybridStatement,
    pub justification: Justification,
    pub verified: bool,
    /// Earlier steps this one builds on.
    pub depends_on: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTrace {
    pub steps: Vec<ReasoningStep>,
    pub verdict: Verdict,
    /// Loop iterations consumed: steps taken plus backtracks.
    pub steps_used: usize,
    pub budget: usize,
    /// Steps the verdict rests on directly.
    pub verdict_support: Vec<usize>,
    /// Empty until [`mark_essential`] runs.
    pub essential_marks: Vec<bool>,
}

impl ProofTrace {
    /// Essential steps over all steps; 0.0 for Unknown, 1.0 for a verdict
    /// that needed no steps.
    pub fn essential_ratio(&self) -> f64 {
        if self.verdict == Verdict::Unknown {
            return 0.0;
        }
        if self.steps.is_empty() {
            return 1.0;
        }
        let essential = self.essential_marks.iter().filter(|m| **m).count();
        essential as f64 / self.steps.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasoningError {
    #[error("malformed context: {0}")]
    MalformedContext(String),
    #[error("budget must be at least 1")]
    ZeroBudget,
}

/// Runs the chosen strategy and marks essential steps.
pub fn prove(
    ctx: &HybridContext,
    strategy: Strategy,
    budget: usize,
    oracle: Option<&OracleClient>,
) -> Result<ProofTrace, ReasoningError> {
    let trace = match strategy {
        Strategy::Backward => backward_prove(ctx, budget, oracle)?,
        Strategy::Forward => forward_prove(ctx, budget, oracle)?,
    };
    Ok(mark_essential(trace))
}

fn check_inputs(ctx: &HybridContext, budget: usize) -> Result<(), ReasoningError> {
    if budget == 0 {
        return Err(ReasoningError::ZeroBudget);
    }
    if ctx.premises.is_empty() {
        return Err(ReasoningError::MalformedContext("no premises".into()));
    }
    Ok(())
}
