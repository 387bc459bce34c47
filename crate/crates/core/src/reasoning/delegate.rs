use sha2::{Digest, Sha256};

use crate::oracle::{Answer, CacheKey, OracleClient, OracleRequest, StepAnswer};
use crate::translation::{HybridStatement, Role, SentenceSpan};

use super::{Hypothesis, Justification, ReasoningStep};

/// Shared bookkeeping for one proof: the step log and the budget counter.
pub(crate) struct Ledger {
    pub steps: Vec<ReasoningStep>,
    pub used: usize,
    pub budget: usize,
}

impl Ledger {
    pub fn new(budget: usize) -> Self {
        Ledger {
            steps: Vec::new(),
            used: 0,
            budget,
        }
    }

    pub fn exhausted(&self) -> bool {
        self.used >= self.budget
    }

    /// Leaving an exhausted choice point costs one unit, never past the budget.
    pub fn backtrack(&mut self) {
        self.used = (self.used + 1).min(self.budget);
    }

    pub fn record(&mut self, step: ReasoningStep) -> usize {
        self.used += 1;
        self.steps.push(step);
        self.steps.len() - 1
    }
}

fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub(crate) fn answer_statement(text: &str, step_index: usize) -> HybridStatement {
    HybridStatement::Text(SentenceSpan {
        text: text.to_string(),
        index: step_index,
        role: Role::Conclusion,
    })
}

fn verify_answer(oracle: &OracleClient, premises: &[String], hypothesis: &str, answer: &str) -> bool {
    let req = OracleRequest::verify_step(premises.to_vec(), hypothesis, answer);
    matches!(oracle.query(&req).map(|r| r.answer), Ok(Answer::StepValid(true)))
}

/// One oracle step for `hyp`, verified. A step that fails verification is
/// kept in the log unverified and the question is asked once more with the
/// rejected answer excluded. Returns the accepted answer and its step index.
pub(crate) fn ask(
    oracle: &OracleClient,
    premises: &[String],
    hyp: &Hypothesis,
    depends_on: Vec<usize>,
    ledger: &mut Ledger,
) -> Option<(StepAnswer, usize)> {
    let hypothesis = hyp.statement.to_string();
    let mut excluded: Vec<String> = Vec::new();
    for _attempt in 0..2 {
        if ledger.exhausted() {
            return None;
        }
        let req = OracleRequest::reason_step(premises.to_vec(), &hypothesis, excluded.clone());
        let prompt_digest = CacheKey::of(&req).0;
        let index = ledger.steps.len();
        let (answer, raw) = match oracle.query(&req) {
            Ok(resp) => match resp.answer {
                Answer::Step(a) => (Some(a), resp.raw),
                _ => (None, resp.raw),
            },
            Err(e) => (None, e.to_string()),
        };
        let answer_text = answer.as_ref().map(|a| a.to_string()).unwrap_or_default();
        let verified = answer
            .as_ref()
            .is_some_and(|_| verify_answer(oracle, premises, &hypothesis, &answer_text));
        ledger.record(ReasoningStep {
            from_hypothesis: hyp.clone(),
            derived: answer_statement(if answer.is_some() { &answer_text } else { &raw }, index),
            justification: Justification::OracleStep {
                prompt_digest,
                response_digest: digest(&raw),
                answer: answer_text.clone(),
            },
            verified,
            depends_on: depends_on.clone(),
        });
        match answer {
            Some(a) if verified => return Some((a, index)),
            Some(_) => excluded.push(answer_text),
            None => return None,
        }
    }
    None
}
