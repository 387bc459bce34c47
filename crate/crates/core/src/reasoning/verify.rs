use crate::fol::{ground_complement, unify_literals, Literal};
use crate::oracle::{Answer, OracleClient, OracleRequest};
use crate::translation::{HybridContext, HybridStatement};

use super::kb::{rule_variant, KnowledgeBase};
use super::{Justification, ReasoningStep};

fn as_literal(s: &HybridStatement) -> Option<Literal> {
    s.formula().and_then(Literal::from_formula)
}

/// Recomputes a symbolic step against the compiled premises.
pub(crate) fn check_symbolic(step: &ReasoningStep, kb: &KnowledgeBase) -> bool {
    let hypothesis = as_literal(&step.from_hypothesis.statement);
    match &step.justification {
        Justification::RuleApplication {
            premise,
            rule,
            unifier,
            goal,
        } => {
            let from_premise = kb
                .rules
                .iter()
                .any(|r| r.premise == *premise && rule_variant(&r.rule, rule));
            let about_step = hypothesis.as_ref() == Some(goal) || as_literal(&step.derived).as_ref() == Some(goal);
            from_premise && about_step && unifier.apply_literal(&rule.head) == unifier.apply_literal(goal)
        }
        Justification::PremiseMatch(i) => {
            let Some(h) = hypothesis else { return false };
            kb.ground_facts()
                .any(|(p, fact)| p == *i && unify_literals(fact, &h).is_ok())
        }
        Justification::ContradictionWith(i) => {
            let Some(h) = step.from_hypothesis.statement.formula() else { return false };
            kb.ground_facts()
                .any(|(p, fact)| p == *i && ground_complement(h, &fact.to_formula()).unwrap_or(false))
        }
        Justification::OracleStep { .. } => false,
    }
}

/// Re-checks a recorded step: symbolic steps are recomputed, oracle steps
/// are put to the oracle's verifier prompt again.
pub fn verify_step(step: &ReasoningStep, ctx: &HybridContext, oracle: Option<&OracleClient>) -> bool {
    match &step.justification {
        Justification::OracleStep { answer, .. } => {
            let Some(oracle) = oracle else { return false };
            if answer.is_empty() {
                return false;
            }
            let premises: Vec<String> = ctx.premises.iter().map(|p| p.to_string()).collect();
            let req = OracleRequest::verify_step(premises, &step.from_hypothesis.statement.to_string(), answer);
            matches!(oracle.query(&req).map(|r| r.answer), Ok(Answer::StepValid(true)))
        }
        _ => check_symbolic(step, &KnowledgeBase::compile(ctx)),
    }
}
