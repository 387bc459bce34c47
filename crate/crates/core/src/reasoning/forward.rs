//! Breadth-first saturation baseline. Every new fact is one step; the goal
//! and its complement are checked after each round of derivations.

use std::collections::{BTreeSet, HashMap};

use crate::fol::{unify_atoms_with, HornRule, Literal, Substitution, Term};
use crate::oracle::{OracleClient, StepAnswer};
use crate::translation::{HybridContext, HybridStatement};

use super::delegate::{ask, Ledger};
use super::kb::{conclusion_goals, KnowledgeBase};
use super::verify::check_symbolic;
use super::{check_inputs, Hypothesis, Justification, ProofTrace, ReasoningError, ReasoningStep, Verdict};

type Key = (bool, String, usize);

fn key(l: &Literal) -> Key {
    (l.positive, l.atom.predicate.clone(), l.atom.args.len())
}

#[derive(Default)]
struct Facts {
    /// Fact to the step that derived it; `None` for premises.
    origin: HashMap<Literal, Option<usize>>,
    by_key: HashMap<Key, Vec<Literal>>,
}

impl Facts {
    fn insert(&mut self, l: Literal, origin: Option<usize>) -> bool {
        if self.origin.contains_key(&l) {
            return false;
        }
        self.by_key.entry(key(&l)).or_default().push(l.clone());
        self.origin.insert(l, origin);
        true
    }

    fn lengths(&self) -> HashMap<Key, usize> {
        self.by_key.iter().map(|(k, v)| (k.clone(), v.len())).collect()
    }

    /// Substitutions matching `body` against the facts known at `snapshot`.
    fn matches(&self, body: &[Literal], snapshot: &HashMap<Key, usize>, base: Substitution, out: &mut Vec<Substitution>) {
        let Some((first, rest)) = body.split_first() else {
            out.push(base);
            return;
        };
        let k = key(first);
        let limit = snapshot.get(&k).copied().unwrap_or(0);
        let Some(facts) = self.by_key.get(&k) else { return };
        for fact in &facts[..limit] {
            if let Ok(s) = unify_atoms_with(&first.atom, &fact.atom, base.clone()) {
                self.matches(rest, snapshot, s, out);
            }
        }
    }

    fn check(&self, goals: &[Literal]) -> Option<(Verdict, Vec<usize>)> {
        if goals.iter().all(|g| self.origin.contains_key(g)) {
            let support = goals.iter().filter_map(|g| self.origin[g]).collect();
            return Some((Verdict::True, support));
        }
        goals.iter().find_map(|g| {
            self.origin
                .get(&g.complement())
                .map(|o| (Verdict::False, o.iter().copied().collect()))
        })
    }
}

/// Instances of `head` with variables left unbound by the body replaced by
/// every domain constant.
fn ground_instances(head: &Literal, sigma: &Substitution, constants: &[Term]) -> Vec<(Literal, Substitution)> {
    let head = sigma.apply_literal(head);
    let vars: Vec<String> = head.atom.vars().into_iter().collect();
    let mut out = vec![(head, sigma.clone())];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|(l, s)| {
                let v = v.clone();
                constants.iter().map(move |c| {
                    let one = Substitution::from_pairs([(v.clone(), c.clone())]);
                    let mut s = s.clone();
                    s.extend(&v, c.clone());
                    (one.apply_literal(&l), s)
                })
            })
            .collect();
    }
    out
}

fn finish(ledger: Ledger, verdict: Verdict, verdict_support: Vec<usize>) -> ProofTrace {
    ProofTrace {
        steps: ledger.steps,
        verdict,
        steps_used: ledger.used,
        budget: ledger.budget,
        verdict_support,
        essential_marks: Vec::new(),
    }
}

/// Forward chaining from the premises until a round ends with the
/// conclusion or its complement known, nothing new can be derived, or the budget runs out.
/// Once symbolic steps run dry, the oracle gets one question about the
/// conclusion if the context holds anything it alone can read.
pub fn forward_prove(
    ctx: &HybridContext,
    budget: usize,
    oracle: Option<&OracleClient>,
) -> Result<ProofTrace, ReasoningError> {
    check_inputs(ctx, budget)?;
    let kb = KnowledgeBase::compile(ctx);
    let goals = conclusion_goals(ctx);
    let mut ledger = Ledger::new(budget);
    let root = Hypothesis {
        statement: ctx.conclusion.clone(),
        depth: 0,
        parent: None,
    };
    let mut facts = Facts::default();
    for (_, fact) in kb.ground_facts() {
        facts.insert(fact.clone(), None);
    }
    if let Some((v, support)) = goals.as_deref().and_then(|g| facts.check(g)) {
        return Ok(finish(ledger, v, support));
    }
    let rules: Vec<(usize, &HornRule)> = kb
        .rules
        .iter()
        .filter(|r| !r.rule.is_ground_fact())
        .map(|r| (r.premise, &r.rule))
        .collect();
    loop {
        let snapshot = facts.lengths();
        let mut progressed = false;
        for &(premise, rule) in &rules {
            let mut sigmas = Vec::new();
            facts.matches(&rule.body, &snapshot, Substitution::new(), &mut sigmas);
            for sigma in sigmas {
                for (head, unifier) in ground_instances(&rule.head, &sigma, &kb.constants) {
                    if facts.origin.contains_key(&head) {
                        continue;
                    }
                    if ledger.exhausted() {
                        let (v, support) = goals
                            .as_deref()
                            .and_then(|g| facts.check(g))
                            .unwrap_or((Verdict::Unknown, Vec::new()));
                        return Ok(finish(ledger, v, support));
                    }
                    let depends_on: BTreeSet<usize> = rule
                        .body
                        .iter()
                        .filter_map(|b| facts.origin.get(&unifier.apply_literal(b)).copied().flatten())
                        .collect();
                    let mut step = ReasoningStep {
                        from_hypothesis: root.clone(),
                        derived: HybridStatement::Logic {
                            formula: head.to_formula(),
                            origin: ctx.premises[premise].span().clone(),
                        },
                        justification: Justification::RuleApplication {
                            premise,
                            rule: rule.clone(),
                            unifier,
                            goal: head.clone(),
                        },
                        verified: false,
                        depends_on: depends_on.into_iter().collect(),
                    };
                    step.verified = check_symbolic(&step, &kb);
                    let index = ledger.record(step);
                    facts.insert(head, Some(index));
                    progressed = true;
                }
            }
        }
        if let Some((v, support)) = goals.as_deref().and_then(|g| facts.check(g)) {
            return Ok(finish(ledger, v, support));
        }
        if !progressed {
            break;
        }
    }
    if let Some(oracle) = oracle {
        if kb.has_opaque_premises() || goals.is_none() {
            let premises: Vec<String> = ctx
                .premises
                .iter()
                .map(|p| p.to_string())
                .chain(
                    ledger
                        .steps
                        .iter()
                        .map(|s| s.derived.to_string()),
                )
                .collect();
            if let Some((answer, index)) = ask(oracle, &premises, &root, Vec::new(), &mut ledger) {
                match answer {
                    StepAnswer::Supports => return Ok(finish(ledger, Verdict::True, vec![index])),
                    StepAnswer::Contradicts => return Ok(finish(ledger, Verdict::False, vec![index])),
                    StepAnswer::Refine(_) => {}
                }
            }
        }
    }
    Ok(finish(ledger, Verdict::Unknown, Vec::new()))
}
