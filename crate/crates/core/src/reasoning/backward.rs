//! Goal-directed search. Each loop iteration either takes one step (a rule
//! application, a premise match, or an oracle call) or backtracks out of an
//! exhausted choice point; both consume one unit of budget.

use crate::fol::unify_atoms_with;
use crate::fol::{parse_formula, unify_literals, Formula, Literal, Substitution};
use crate::oracle::{OracleClient, StepAnswer};
use crate::translation::{HybridContext, HybridStatement};

use super::delegate::{answer_statement, ask, Ledger};
use super::kb::{conclusion_goals, literal_variant, rename_apart, KnowledgeBase};
use super::verify::check_symbolic;
use super::{check_inputs, Hypothesis, Justification, ProofTrace, ReasoningError, ReasoningStep, Verdict};

#[derive(Debug, Clone)]
enum Target {
    Lit(Literal),
    Text(String),
}

#[derive(Debug, Clone)]
struct Goal {
    target: Target,
    /// Step that introduced this goal.
    parent: Option<usize>,
    depth: usize,
    /// Literal goals above this one, for the loop check.
    ancestors: Vec<Literal>,
}

#[derive(Debug, Clone)]
struct Node {
    /// Pending goals; the next one to solve is last.
    goals: Vec<Goal>,
    subst: Substitution,
    /// Steps on the current branch.
    path: Vec<usize>,
}

struct Choice {
    node: Node,
    goal: Goal,
    /// The goal literal under the node's substitution.
    inst: Option<Literal>,
    alternatives: Vec<usize>,
    next: usize,
    oracle_tried: bool,
}

enum Outcome {
    Proved(Vec<usize>),
    Failed,
    OutOfBudget,
}

struct Search<'a> {
    ctx: &'a HybridContext,
    kb: KnowledgeBase,
    oracle: Option<&'a OracleClient>,
    premises: Vec<String>,
    ledger: Ledger,
    fresh: usize,
}

fn lit_statement(ctx: &HybridContext, l: &Literal) -> HybridStatement {
    HybridStatement::Logic {
        formula: l.to_formula(),
        origin: ctx.conclusion.span().clone(),
    }
}

/// Ground literals a refined statement stands for, if it parses as such.
fn refined_goals(text: &str) -> Option<Vec<Literal>> {
    fn walk(f: &Formula, out: &mut Vec<Literal>) -> bool {
        match f {
            Formula::And(a, b) => walk(a, out) && walk(b, out),
            other => match Literal::from_formula(other) {
                Some(l) if l.is_ground() => {
                    out.push(l);
                    true
                }
                _ => false,
            },
        }
    }
    let f = parse_formula(text).ok()?;
    let mut out = Vec::new();
    walk(&f, &mut out).then_some(out)
}

/// Steps of a successful branch that no other step of the branch builds on.
fn leaves(steps: &[ReasoningStep], path: &[usize]) -> Vec<usize> {
    path.iter()
        .copied()
        .filter(|&i| !path.iter().any(|&j| steps[j].depends_on.contains(&i)))
        .collect()
}

impl<'a> Search<'a> {
    fn open(&self, node: Node, goal: Goal) -> Choice {
        let (inst, alternatives) = match &goal.target {
            Target::Lit(l) => {
                let inst = node.subst.apply_literal(l);
                let looping = goal.ancestors.iter().any(|a| literal_variant(a, &inst));
                let alternatives = if looping { Vec::new() } else { self.kb.candidates(&inst).to_vec() };
                (Some(inst), alternatives)
            }
            Target::Text(_) => (None, Vec::new()),
        };
        Choice {
            node,
            goal,
            inst,
            alternatives,
            next: 0,
            oracle_tried: false,
        }
    }

    fn child_goals(&self, choice: &Choice, new: Vec<Target>, parent: usize) -> Vec<Goal> {
        let mut ancestors = choice.goal.ancestors.clone();
        if let Some(inst) = &choice.inst {
            ancestors.push(inst.clone());
        }
        let mut goals = choice.node.goals[..choice.node.goals.len() - 1].to_vec();
        for target in new.into_iter().rev() {
            goals.push(Goal {
                target,
                parent: Some(parent),
                depth: choice.goal.depth + 1,
                ancestors: ancestors.clone(),
            });
        }
        goals
    }

    /// Takes the next alternative of a choice point, recording its step.
    fn advance(&mut self, choice: &mut Choice, refuting: bool) -> Option<Node> {
        while let Some(inst) = choice.inst.clone() {
            if self.ledger.exhausted() {
                return None;
            }
            let Some(&ri) = choice.alternatives.get(choice.next) else { break };
            choice.next += 1;
            let premise = self.kb.rules[ri].premise;
            let ground_fact = self.kb.rules[ri].rule.is_ground_fact();
            let rule = rename_apart(&self.kb.rules[ri].rule, &mut self.fresh);
            let Ok(mgu) = unify_literals(&rule.head, &inst) else { continue };
            let Ok(subst) = unify_atoms_with(&rule.head.atom, &inst.atom, choice.node.subst.clone()) else {
                continue;
            };
            let mut from = Hypothesis {
                statement: lit_statement(self.ctx, &inst),
                depth: choice.goal.depth,
                parent: choice.goal.parent,
            };
            let (justification, derived) = if ground_fact {
                let derived = self.ctx.premises[premise].clone();
                if refuting && choice.goal.depth == 0 {
                    from.statement = lit_statement(self.ctx, &inst.complement());
                    (Justification::ContradictionWith(premise), derived)
                } else {
                    (Justification::PremiseMatch(premise), derived)
                }
            } else {
                let body: Vec<Literal> = rule.body.iter().map(|l| mgu.apply_literal(l)).collect();
                let derived = match body.split_first() {
                    None => mgu.apply_literal(&rule.head).to_formula(),
                    Some((first, rest)) => rest
                        .iter()
                        .fold(first.to_formula(), |acc, l| Formula::and(acc, l.to_formula())),
                };
                (
                    Justification::RuleApplication {
                        premise,
                        rule: rule.clone(),
                        unifier: mgu,
                        goal: inst.clone(),
                    },
                    HybridStatement::Logic {
                        formula: derived,
                        origin: self.ctx.premises[premise].span().clone(),
                    },
                )
            };
            let mut step = ReasoningStep {
                from_hypothesis: from,
                derived,
                justification,
                verified: false,
                depends_on: choice.goal.parent.into_iter().collect(),
            };
            step.verified = check_symbolic(&step, &self.kb);
            let verified = step.verified;
            let index = self.ledger.record(step);
            if !verified {
                continue;
            }
            let body = rule.body.iter().cloned().map(Target::Lit).collect();
            let mut path = choice.node.path.clone();
            path.push(index);
            return Some(Node {
                goals: self.child_goals(choice, body, index),
                subst,
                path,
            });
        }
        self.delegate(choice)
    }

    /// Hands a goal no rule can touch to the oracle, when something opaque
    /// in the context might bear on it.
    fn delegate(&mut self, choice: &mut Choice) -> Option<Node> {
        let oracle = self.oracle?;
        let opaque = self.kb.has_opaque_premises() || matches!(choice.goal.target, Target::Text(_));
        if choice.oracle_tried || !opaque {
            return None;
        }
        choice.oracle_tried = true;
        let statement = match (&choice.goal.target, &choice.inst) {
            (_, Some(inst)) => lit_statement(self.ctx, inst),
            (Target::Text(t), None) => answer_statement(t, choice.goal.parent.unwrap_or(0)),
            (Target::Lit(_), None) => unreachable!("literal goals are instantiated on open"),
        };
        let hyp = Hypothesis {
            statement,
            depth: choice.goal.depth,
            parent: choice.goal.parent,
        };
        let depends_on = choice.goal.parent.into_iter().collect();
        let (answer, index) = ask(oracle, &self.premises, &hyp, depends_on, &mut self.ledger)?;
        let new = match answer {
            StepAnswer::Supports => Vec::new(),
            StepAnswer::Contradicts => return None,
            StepAnswer::Refine(z) => match refined_goals(&z) {
                Some(lits) => lits.into_iter().map(Target::Lit).collect(),
                None => vec![Target::Text(z)],
            },
        };
        let mut path = choice.node.path.clone();
        path.push(index);
        Some(Node {
            goals: self.child_goals(choice, new, index),
            subst: choice.node.subst.clone(),
            path,
        })
    }

    fn solve(&mut self, goals: Vec<Literal>, refuting: bool) -> Outcome {
        let mut node = Node {
            goals: goals
                .into_iter()
                .rev()
                .map(|l| Goal {
                    target: Target::Lit(l),
                    parent: None,
                    depth: 0,
                    ancestors: Vec::new(),
                })
                .collect(),
            subst: Substitution::new(),
            path: Vec::new(),
        };
        let mut stack: Vec<Choice> = Vec::new();
        loop {
            let Some(goal) = node.goals.last().cloned() else {
                return Outcome::Proved(node.path);
            };
            stack.push(self.open(node, goal));
            node = loop {
                let Some(top) = stack.last_mut() else { return Outcome::Failed };
                if self.ledger.exhausted() {
                    return Outcome::OutOfBudget;
                }
                match self.advance(top, refuting) {
                    Some(n) => break n,
                    None => {
                        stack.pop();
                        self.ledger.backtrack();
                    }
                }
            };
        }
    }

    /// Prove the goals; failing that, refute one of them.
    fn decide(&mut self, goals: Vec<Literal>) -> (Verdict, Vec<usize>) {
        match self.solve(goals.clone(), false) {
            Outcome::Proved(path) => return (Verdict::True, leaves(&self.ledger.steps, &path)),
            Outcome::OutOfBudget => return (Verdict::Unknown, Vec::new()),
            Outcome::Failed => {}
        }
        for g in goals {
            match self.solve(vec![g.complement()], true) {
                Outcome::Proved(path) => return (Verdict::False, leaves(&self.ledger.steps, &path)),
                Outcome::OutOfBudget => return (Verdict::Unknown, Vec::new()),
                Outcome::Failed => {}
            }
        }
        (Verdict::Unknown, Vec::new())
    }

    /// The refinement loop over a natural-language hypothesis.
    fn text_loop(&mut self) -> (Verdict, Vec<usize>) {
        let Some(oracle) = self.oracle else {
            return (Verdict::Unknown, Vec::new());
        };
        let mut hyp = Hypothesis {
            statement: self.ctx.conclusion.clone(),
            depth: 0,
            parent: None,
        };
        while !self.ledger.exhausted() {
            let depends_on = hyp.parent.into_iter().collect();
            let Some((answer, index)) = ask(oracle, &self.premises, &hyp, depends_on, &mut self.ledger) else {
                return (Verdict::Unknown, Vec::new());
            };
            match answer {
                StepAnswer::Supports => return (Verdict::True, vec![index]),
                StepAnswer::Contradicts => return (Verdict::False, vec![index]),
                StepAnswer::Refine(z) => {
                    hyp = Hypothesis {
                        statement: answer_statement(&z, index),
                        depth: hyp.depth + 1,
                        parent: Some(index),
                    };
                }
            }
        }
        (Verdict::Unknown, Vec::new())
    }
}

/// Backward chaining from the conclusion within `budget` loop iterations.
///
/// True when the conclusion is derived down to premises, False when its
/// complement is, Unknown when neither happens before the search or the
/// budget runs out. Without an oracle, text statements are inert.
pub fn backward_prove(
    ctx: &HybridContext,
    budget: usize,
    oracle: Option<&OracleClient>,
) -> Result<ProofTrace, ReasoningError> {
    check_inputs(ctx, budget)?;
    let mut search = Search {
        ctx,
        kb: KnowledgeBase::compile(ctx),
        oracle,
        premises: ctx.premises.iter().map(|p| p.to_string()).collect(),
        ledger: Ledger::new(budget),
        fresh: 0,
    };
    let (verdict, verdict_support) = match conclusion_goals(ctx) {
        Some(goals) => search.decide(goals),
        None => search.text_loop(),
    };
    Ok(ProofTrace {
        steps: search.ledger.steps,
        verdict,
        steps_used: search.ledger.used,
        budget,
        verdict_support,
        essential_marks: Vec::new(),
    })
}
