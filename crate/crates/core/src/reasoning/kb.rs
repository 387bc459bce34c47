use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::fol::{to_horn, Atom, Formula, HornRule, Literal, Substitution, Term};
use crate::translation::{HybridContext, HybridStatement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KbRule {
    pub premise: usize,
    pub rule: HornRule,
}

/// Horn compilation of the symbolic premises of a context.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    pub rules: Vec<KbRule>,
    /// Premises kept as natural language.
    pub text_premises: Vec<usize>,
    /// Symbolic premises outside the Horn fragment.
    pub non_horn: Vec<usize>,
    /// Every constant mentioned by a symbolic premise or the conclusion.
    pub constants: Vec<Term>,
    by_head: HashMap<(bool, String, usize), Vec<usize>>,
}

impl KnowledgeBase {
    pub fn compile(ctx: &HybridContext) -> Self {
        let mut rules = Vec::new();
        let mut text_premises = Vec::new();
        let mut non_horn = Vec::new();
        let mut constants = BTreeSet::new();
        for (i, p) in ctx.premises.iter().enumerate() {
            match p {
                HybridStatement::Text(_) => text_premises.push(i),
                HybridStatement::Logic { formula, .. } => {
                    constants.extend(formula.constants());
                    match to_horn(formula) {
                        Ok(compiled) => rules.extend(compiled.into_iter().map(|rule| KbRule { premise: i, rule })),
                        Err(_) => non_horn.push(i),
                    }
                }
            }
        }
        if let Some(f) = ctx.conclusion.formula() {
            constants.extend(f.constants());
        }
        let mut by_head: HashMap<(bool, String, usize), Vec<usize>> = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            let h = &r.rule.head;
            by_head
                .entry((h.positive, h.atom.predicate.clone(), h.atom.args.len()))
                .or_default()
                .push(i);
        }
        for candidates in by_head.values_mut() {
            candidates.sort_by_key(|&i| (rules[i].rule.body.len(), rules[i].premise, i));
        }
        KnowledgeBase {
            rules,
            text_premises,
            non_horn,
            constants: constants.into_iter().map(Term::Const).collect(),
            by_head,
        }
    }

    /// Rules whose head could match `goal`, shortest body first, then by
    /// premise position.
    pub fn candidates(&self, goal: &Literal) -> &[usize] {
        self.by_head
            .get(&(goal.positive, goal.atom.predicate.clone(), goal.atom.args.len()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Whether anything outside the Horn rules could still say something.
    pub fn has_opaque_premises(&self) -> bool {
        !self.text_premises.is_empty() || !self.non_horn.is_empty()
    }

    /// Ground facts with their premise index, in premise order.
    pub fn ground_facts(&self) -> impl Iterator<Item = (usize, &Literal)> {
        self.rules
            .iter()
            .filter(|r| r.rule.is_ground_fact())
            .map(|r| (r.premise, &r.rule.head))
    }
}

/// The conclusion as a list of ground literals, when it is a ground literal
/// or a conjunction of them.
pub fn conclusion_goals(ctx: &HybridContext) -> Option<Vec<Literal>> {
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
    let mut out = Vec::new();
    walk(ctx.conclusion.formula()?, &mut out).then_some(out)
}

/// Renames a rule's variables to `name__n`, fresh for this search.
pub(crate) fn rename_apart(rule: &HornRule, counter: &mut usize) -> HornRule {
    *counter += 1;
    let mut vars = BTreeSet::new();
    rule.head.atom.collect_vars(&mut vars);
    for l in &rule.body {
        l.atom.collect_vars(&mut vars);
    }
    let renaming = Substitution::from_pairs(vars.iter().map(|v| (v.clone(), Term::var(format!("{v}__{counter}")))));
    HornRule {
        head: renaming.apply_literal(&rule.head),
        body: rule.body.iter().map(|l| renaming.apply_literal(l)).collect(),
        universals: vars.iter().map(|v| format!("{v}__{counter}")).collect(),
    }
}

fn canonical_term(t: &Term, names: &mut BTreeMap<String, usize>) -> Term {
    match t {
        Term::Var(v) => {
            let n = names.len();
            let id = *names.entry(v.clone()).or_insert(n);
            Term::Var(format!("_{id}"))
        }
        Term::Const(_) => t.clone(),
        Term::Func(f, args) => Term::Func(f.clone(), args.iter().map(|a| canonical_term(a, names)).collect()),
    }
}

fn canonical_literal(l: &Literal, names: &mut BTreeMap<String, usize>) -> Literal {
    Literal {
        positive: l.positive,
        atom: Atom {
            predicate: l.atom.predicate.clone(),
            args: l.atom.args.iter().map(|a| canonical_term(a, names)).collect(),
        },
    }
}

/// Equal up to a consistent renaming of variables.
pub(crate) fn literal_variant(a: &Literal, b: &Literal) -> bool {
    canonical_literal(a, &mut BTreeMap::new()) == canonical_literal(b, &mut BTreeMap::new())
}

pub(crate) fn rule_variant(a: &HornRule, b: &HornRule) -> bool {
    if a.body.len() != b.body.len() {
        return false;
    }
    let (mut na, mut nb) = (BTreeMap::new(), BTreeMap::new());
    canonical_literal(&a.head, &mut na) == canonical_literal(&b.head, &mut nb)
        && a.body
            .iter()
            .zip(&b.body)
            .all(|(x, y)| canonical_literal(x, &mut na) == canonical_literal(y, &mut nb))
}
