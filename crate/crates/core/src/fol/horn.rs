//! Compilation of closed formulas into Horn rules over literals.
//!
//! A rule is `head ⟸ body₁ ∧ … ∧ bodyₙ` where every literal may be negated.
//! Negated literals are treated as ordinary facts about the complement
//! (no negation as failure). Implications with disjunctive antecedents
//! split into one rule per disjunct; conjunctive heads split into one rule
//! per conjunct; `Iff` yields both directions. Disjunctive heads and
//! existential conclusions are rejected.

use std::fmt;

use thiserror::Error;

use super::{Formula, Literal};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HornRule {
    pub head: Literal,
    pub body: Vec<Literal>,
    pub universals: Vec<String>,
}

impl HornRule {
    pub fn fact(head: Literal) -> Self {
        HornRule {
            head,
            body: Vec::new(),
            universals: Vec::new(),
        }
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    pub fn is_ground_fact(&self) -> bool {
        self.body.is_empty() && self.head.is_ground()
    }
}

impl fmt::Display for HornRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            f.write_str(" <= ")?;
            for (i, l) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(" & ")?;
                }
                write!(f, "{l}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HornError {
    #[error("not Horn-compilable ({reason}): {subformula}")]
    NotHornable { subformula: Formula, reason: &'static str },
    #[error("formula has free variables: {0}")]
    Open(Formula),
    #[error("not a ground literal: {0}")]
    NonLiteral(Formula),
}

fn reject(f: &Formula, reason: &'static str) -> HornError {
    HornError::NotHornable {
        subformula: f.clone(),
        reason,
    }
}

pub fn to_horn(f: &Formula) -> Result<Vec<HornRule>, HornError> {
    if !f.is_closed() {
        return Err(HornError::Open(f.clone()));
    }
    let mut rules = Vec::new();
    compile(f, &mut Vec::new(), &mut rules)?;
    Ok(rules)
}

fn compile(f: &Formula, universals: &mut Vec<String>, out: &mut Vec<HornRule>) -> Result<(), HornError> {
    if let Some(lit) = Literal::from_formula(f) {
        out.push(make_rule(lit, Vec::new(), universals));
        return Ok(());
    }
    match f {
        Formula::ForAll(v, body) => {
            universals.push(v.clone());
            let r = compile(body, universals, out);
            universals.pop();
            r
        }
        Formula::And(a, b) => {
            compile(a, universals, out)?;
            compile(b, universals, out)
        }
        Formula::Implies(a, b) => compile_implication(&[Vec::new()], a, b, universals, out),
        Formula::Iff(a, b) => {
            compile_implication(&[Vec::new()], a, b, universals, out)?;
            compile_implication(&[Vec::new()], b, a, universals, out)
        }
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Not(g) => compile(g, universals, out),
            Formula::Exists(v, body) => compile(&Formula::forall(v.clone(), Formula::not((**body).clone())), universals, out),
            Formula::Or(a, b) => compile(
                &Formula::and(Formula::not((**a).clone()), Formula::not((**b).clone())),
                universals,
                out,
            ),
            Formula::And(..) => {
                // ~(l1 & ... & ln): each li is refuted by the others
                let mut lits = Vec::new();
                if !conjunction_literals(inner, &mut lits) || lits.len() < 2 {
                    return Err(reject(f, "negated conjunction of non-literals"));
                }
                for i in 0..lits.len() {
                    let body = lits.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, l)| l.clone()).collect();
                    out.push(make_rule(lits[i].complement(), body, universals));
                }
                Ok(())
            }
            _ => Err(reject(f, "negated compound")),
        },
        Formula::Or(..) => Err(reject(f, "disjunction")),
        Formula::Exists(..) => Err(reject(f, "existential")),
        Formula::Atom(_) => unreachable!("literals handled above"),
    }
}

fn conjunction_literals(f: &Formula, out: &mut Vec<Literal>) -> bool {
    match f {
        Formula::And(a, b) => conjunction_literals(a, out) && conjunction_literals(b, out),
        _ => match Literal::from_formula(f) {
            Some(l) => {
                out.push(l);
                true
            }
            None => false,
        },
    }
}

/// `bodies` are alternative conjunctions already accumulated from curried
/// antecedents (`A -> (B -> C)`).
fn compile_implication(
    bodies: &[Vec<Literal>],
    antecedent: &Formula,
    consequent: &Formula,
    universals: &mut Vec<String>,
    out: &mut Vec<HornRule>,
) -> Result<(), HornError> {
    let mark = universals.len();
    let alternatives = antecedent_dnf(antecedent, universals)?;
    let mut combined = Vec::new();
    for prefix in bodies {
        for alt in &alternatives {
            let mut b = prefix.clone();
            b.extend(alt.iter().cloned());
            combined.push(b);
        }
    }
    let r = compile_consequent(&combined, consequent, universals, out);
    universals.truncate(mark);
    r
}

fn compile_consequent(
    bodies: &[Vec<Literal>],
    consequent: &Formula,
    universals: &mut Vec<String>,
    out: &mut Vec<HornRule>,
) -> Result<(), HornError> {
    if let Some(head) = Literal::from_formula(consequent) {
        for body in bodies {
            out.push(make_rule(head.clone(), body.clone(), universals));
        }
        return Ok(());
    }
    match consequent {
        Formula::And(a, b) => {
            compile_consequent(bodies, a, universals, out)?;
            compile_consequent(bodies, b, universals, out)
        }
        Formula::ForAll(v, body) => {
            universals.push(v.clone());
            let r = compile_consequent(bodies, body, universals, out);
            universals.pop();
            r
        }
        Formula::Implies(a, b) => compile_implication(bodies, a, b, universals, out),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Not(g) => compile_consequent(bodies, g, universals, out),
            Formula::Or(a, b) => compile_consequent(
                bodies,
                &Formula::and(Formula::not((**a).clone()), Formula::not((**b).clone())),
                universals,
                out,
            ),
            Formula::Exists(v, b) => compile_consequent(
                bodies,
                &Formula::forall(v.clone(), Formula::not((**b).clone())),
                universals,
                out,
            ),
            _ => Err(reject(consequent, "negated compound head")),
        },
        Formula::Or(..) => Err(reject(consequent, "disjunctive head")),
        Formula::Iff(..) => Err(reject(consequent, "biconditional head")),
        Formula::Exists(..) => Err(reject(consequent, "existential head")),
        Formula::Atom(_) => unreachable!("literals handled above"),
    }
}

/// Antecedent as a disjunction of conjunctions of literals. Existentials in
/// the antecedent become universals of the rule.
fn antecedent_dnf(f: &Formula, universals: &mut Vec<String>) -> Result<Vec<Vec<Literal>>, HornError> {
    if let Some(l) = Literal::from_formula(f) {
        return Ok(vec![vec![l]]);
    }
    match f {
        Formula::And(a, b) => {
            let left = antecedent_dnf(a, universals)?;
            let right = antecedent_dnf(b, universals)?;
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    let mut c = l.clone();
                    c.extend(r.iter().cloned());
                    out.push(c);
                }
            }
            Ok(out)
        }
        Formula::Or(a, b) => {
            let mut out = antecedent_dnf(a, universals)?;
            out.extend(antecedent_dnf(b, universals)?);
            Ok(out)
        }
        Formula::Exists(v, body) => {
            universals.push(v.clone());
            antecedent_dnf(body, universals)
        }
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Not(g) => antecedent_dnf(g, universals),
            Formula::Or(a, b) => antecedent_dnf(
                &Formula::and(Formula::not((**a).clone()), Formula::not((**b).clone())),
                universals,
            ),
            _ => Err(reject(f, "negated compound in antecedent")),
        },
        _ => Err(reject(f, "unsupported antecedent")),
    }
}

fn make_rule(head: Literal, body: Vec<Literal>, universals: &[String]) -> HornRule {
    let mut used = head.atom.vars();
    body.iter().for_each(|l| l.atom.collect_vars(&mut used));
    let mut vars: Vec<String> = Vec::new();
    for v in universals {
        if used.contains(v) && !vars.contains(v) {
            vars.push(v.clone());
        }
    }
    HornRule {
        head,
        body,
        universals: vars,
    }
}

/// True iff the two ground literals are complementary.
pub fn ground_complement(a: &Formula, b: &Formula) -> Result<bool, HornError> {
    let la = ground_literal(a)?;
    let lb = ground_literal(b)?;
    Ok(la.atom == lb.atom && la.positive != lb.positive)
}

fn ground_literal(f: &Formula) -> Result<Literal, HornError> {
    match Literal::from_formula(f) {
        Some(l) if l.is_ground() => Ok(l),
        _ => Err(HornError::NonLiteral(f.clone())),
    }
}
