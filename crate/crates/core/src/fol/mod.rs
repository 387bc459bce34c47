//! First-order logic: syntax trees, surface parsing and printing,
//! substitution, unification and compilation to Horn rules.
//!
//! The surface syntax is ASCII: `forall x. (Cat(x) -> Animal(x))`,
//! `~Rain`, `(P(a) & Q(b))`. Identifiers not bound by an enclosing
//! quantifier are constants.

mod horn;
mod parse;
mod print;
mod subst;
mod unify;

use std::collections::BTreeSet;
use std::fmt;

pub use horn::{ground_complement, to_horn, HornError, HornRule};
pub use parse::{parse_formula, SyntaxError};
pub use print::print_formula;
pub use subst::{substitute, Substitution};
pub use unify::{unify, unify_literals, unify_terms, UnifyError};
pub(crate) use unify::unify_atoms_with;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    Func(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn func(name: impl Into<String>, args: Vec<Term>) -> Self {
        Term::Func(name.into(), args)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::Func(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// True if variable `name` occurs anywhere inside this term.
    pub fn occurs(&self, name: &str) -> bool {
        match self {
            Term::Var(v) => v == name,
            Term::Const(_) => false,
            Term::Func(_, args) => args.iter().any(|t| t.occurs(name)),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::Func(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    pub fn collect_constants(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(_) => {}
            Term::Const(c) => {
                out.insert(c.clone());
            }
            Term::Func(_, args) => args.iter().for_each(|t| t.collect_constants(out)),
        }
    }

    /// Nesting depth; constants and variables have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Func(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            _ => 0,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(n) | Term::Const(n) => f.write_str(n),
            Term::Func(n, args) => {
                write!(f, "{n}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A predicate applied to terms. Zero arguments is a propositional atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        self.args.iter().for_each(|t| t.collect_vars(out));
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// An atom with a polarity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal {
            positive: true,
            atom,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal {
            positive: false,
            atom,
        }
    }

    pub fn complement(&self) -> Self {
        Literal {
            positive: !self.positive,
            atom: self.atom.clone(),
        }
    }

    pub fn is_ground(&self) -> bool {
        self.atom.is_ground()
    }

    pub fn to_formula(&self) -> Formula {
        let a = Formula::Atom(self.atom.clone());
        if self.positive {
            a
        } else {
            Formula::not(a)
        }
    }

    /// Reads a literal from `Atom`, `~Atom`, `~~Atom`, ...
    pub fn from_formula(f: &Formula) -> Option<Literal> {
        match f {
            Formula::Atom(a) => Some(Literal::pos(a.clone())),
            Formula::Not(inner) => Literal::from_formula(inner).map(|l| l.complement()),
            _ => None,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ForAll(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atom(Atom::new(predicate, args))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Self {
        Formula::ForAll(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(var.into(), Box::new(body))
    }

    /// Free variables (variables not bound by an enclosing quantifier).
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                for v in a.vars() {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            Formula::Not(f) => f.free_vars_into(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.free_vars_into(bound, out);
                b.free_vars_into(bound, out);
            }
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.free_vars_into(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| a.args.iter().for_each(|t| t.collect_constants(&mut out)));
        out
    }

    pub fn predicates(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| {
            out.insert((a.predicate.clone(), a.args.len()));
        });
        out
    }

    pub fn visit_atoms(&self, visit: &mut impl FnMut(&Atom)) {
        match self {
            Formula::Atom(a) => visit(a),
            Formula::Not(f) | Formula::ForAll(_, f) | Formula::Exists(_, f) => f.visit_atoms(visit),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit_atoms(visit);
                b.visit_atoms(visit);
            }
        }
    }

    /// Alpha-equivalence: equal up to consistent renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha_eq_in(self, other, &mut Vec::new())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

fn alpha_eq_in(a: &Formula, b: &Formula, binders: &mut Vec<(String, String)>) -> bool {
    match (a, b) {
        (Formula::Atom(x), Formula::Atom(y)) => {
            x.predicate == y.predicate
                && x.args.len() == y.args.len()
                && x.args.iter().zip(&y.args).all(|(s, t)| alpha_eq_term(s, t, binders))
        }
        (Formula::Not(x), Formula::Not(y)) => alpha_eq_in(x, y, binders),
        (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2))
        | (Formula::Implies(a1, a2), Formula::Implies(b1, b2))
        | (Formula::Iff(a1, a2), Formula::Iff(b1, b2)) => {
            alpha_eq_in(a1, b1, binders) && alpha_eq_in(a2, b2, binders)
        }
        (Formula::ForAll(v, x), Formula::ForAll(w, y))
        | (Formula::Exists(v, x), Formula::Exists(w, y)) => {
            binders.push((v.clone(), w.clone()));
            let eq = alpha_eq_in(x, y, binders);
            binders.pop();
            eq
        }
        _ => false,
    }
}

fn alpha_eq_term(s: &Term, t: &Term, binders: &[(String, String)]) -> bool {
    match (s, t) {
        (Term::Var(v), Term::Var(w)) => {
            // innermost binder wins
            let lv = binders.iter().rposition(|(l, _)| l == v);
            let rw = binders.iter().rposition(|(_, r)| r == w);
            match (lv, rw) {
                (Some(i), Some(j)) => i == j,
                (None, None) => v == w,
                _ => false,
            }
        }
        (Term::Const(a), Term::Const(b)) => a == b,
        (Term::Func(f, xs), Term::Func(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_eq_term(x, y, binders))
        }
        _ => false,
    }
}

/// Identifier rule shared by the parser and generators: a letter followed
/// by letters, digits or underscores.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "forall"
        && s != "exists"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_eq_respects_binder_structure() {
        let a = parse_formula("forall x. forall y. R(x, y)").unwrap();
        let b = parse_formula("forall u. forall v. R(u, v)").unwrap();
        let c = parse_formula("forall u. forall v. R(v, u)").unwrap();
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&c));
    }

    #[test]
    fn literal_from_double_negation() {
        let f = parse_formula("~~Cat(tom)").unwrap();
        let lit = Literal::from_formula(&f).unwrap();
        assert!(lit.positive);
        assert_eq!(lit.atom.predicate, "Cat");
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("Cat_2"));
        assert!(!is_identifier("2cat"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("forall"));
    }
}
