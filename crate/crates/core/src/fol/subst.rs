use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Atom, Formula, Literal, Term};

/// Variable bindings. Kept in a `BTreeMap` so display and iteration order
/// are stable across runs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    bindings: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, Term)>,
        S: Into<String>,
    {
        Substitution {
            bindings: pairs.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.bindings.iter()
    }

    /// Adds `var ↦ term` and rewrites existing ranges so the result stays
    /// idempotent. `term` must already be normalized under `self` and must
    /// not contain `var`.
    pub fn extend(&mut self, var: &str, term: Term) {
        let single = Substitution::from_pairs([(var.to_string(), term.clone())]);
        for t in self.bindings.values_mut() {
            *t = single.apply_term(t);
        }
        self.bindings.insert(var.to_string(), term);
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => match self.bindings.get(v) {
                Some(bound) => bound.clone(),
                None => t.clone(),
            },
            Term::Const(_) => t.clone(),
            Term::Func(f, args) => Term::Func(f.clone(), args.iter().map(|a| self.apply_term(a)).collect()),
        }
    }

    /// Applies bindings until a fixpoint; used on substitutions that may
    /// not be idempotent yet.
    pub fn resolve_term(&self, t: &Term) -> Term {
        let mut cur = t.clone();
        for _ in 0..=self.bindings.len() {
            let next = self.apply_term(&cur);
            if next == cur {
                break;
            }
            cur = next;
        }
        cur
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom {
            predicate: a.predicate.clone(),
            args: a.args.iter().map(|t| self.apply_term(t)).collect(),
        }
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        Literal {
            positive: l.positive,
            atom: self.apply_atom(&l.atom),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        self.bindings.values().all(|t| self.apply_term(t) == *t)
    }

    /// Composition `self ∘ other`: apply `self`, then `other`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut bindings: BTreeMap<String, Term> = self
            .bindings
            .iter()
            .map(|(k, v)| (k.clone(), other.apply_term(v)))
            .collect();
        for (k, v) in &other.bindings {
            bindings.entry(k.clone()).or_insert_with(|| v.clone());
        }
        bindings.retain(|k, v| !matches!(v, Term::Var(w) if w == k));
        Substitution { bindings }
    }

    /// Keeps only bindings for the given variables.
    pub fn restrict(&self, vars: &BTreeSet<String>) -> Substitution {
        Substitution {
            bindings: self
                .bindings
                .iter()
                .filter(|(k, _)| vars.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    fn range_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.bindings.values().for_each(|t| t.collect_vars(&mut out));
        out
    }

    fn without(&self, var: &str) -> Substitution {
        let mut s = self.clone();
        s.bindings.remove(var);
        s
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}↦{v}")?;
        }
        f.write_str("}")
    }
}

/// Capture-avoiding substitution of free variables.
pub fn substitute(f: &Formula, s: &Substitution) -> Formula {
    if s.is_empty() {
        return f.clone();
    }
    match f {
        Formula::Atom(a) => Formula::Atom(s.apply_atom(a)),
        Formula::Not(g) => Formula::not(substitute(g, s)),
        Formula::And(a, b) => Formula::and(substitute(a, s), substitute(b, s)),
        Formula::Or(a, b) => Formula::or(substitute(a, s), substitute(b, s)),
        Formula::Implies(a, b) => Formula::implies(substitute(a, s), substitute(b, s)),
        Formula::Iff(a, b) => Formula::iff(substitute(a, s), substitute(b, s)),
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            let inner = s.without(v);
            let (v2, body2) = if inner.range_vars().contains(v) && body.free_vars().contains(v) {
                // rename the binder away from the incoming terms
                let mut avoid = inner.range_vars();
                avoid.extend(body.free_vars());
                avoid.extend(inner.bindings.keys().cloned());
                let fresh = (1..)
                    .map(|n| format!("{v}_{n}"))
                    .find(|c| !avoid.contains(c))
                    .expect("unbounded counter");
                let renamed = substitute(body, &Substitution::from_pairs([(v.clone(), Term::Var(fresh.clone()))]));
                (fresh, renamed)
            } else {
                (v.clone(), body.as_ref().clone())
            };
            let new_body = substitute(&body2, &inner);
            match f {
                Formula::ForAll(..) => Formula::forall(v2, new_body),
                _ => Formula::exists(v2, new_body),
            }
        }
    }
}

impl Formula {
    pub fn substitute(&self, s: &Substitution) -> Formula {
        substitute(self, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: &str) -> Term {
        Term::constant(n)
    }

    #[test]
    fn ground_atom() {
        let f = Formula::atom("P", vec![Term::var("x")]);
        let s = Substitution::from_pairs([("x", c("a"))]);
        assert_eq!(f.substitute(&s), Formula::atom("P", vec![c("a")]));
    }

    #[test]
    fn bound_variable_is_untouched() {
        let f = Formula::forall("x", Formula::atom("P", vec![Term::var("x")]));
        let s = Substitution::from_pairs([("x", c("a"))]);
        assert_eq!(f.substitute(&s), f);
    }

    #[test]
    fn nested_function_terms() {
        let f = Formula::atom("P", vec![Term::func("f", vec![Term::var("x")]), Term::var("y")]);
        let s = Substitution::from_pairs([("x", c("a")), ("y", Term::func("g", vec![c("b")]))]);
        let expected = Formula::atom("P", vec![Term::func("f", vec![c("a")]), Term::func("g", vec![c("b")])]);
        assert_eq!(f.substitute(&s), expected);
    }

    #[test]
    fn binder_is_renamed_to_avoid_capture() {
        // P(z) & forall y. R(z, y) with z ↦ y must not capture y
        let f = Formula::and(
            Formula::atom("P", vec![Term::var("z")]),
            Formula::forall("y", Formula::atom("R", vec![Term::var("z"), Term::var("y")])),
        );
        let s = Substitution::from_pairs([("z", Term::var("y"))]);
        let out = f.substitute(&s);
        let Formula::And(_, rhs) = &out else { panic!() };
        let Formula::ForAll(binder, body) = rhs.as_ref() else { panic!() };
        assert_ne!(binder, "y");
        assert_eq!(body.as_ref(), &Formula::atom("R", vec![Term::var("y"), Term::var(binder.clone())]));
    }

    #[test]
    fn extend_keeps_idempotence() {
        let mut s = Substitution::new();
        s.extend("y", Term::func("f", vec![Term::var("x")]));
        s.extend("x", c("a"));
        assert!(s.is_idempotent());
        assert_eq!(s.get("y"), Some(&Term::func("f", vec![c("a")])));
    }

    #[test]
    fn compose_applies_left_then_right() {
        let s1 = Substitution::from_pairs([("x", Term::var("y"))]);
        let s2 = Substitution::from_pairs([("y", c("a"))]);
        let comp = s1.compose(&s2);
        let atom = Atom::new("P", vec![Term::var("x"), Term::var("y")]);
        assert_eq!(comp.apply_atom(&atom), s2.apply_atom(&s1.apply_atom(&atom)));
    }
}
