//! proptest generators for terms, atoms and closed formulas.

use std::collections::BTreeSet;

use hblr::fol::{Atom, Formula, Term};
use proptest::prelude::*;
use proptest::sample::select;

pub const VARS: [&str; 3] = ["x", "y", "z"];
pub const CONSTS: [&str; 3] = ["a", "b", "c"];

/// Terms of depth at most `depth` over x, y, z, a, b, c, f/1 and g/2.
pub fn term(depth: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        select(VARS.to_vec()).prop_map(Term::var),
        select(CONSTS[..2].to_vec()).prop_map(Term::constant),
    ];
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::func("f", vec![t])),
            (inner.clone(), inner).prop_map(|(s, t)| Term::func("g", vec![s, t])),
        ]
    })
}

pub fn atom(depth: u32) -> impl Strategy<Value = Atom> {
    prop_oneof![
        Just(Atom::new("Rain", vec![])),
        term(depth).prop_map(|t| Atom::new("P", vec![t])),
        (term(depth), term(depth)).prop_map(|(s, t)| Atom::new("Q", vec![s, t])),
    ]
}

fn close_term(t: &Term, scope: &[String]) -> Term {
    match t {
        Term::Var(v) if !scope.contains(v) => Term::constant(v.clone()),
        Term::Func(f, args) => Term::func(f.clone(), args.iter().map(|a| close_term(a, scope)).collect()),
        other => other.clone(),
    }
}

/// Variables outside every binder become constants of the same name, which
/// is how the parser reads them.
pub fn close(f: &Formula, scope: &mut Vec<String>) -> Formula {
    match f {
        Formula::Atom(a) => Formula::Atom(Atom::new(
            a.predicate.clone(),
            a.args.iter().map(|t| close_term(t, scope)).collect(),
        )),
        Formula::Not(g) => Formula::not(close(g, scope)),
        Formula::And(a, b) => Formula::and(close(a, scope), close(b, scope)),
        Formula::Or(a, b) => Formula::or(close(a, scope), close(b, scope)),
        Formula::Implies(a, b) => Formula::implies(close(a, scope), close(b, scope)),
        Formula::Iff(a, b) => Formula::iff(close(a, scope), close(b, scope)),
        Formula::ForAll(v, g) | Formula::Exists(v, g) => {
            scope.push(v.clone());
            let body = close(g, scope);
            scope.pop();
            if matches!(f, Formula::ForAll(..)) {
                Formula::forall(v.clone(), body)
            } else {
                Formula::exists(v.clone(), body)
            }
        }
    }
}

pub fn formula() -> impl Strategy<Value = Formula> {
    let leaf = atom(2).prop_map(Formula::Atom);
    let raw = leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (select(VARS.to_vec()), inner.clone()).prop_map(|(v, g)| Formula::forall(v, g)),
            (select(VARS.to_vec()), inner).prop_map(|(v, g)| Formula::exists(v, g)),
        ]
    });
    raw.prop_map(|f| close(&f, &mut Vec::new()))
}

/// A variable and a compound term that strictly contains it.
pub fn cyclic_pair() -> impl Strategy<Value = (String, Term)> {
    (select(VARS.to_vec()), prop::collection::vec((any::<bool>(), term(1)), 1..4)).prop_map(|(v, wraps)| {
        let mut t = Term::var(v);
        for (left, other) in wraps {
            t = match (left, other) {
                (true, o) => Term::func("g", vec![t, o]),
                (false, Term::Var(_)) => Term::func("f", vec![t]),
                (false, o) => Term::func("g", vec![o, t]),
            };
        }
        (v.to_string(), t)
    })
}

pub fn vars_of(atoms: &[&Atom]) -> Vec<String> {
    let mut vars = BTreeSet::new();
    for a in atoms {
        a.collect_vars(&mut vars);
    }
    vars.into_iter().collect()
}

/// Ground terms of depth at most one over a, b, f and g.
pub fn small_domain() -> Vec<Term> {
    let base = [Term::constant("a"), Term::constant("b")];
    let mut out = base.to_vec();
    out.extend(base.iter().map(|t| Term::func("f", vec![t.clone()])));
    for s in &base {
        for t in &base {
            out.push(Term::func("g", vec![s.clone(), t.clone()]));
        }
    }
    out
}
