//! Robinson unification with occurs check.

use thiserror::Error;

use super::{Atom, Literal, Substitution, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("predicate clash: {0} vs {1}")]
    PredicateClash(String, String),
    #[error("arity mismatch for {symbol}: {left} vs {right}")]
    ArityMismatch { symbol: String, left: usize, right: usize },
    #[error("symbol clash: {0} vs {1}")]
    SymbolClash(String, String),
    #[error("occurs check: {var} occurs in {term}")]
    OccursCheck { var: String, term: Term },
    #[error("polarity clash")]
    PolarityClash,
}

/// Most general unifier of two atoms. The result is idempotent.
pub fn unify(a: &Atom, b: &Atom) -> Result<Substitution, UnifyError> {
    unify_atoms_with(a, b, Substitution::new())
}

pub fn unify_literals(a: &Literal, b: &Literal) -> Result<Substitution, UnifyError> {
    if a.positive != b.positive {
        return Err(UnifyError::PolarityClash);
    }
    unify(&a.atom, &b.atom)
}

pub fn unify_terms(s: &Term, t: &Term) -> Result<Substitution, UnifyError> {
    let mut subst = Substitution::new();
    unify_pairs(vec![(s.clone(), t.clone())], &mut subst)?;
    Ok(subst)
}

/// Extends `base` (assumed idempotent) to a unifier of `a` and `b`.
pub(crate) fn unify_atoms_with(a: &Atom, b: &Atom, base: Substitution) -> Result<Substitution, UnifyError> {
    if a.predicate != b.predicate {
        return Err(UnifyError::PredicateClash(a.predicate.clone(), b.predicate.clone()));
    }
    if a.args.len() != b.args.len() {
        return Err(UnifyError::ArityMismatch {
            symbol: a.predicate.clone(),
            left: a.args.len(),
            right: b.args.len(),
        });
    }
    let mut subst = base;
    let pairs = a.args.iter().cloned().zip(b.args.iter().cloned()).collect();
    unify_pairs(pairs, &mut subst)?;
    Ok(subst)
}

fn unify_pairs(mut work: Vec<(Term, Term)>, subst: &mut Substitution) -> Result<(), UnifyError> {
    work.reverse();
    while let Some((s, t)) = work.pop() {
        let s = subst.apply_term(&s);
        let t = subst.apply_term(&t);
        if s == t {
            continue;
        }
        match (s, t) {
            (Term::Var(v), other) | (other, Term::Var(v)) => {
                if other.occurs(&v) {
                    return Err(UnifyError::OccursCheck { var: v, term: other });
                }
                subst.extend(&v, other);
            }
            (Term::Func(f, xs), Term::Func(g, ys)) => {
                if f != g {
                    return Err(UnifyError::SymbolClash(f, g));
                }
                if xs.len() != ys.len() {
                    return Err(UnifyError::ArityMismatch {
                        symbol: f,
                        left: xs.len(),
                        right: ys.len(),
                    });
                }
                work.extend(xs.into_iter().zip(ys).rev());
            }
            (s, t) => return Err(UnifyError::SymbolClash(s.to_string(), t.to_string())),
        }
    }
    Ok(())
}
