use crate::fol::{Atom, Formula, Term};

use super::template::inflect;

fn term(t: &Term) -> String {
    match t {
        Term::Var(_) => "something".to_string(),
        Term::Const(c) => c.to_lowercase(),
        Term::Func(f, args) => {
            let args: Vec<String> = args.iter().map(term).collect();
            format!("the {} of {}", f.to_lowercase(), args.join(" and "))
        }
    }
}

fn atom(a: &Atom, positive: bool) -> String {
    let p = a.predicate.to_lowercase();
    match (a.args.as_slice(), positive) {
        ([], true) => p,
        ([t], true) => format!("{} is {p}", term(t)),
        ([t], false) => format!("{} is not {p}", term(t)),
        ([s, o], true) => format!("{} {} {}", term(s), inflect(&p), term(o)),
        ([s, o], false) => format!("{} does not {p} {}", term(s), term(o)),
        (args, _) => {
            let args: Vec<String> = args.iter().map(term).collect();
            let core = format!("{p} holds of {}", args.join(" and "));
            if positive {
                core
            } else {
                format!("it is not the case that {core}")
            }
        }
    }
}

/// `forall x. (P(x) -> Q(x))` and `forall x. (P(x) -> ~Q(x))` read as
/// "every p is a q" / "no p is a q".
fn class_inclusion(var: &str, body: &Formula) -> Option<String> {
    let Formula::Implies(lhs, rhs) = body else { return None };
    let unary_on_var = |a: &Atom| matches!(a.args.as_slice(), [Term::Var(v)] if v == var);
    let Formula::Atom(p) = lhs.as_ref() else { return None };
    if !unary_on_var(p) {
        return None;
    }
    let (q, positive) = match rhs.as_ref() {
        Formula::Atom(q) => (q, true),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Atom(q) => (q, false),
            _ => return None,
        },
        _ => return None,
    };
    if !unary_on_var(q) {
        return None;
    }
    let (p, q) = (p.predicate.to_lowercase(), q.predicate.to_lowercase());
    Some(if positive {
        format!("every {p} is a {q}")
    } else {
        format!("no {p} is a {q}")
    })
}

/// Renders a formula as canonical English.
pub fn verbalize(f: &Formula) -> String {
    match f {
        Formula::Atom(a) => atom(a, true),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Atom(a) => atom(a, false),
            other => format!("it is not the case that {}", verbalize(other)),
        },
        Formula::And(a, b) => format!("{} and {}", verbalize(a), verbalize(b)),
        Formula::Or(a, b) => format!("either {} or {}", verbalize(a), verbalize(b)),
        Formula::Implies(a, b) => format!("if {} then {}", verbalize(a), verbalize(b)),
        Formula::Iff(a, b) => format!("{} if and only if {}", verbalize(a), verbalize(b)),
        Formula::ForAll(v, body) => {
            class_inclusion(v, body).unwrap_or_else(|| format!("for every thing, {}", verbalize(body)))
        }
        Formula::Exists(_, body) => format!("for some thing, {}", verbalize(body)),
    }
}
