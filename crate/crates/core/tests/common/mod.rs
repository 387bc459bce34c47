//! Reference implementations the engine is checked against. Nothing here
//! calls the engine's unifier or prover: rules are grounded by brute force
//! over the constants and saturated naively.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use hblr::fol::{parse_formula, to_horn, Atom, Formula, Literal, Term};
use hblr::reasoning::Verdict;
use rand::seq::SliceRandom;
use rand::Rng;

fn ground_term(t: &Term, env: &HashMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => env.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Const(_) => t.clone(),
        Term::Func(f, args) => Term::Func(f.clone(), args.iter().map(|a| ground_term(a, env)).collect()),
    }
}

fn ground_literal(l: &Literal, env: &HashMap<String, Term>) -> Literal {
    Literal {
        positive: l.positive,
        atom: Atom::new(l.atom.predicate.clone(), l.atom.args.iter().map(|a| ground_term(a, env)).collect()),
    }
}

fn assignments(vars: &[String], domain: &[Term]) -> Vec<HashMap<String, Term>> {
    let mut out = vec![HashMap::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|env| {
                domain.iter().map(move |c| {
                    let mut e = env.clone();
                    e.insert(v.clone(), c.clone());
                    e
                })
            })
            .collect();
    }
    out
}

/// Every ground literal derivable from the Horn-compilable premises, with
/// rule variables ranging over the constants mentioned anywhere.
pub fn closure(premises: &[Formula], extra: &[&Formula]) -> HashSet<Literal> {
    let mut names: BTreeSet<String> = BTreeSet::new();
    for f in premises.iter().chain(extra.iter().copied()) {
        names.extend(f.constants());
    }
    let domain: Vec<Term> = names.into_iter().map(Term::Const).collect();
    let mut grounded: Vec<(Vec<Literal>, Literal)> = Vec::new();
    for f in premises {
        let Ok(rules) = to_horn(f) else { continue };
        for r in rules {
            let mut vars = BTreeSet::new();
            r.head.atom.collect_vars(&mut vars);
            for b in &r.body {
                b.atom.collect_vars(&mut vars);
            }
            let vars: Vec<String> = vars.into_iter().collect();
            for env in assignments(&vars, &domain) {
                grounded.push((r.body.iter().map(|b| ground_literal(b, &env)).collect(), ground_literal(&r.head, &env)));
            }
        }
    }
    let mut known: HashSet<Literal> = HashSet::new();
    loop {
        let before = known.len();
        for (body, head) in &grounded {
            if !known.contains(head) && body.iter().all(|b| known.contains(b)) {
                known.insert(head.clone());
            }
        }
        if known.len() == before {
            return known;
        }
    }
}

fn goals(f: &Formula, out: &mut Vec<Literal>) -> bool {
    match f {
        Formula::And(a, b) => goals(a, out) && goals(b, out),
        other => match Literal::from_formula(other) {
            Some(l) if l.is_ground() => {
                out.push(l);
                true
            }
            _ => false,
        },
    }
}

/// True when every conjunct of the conclusion is in the closure, False when
/// some conjunct's complement is, Unknown otherwise.
pub fn closure_verdict(premises: &[Formula], conclusion: &Formula) -> Verdict {
    let mut gs = Vec::new();
    assert!(goals(conclusion, &mut gs), "conclusion is not a conjunction of ground literals");
    let known = closure(premises, &[conclusion]);
    if gs.iter().all(|g| known.contains(g)) {
        Verdict::True
    } else if gs.iter().any(|g| known.contains(&g.complement())) {
        Verdict::False
    } else {
        Verdict::Unknown
    }
}

/// Classical truth of a function-free formula in the Herbrand structure
/// over `domain` whose true atoms are `model`.
pub fn holds(f: &Formula, model: &HashSet<Atom>, domain: &[Term], env: &mut HashMap<String, Term>) -> bool {
    match f {
        Formula::Atom(a) => model.contains(&Atom::new(
            a.predicate.clone(),
            a.args.iter().map(|t| ground_term(t, env)).collect(),
        )),
        Formula::Not(g) => !holds(g, model, domain, env),
        Formula::And(a, b) => holds(a, model, domain, env) && holds(b, model, domain, env),
        Formula::Or(a, b) => holds(a, model, domain, env) || holds(b, model, domain, env),
        Formula::Implies(a, b) => !holds(a, model, domain, env) || holds(b, model, domain, env),
        Formula::Iff(a, b) => holds(a, model, domain, env) == holds(b, model, domain, env),
        Formula::ForAll(v, g) | Formula::Exists(v, g) => {
            let universal = matches!(f, Formula::ForAll(..));
            let saved = env.get(v).cloned();
            let mut result = universal;
            for c in domain {
                env.insert(v.clone(), c.clone());
                if holds(g, model, domain, env) != universal {
                    result = !universal;
                    break;
                }
            }
            match saved {
                Some(t) => env.insert(v.clone(), t),
                None => env.remove(v),
            };
            result
        }
    }
}

pub const PREDICATES: [(&str, usize); 6] = [("P", 1), ("Q", 1), ("R", 1), ("S", 1), ("T", 2), ("U", 2)];

fn random_literal<R: Rng>(rng: &mut R, preds: &[(&str, usize)], terms: &[&str], neg: f64) -> String {
    let (p, arity) = preds.choose(rng).unwrap();
    let args: Vec<&str> = (0..*arity).map(|_| *terms.choose(rng).unwrap()).collect();
    let atom = if args.is_empty() { p.to_string() } else { format!("{p}({})", args.join(",")) };
    if rng.gen_bool(neg) {
        format!("~{atom}")
    } else {
        atom
    }
}

/// A random function-free problem: ground facts, universally quantified
/// rules with one or two body literals (negative literals and unsafe head
/// variables included), the odd universal fact and non-Horn disjunction,
/// and a ground conclusion of one or two literals.
pub fn random_problem<R: Rng>(rng: &mut R, max_premises: usize, n_preds: usize, n_consts: usize) -> (Vec<Formula>, Formula) {
    let preds = &PREDICATES[..n_preds.clamp(1, PREDICATES.len())];
    let consts: Vec<String> = (0..n_consts.max(1)).map(|i| format!("c{i}")).collect();
    let cs: Vec<&str> = consts.iter().map(String::as_str).collect();
    let n = rng.gen_range(1..=max_premises);
    let mut premises = Vec::with_capacity(n);
    for _ in 0..n {
        let text = match rng.gen_range(0..20) {
            0..=8 => random_literal(rng, preds, &cs, 0.2),
            9..=16 => {
                let vars = ["x", "y"];
                let mut body = vec![random_literal(rng, preds, &[vars[0], vars[1], cs[0]], 0.15)];
                if rng.gen_bool(0.4) {
                    body.push(random_literal(rng, preds, &vars, 0.15));
                }
                let head = random_literal(rng, preds, &vars, 0.2);
                let body = if body.len() == 1 { body.remove(0) } else { format!("({} & {})", body[0], body[1]) };
                format!("forall x. forall y. ({body} -> {head})")
            }
            17 => format!("forall x. {}", random_literal(rng, preds, &["x"], 0.2)),
            18 => format!(
                "({} | {})",
                random_literal(rng, preds, &cs, 0.2),
                random_literal(rng, preds, &cs, 0.2)
            ),
            _ => format!(
                "forall x. ({} <-> {})",
                random_literal(rng, preds, &["x"], 0.0),
                random_literal(rng, preds, &["x"], 0.0)
            ),
        };
        premises.push(parse_formula(&text).unwrap_or_else(|e| panic!("{text}: {e}")));
    }
    let conclusion = if rng.gen_bool(0.8) {
        random_literal(rng, preds, &cs, 0.3)
    } else {
        format!("({} & {})", random_literal(rng, preds, &cs, 0.2), random_literal(rng, preds, &cs, 0.2))
    };
    (premises, parse_formula(&conclusion).unwrap())
}

pub mod strategies;

/// Applies a ground assignment to an atom without the engine's substitution.
pub fn instantiate(a: &Atom, env: &HashMap<String, Term>) -> Atom {
    Atom::new(a.predicate.clone(), a.args.iter().map(|t| ground_term(t, env)).collect())
}

pub fn ground_assignments(vars: &[String], domain: &[Term]) -> Vec<HashMap<String, Term>> {
    assignments(vars, domain)
}
