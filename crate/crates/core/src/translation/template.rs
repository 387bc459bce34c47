//! Rule-based translation of the sentence shapes used by templated
//! reasoning corpora ("X is a Y", "If something is A then it is B", ...).

use crate::fol::{is_identifier, Formula, Term};

use super::tokenize;

const VAR: &str = "x";

const PRONOUNS: [&str; 7] = ["something", "someone", "it", "they", "he", "she", "somebody"];

const RESERVED: [&str; 24] = [
    "a", "an", "the", "is", "are", "not", "does", "do", "if", "then", "and", "or", "all", "every", "each", "no",
    "when", "whenever", "some", "either", "neither", "nor", "unless", "iff",
];

const KIND_NOUNS: [&str; 4] = ["things", "people", "ones", "individuals"];

fn is_word(t: &str) -> bool {
    is_identifier(t) && !RESERVED.contains(&t) && !PRONOUNS.contains(&t)
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Plural noun to singular, without a lexicon.
pub fn singularize(word: &str) -> String {
    if let Some(stem) = word.strip_suffix("ies") {
        if !stem.is_empty() {
            return format!("{stem}y");
        }
    }
    for suffix in ["sses", "shes", "ches", "xes", "zes", "uses"] {
        if word.ends_with(suffix) {
            return word[..word.len() - 2].to_string();
        }
    }
    if ["ss", "us", "ous", "is"].iter().any(|s| word.ends_with(s)) {
        return word.to_string();
    }
    word.strip_suffix('s').unwrap_or(word).to_string()
}

/// Third-person verb form to its base.
pub(crate) fn deinflect(verb: &str) -> String {
    for suffix in ["sses", "shes", "ches", "xes", "zes"] {
        if verb.ends_with(suffix) {
            return verb[..verb.len() - 2].to_string();
        }
    }
    if verb.ends_with("ss") {
        return verb.to_string();
    }
    verb.strip_suffix('s').unwrap_or(verb).to_string()
}

/// Base verb form to its third-person singular.
pub(crate) fn inflect(verb: &str) -> String {
    if ["s", "sh", "ch", "x", "z"].iter().any(|s| verb.ends_with(s)) {
        format!("{verb}es")
    } else {
        format!("{verb}s")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Subject {
    Var,
    Name(String),
}

impl Subject {
    fn term(&self) -> Term {
        match self {
            Subject::Var => Term::var(VAR),
            Subject::Name(n) => Term::constant(n.clone()),
        }
    }
}

fn literal(positive: bool, f: Formula) -> Formula {
    if positive {
        f
    } else {
        Formula::not(f)
    }
}

fn conjoin(mut parts: Vec<Formula>) -> Option<Formula> {
    let last = parts.pop()?;
    Some(parts.into_iter().rev().fold(last, |acc, f| Formula::and(f, acc)))
}

/// `["the"] NAME`, a pronoun, or a bare name; returns the subject and tokens consumed.
fn subject(t: &[&str]) -> Option<(Subject, usize)> {
    match t {
        [p, ..] if PRONOUNS.contains(p) => Some((Subject::Var, 1)),
        ["the", n, ..] if is_word(n) => Some((Subject::Name(n.to_string()), 2)),
        [n, ..] if is_word(n) => Some((Subject::Name(n.to_string()), 1)),
        _ => None,
    }
}

fn object(t: &[&str]) -> Option<Term> {
    match t {
        ["the", n] | [n] if is_word(n) => Some(Term::constant(n.to_string())),
        _ => None,
    }
}

/// Everything after the subject: a copula phrase or a transitive verb phrase.
fn verb_phrase(subj: &Subject, t: &[&str], plural: bool) -> Option<Formula> {
    let (copula_plural, rest) = match t {
        ["is", rest @ ..] => (false, rest),
        ["are", rest @ ..] => (true, rest),
        _ => return transitive(subj, t),
    };
    copula_rest(subj, rest, copula_plural || plural)
}

fn copula_rest(subj: &Subject, t: &[&str], plural: bool) -> Option<Formula> {
    let (positive, t) = match t {
        ["not", rest @ ..] => (false, rest),
        _ => (true, t),
    };
    let t = match t {
        ["a" | "an", rest @ ..] => rest,
        _ => t,
    };
    let [word] = t else { return None };
    if !is_word(word) {
        return None;
    }
    let word = if plural { singularize(word) } else { word.to_string() };
    Some(literal(positive, Formula::atom(capitalize(&word), vec![subj.term()])))
}

fn transitive(subj: &Subject, t: &[&str]) -> Option<Formula> {
    let (positive, verb, rest) = match t {
        ["does" | "do", "not", verb, rest @ ..] => (false, verb.to_string(), rest),
        [verb, rest @ ..] => (true, deinflect(verb), rest),
        _ => return None,
    };
    if !is_word(&verb) {
        return None;
    }
    let obj = object(rest)?;
    Some(literal(positive, Formula::atom(capitalize(&verb), vec![subj.term(), obj])))
}

/// `clause (and clause-or-continuation)*`; a continuation reuses the
/// previous subject ("Anne is red and young").
fn clause_list(t: &[&str]) -> Option<(Vec<Formula>, bool)> {
    let mut parts = Vec::new();
    let mut uses_var = false;
    let mut last: Option<(Subject, bool)> = None;
    for segment in t.split(|w| *w == "and") {
        if segment.is_empty() {
            return None;
        }
        let full = subject(segment).and_then(|(s, n)| {
            let plural = segment.get(n) == Some(&"are");
            verb_phrase(&s, &segment[n..], false).map(|f| (s, plural, f))
        });
        let (subj, plural, f) = match full {
            Some(found) => found,
            None => {
                let (s, plural) = last.clone()?;
                let f = copula_rest(&s, segment, plural).or_else(|| transitive(&s, segment))?;
                (s, plural, f)
            }
        };
        uses_var |= subj == Subject::Var;
        last = Some((subj, plural));
        parts.push(f);
    }
    Some((parts, uses_var))
}

/// Restrictor of a quantified sentence: `N`, `Ns`, `ADJ things`, `ADJ Ns`.
fn restrictor(t: &[&str], plural: bool) -> Option<Formula> {
    let noun = |w: &str| {
        let w = if plural { singularize(w) } else { w.to_string() };
        Formula::atom(capitalize(&w), vec![Term::var(VAR)])
    };
    match t {
        [n] if is_word(n) => Some(noun(n)),
        [adj, kind] if is_word(adj) && KIND_NOUNS.contains(kind) => {
            Some(Formula::atom(capitalize(adj), vec![Term::var(VAR)]))
        }
        [adj, n] if is_word(adj) && is_word(n) => Some(Formula::and(
            Formula::atom(capitalize(adj), vec![Term::var(VAR)]),
            noun(n),
        )),
        _ => None,
    }
}

fn quantified(t: &[&str]) -> Option<Formula> {
    let (negate, plural, rest) = match t {
        ["every" | "each", rest @ ..] => (false, false, rest),
        ["all", rest @ ..] => (false, true, rest),
        ["no", rest @ ..] => (true, false, rest),
        _ => return None,
    };
    let copula = rest.iter().position(|w| *w == "is" || *w == "are")?;
    let plural = plural || rest[copula] == "are";
    let restrict = restrictor(&rest[..copula], plural)?;
    let (heads, _) = clause_list(&[&["something", rest[copula]], &rest[copula + 1..]].concat())?;
    let head = conjoin(heads)?;
    let head = if negate { negate_head(head)? } else { head };
    Some(Formula::forall(VAR, Formula::implies(restrict, head)))
}

fn negate_head(f: Formula) -> Option<Formula> {
    match f {
        Formula::Atom(_) => Some(Formula::not(f)),
        _ => None,
    }
}

/// `Ns are ...` with no quantifier word.
fn bare_plural(t: &[&str]) -> Option<Formula> {
    match t {
        [noun, "are", rest @ ..] if is_word(noun) && noun.ends_with('s') => {
            let (heads, _) = clause_list(&[&["they", "are"], rest].concat())?;
            Some(Formula::forall(
                VAR,
                Formula::implies(
                    Formula::atom(capitalize(&singularize(noun)), vec![Term::var(VAR)]),
                    conjoin(heads)?,
                ),
            ))
        }
        _ => None,
    }
}

fn conditional(t: &[&str]) -> Option<Formula> {
    let ["if" | "when" | "whenever", rest @ ..] = t else { return None };
    let then = rest.iter().position(|w| *w == "then")?;
    let (ante, ante_var) = clause_list(&rest[..then])?;
    let (cons, cons_var) = clause_list(&rest[then + 1..])?;
    let body = Formula::implies(conjoin(ante)?, conjoin(cons)?);
    Some(if ante_var || cons_var {
        Formula::forall(VAR, body)
    } else {
        body
    })
}

fn ground(t: &[&str]) -> Option<Formula> {
    let (parts, uses_var) = clause_list(t)?;
    if uses_var {
        return None;
    }
    conjoin(parts)
}

/// Translates one sentence if it has a recognised shape.
pub fn template_translate(sentence: &str) -> Option<Formula> {
    let tokens = tokenize(sentence);
    let t: Vec<&str> = tokens.iter().map(String::as_str).collect();
    if t.is_empty() {
        return None;
    }
    conditional(&t)
        .or_else(|| quantified(&t))
        .or_else(|| bare_plural(&t))
        .or_else(|| ground(&t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_formula;

    fn check(sentence: &str, expected: &str) {
        let got = template_translate(sentence).unwrap_or_else(|| panic!("no translation for {sentence:?}"));
        assert_eq!(got, parse_formula(expected).unwrap(), "{sentence}");
    }

    #[test]
    fn corpus_shapes() {
        check("Every cat is an animal.", "forall x. (Cat(x) -> Animal(x))");
        check("Tom is a cat.", "Cat(tom)");
        check("If something is a wumpus then it is feisty.", "forall x. (Wumpus(x) -> Feisty(x))");
        check("Anne is not red.", "~Red(anne)");
        check("The bear isn't big.", "~Big(bear)");
        check("The cat likes the dog.", "Like(cat, dog)");
        check("Bob does not chase the mouse.", "~Chase(bob, mouse)");
        check(
            "If someone is red and young then they are kind.",
            "forall x. ((Red(x) & Young(x)) -> Kind(x))",
        );
        check("If something is big then it is not round.", "forall x. (Big(x) -> ~Round(x))");
        check("If Anne is red then Bob is kind.", "Red(anne) -> Kind(bob)");
        check("If something likes the dog then it is big.", "forall x. (Like(x, dog) -> Big(x))");
        check("Anne is red and young.", "Red(anne) & Young(anne)");
        check("All red things are kind.", "forall x. (Red(x) -> Kind(x))");
        check("All cats are animals.", "forall x. (Cat(x) -> Animal(x))");
        check("No cat is a dog.", "forall x. (Cat(x) -> ~Dog(x))");
        check("Wumpuses are feisty.", "forall x. (Wumpus(x) -> Feisty(x))");
        check("Each yumpus is not small.", "forall x. (Yumpus(x) -> ~Small(x))");
    }

    #[test]
    fn out_of_shape_sentences() {
        for s in [
            "If it rains, the ground is wet.",
            "The weather felt oddly nostalgic.",
            "Either the cat is big or it is small.",
            "",
        ] {
            assert_eq!(template_translate(s), None, "{s}");
        }
    }

    #[test]
    fn morphology() {
        assert_eq!(singularize("cats"), "cat");
        assert_eq!(singularize("butterflies"), "butterfly");
        assert_eq!(singularize("wumpuses"), "wumpus");
        assert_eq!(singularize("boxes"), "box");
        assert_eq!(singularize("nervous"), "nervous");
        assert_eq!(singularize("kind"), "kind");
        assert_eq!(deinflect("chases"), "chase");
        assert_eq!(deinflect("watches"), "watch");
        assert_eq!(inflect("watch"), "watches");
        assert_eq!(inflect("like"), "likes");
    }
}
