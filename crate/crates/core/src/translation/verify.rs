use std::sync::Arc;

use crate::fol::{parse_formula, print_formula, Formula};
use crate::oracle::{Answer, OracleClient, OracleError, OracleRequest, VerifyLabel};

use super::{template_translate, tokenize, verbalize, SentenceSpan, TranslationError, VerifierVerdict};

#[derive(Clone)]
pub enum Translator {
    /// Deterministic sentence-shape templates.
    Template,
    Oracle(Arc<OracleClient>),
}

#[derive(Clone)]
pub enum Verifier {
    /// Verbalize the formula and compare content tokens with the sentence.
    Offline,
    Oracle(Arc<OracleClient>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Candidate {
    Formula(Formula),
    NoCandidate(String),
}

pub fn translate_candidate(s: &SentenceSpan, translator: &Translator) -> Result<Candidate, TranslationError> {
    match translator {
        Translator::Template => Ok(match template_translate(&s.text) {
            Some(f) => Candidate::Formula(f),
            None => Candidate::NoCandidate("no template matches".into()),
        }),
        Translator::Oracle(client) => match client.query(&OracleRequest::translate(s.text.trim())) {
            Ok(resp) => Ok(match resp.answer {
                Answer::Formula(text) => match parse_formula(&text) {
                    Ok(f) => Candidate::Formula(f),
                    Err(e) => Candidate::NoCandidate(format!("unparsable candidate: {e}")),
                },
                _ => Candidate::NoCandidate("backend declined".into()),
            }),
            Err(OracleError::Malformed { raw, .. }) => Ok(Candidate::NoCandidate(format!("malformed reply {raw:?}"))),
            Err(e) => Err(TranslationError::Backend(e)),
        },
    }
}

const STOPWORDS: [&str; 33] = [
    "a", "an", "the", "is", "are", "was", "were", "be", "been", "it", "its", "they", "them", "their", "he", "she",
    "his", "her", "that", "this", "those", "these", "then", "if", "for", "of", "does", "do", "did", "case", "there",
    "when", "whenever",
];

const QUANTIFIERS: [&str; 18] = [
    "every", "each", "all", "any", "some", "something", "someone", "somebody", "everything", "everyone",
    "everybody", "anything", "anyone", "thing", "things", "people", "ones", "whoever",
];

const NEGATIVE_QUANTIFIERS: [&str; 5] = ["no", "none", "nobody", "nothing", "noone"];

/// Content tokens: quantifier words collapse to `q`, negative quantifiers
/// to `q not`, "if and only if" to `iff`, stopwords drop out.
pub(crate) fn content_tokens(text: &str) -> Vec<String> {
    let raw = tokenize(text);
    let mut out = Vec::with_capacity(raw.len());
    let mut i = 0;
    while i < raw.len() {
        let t = raw[i].as_str();
        if raw.get(i..i + 4).map(|w| w.join(" ")) == Some("if and only if".into()) {
            out.push("iff".to_string());
            i += 4;
            continue;
        }
        i += 1;
        if NEGATIVE_QUANTIFIERS.contains(&t) {
            out.push("q".into());
            out.push("not".into());
        } else if QUANTIFIERS.contains(&t) {
            out.push("q".into());
        } else if t == "never" {
            out.push("not".into());
        } else if !STOPWORDS.contains(&t) {
            out.push(t.to_string());
        }
    }
    out
}

fn first_occurrence_order(tokens: &[String]) -> Vec<&str> {
    let mut seen: Vec<&str> = Vec::new();
    for t in tokens {
        if t != "q" && t != "not" && !seen.contains(&t.as_str()) {
            seen.push(t.as_str());
        }
    }
    seen
}

fn token_set(v: &[String]) -> Vec<&str> {
    let mut s: Vec<&str> = v.iter().map(String::as_str).collect();
    s.sort_unstable();
    s.dedup();
    s
}

/// Deterministic verifier: the sentence and the verbalized formula must have
/// the same content-token set, the same number of negations, and the same
/// order of first mention (which separates subject from object).
pub fn offline_verify(sentence: &str, phi: &Formula) -> VerifierVerdict {
    let rendered = verbalize(phi);
    let a = content_tokens(sentence);
    let b = content_tokens(&rendered);
    let nots = |v: &[String]| v.iter().filter(|t| *t == "not").count();
    let label = if token_set(&a) != token_set(&b) {
        Some("content tokens differ")
    } else if nots(&a) != nots(&b) {
        Some("negation count differs")
    } else if first_occurrence_order(&a) != first_occurrence_order(&b) {
        Some("argument order differs")
    } else {
        None
    };
    match label {
        None => VerifierVerdict::from_label(VerifyLabel::Verified, format!("round trip: {rendered:?}")),
        Some(why) => VerifierVerdict::from_label(VerifyLabel::Rejected, format!("{why}: {rendered:?}")),
    }
}

/// Strict acceptance: anything short of `verified` rejects, including
/// transport failures and malformed oracle replies.
pub fn semantic_verify(s: &SentenceSpan, phi: &Formula, verifier: &Verifier) -> VerifierVerdict {
    if !phi.is_closed() {
        return VerifierVerdict::from_label(VerifyLabel::Rejected, "formula has free variables");
    }
    match verifier {
        Verifier::Offline => offline_verify(&s.text, phi),
        Verifier::Oracle(client) => {
            let req = OracleRequest::verify_translation(s.text.trim(), &print_formula(phi));
            match client.query(&req) {
                Ok(resp) => match resp.answer {
                    Answer::Label(label) => VerifierVerdict::from_label(label, resp.raw),
                    _ => VerifierVerdict::from_label(VerifyLabel::Rejected, resp.raw),
                },
                Err(OracleError::Malformed { raw, .. }) => {
                    VerifierVerdict::from_label(VerifyLabel::Rejected, format!("malformed reply {raw:?}"))
                }
                Err(e) => VerifierVerdict::from_label(VerifyLabel::Uncertain, e.to_string()),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{Backend, StubBackend, Task};

    fn offline(s: &str, f: &str) -> VerifierVerdict {
        semantic_verify(&SentenceSpan::premise(0, s), &parse_formula(f).unwrap(), &Verifier::Offline)
    }

    #[test]
    fn offline_accepts_faithful_translations() {
        for (s, f) in [
            ("Every cat is an animal.", "forall x.(Cat(x)->Animal(x))"),
            ("Tom is a cat.", "Cat(tom)"),
            ("If something is a wumpus then it is feisty.", "forall x.(Wumpus(x) -> Feisty(x))"),
            ("If someone is red and young then they are kind.", "forall x.((Red(x) & Young(x)) -> Kind(x))"),
            ("No cat is a dog.", "forall x. (Cat(x) -> ~Dog(x))"),
            ("Bob does not like the dog.", "~Like(bob, dog)"),
            ("The cat chases the mouse.", "Chase(cat, mouse)"),
            ("All red things are kind.", "forall x. (Red(x) -> Kind(x))"),
        ] {
            let v = offline(s, f);
            assert!(v.accepted, "{s}: {}", v.evidence);
            assert_eq!(v.confidence, VerifyLabel::Verified);
        }
    }

    #[test]
    fn offline_rejects_lossy_translations() {
        for (s, f) in [
            ("Every cat is an animal.", "forall x.(Animal(x)->Cat(x))"),
            ("Tom is a cat.", "~Cat(tom)"),
            ("If someone is red and young then they are kind.", "forall x.(Red(x) -> Kind(x))"),
            ("The cat chases the mouse.", "Chase(mouse, cat)"),
            ("Anne is red or young.", "(Red(anne) & Young(anne))"),
        ] {
            let v = offline(s, f);
            assert!(!v.accepted, "{s}");
            assert_eq!(v.confidence, VerifyLabel::Rejected);
        }
    }

    struct Down;

    impl Backend for Down {
        fn name(&self) -> &str {
            "down"
        }

        fn complete(&self, _: &OracleRequest, _: &str) -> Result<String, OracleError> {
            Err(OracleError::Transport {
                message: "connection refused".into(),
                transient: false,
            })
        }
    }

    #[test]
    fn oracle_outage_is_uncertain_and_rejected() {
        let verifier = Verifier::Oracle(Arc::new(OracleClient::new(Arc::new(Down))));
        let v = semantic_verify(
            &SentenceSpan::premise(0, "Every cat is an animal."),
            &parse_formula("forall x.(Cat(x)->Animal(x))").unwrap(),
            &verifier,
        );
        assert!(!v.accepted);
        assert_eq!(v.confidence, VerifyLabel::Uncertain);
    }

    #[test]
    fn oracle_labels_map_strictly() {
        let stub = StubBackend::new()
            .with(Task::VerifyTranslation, "A.", &["LABEL: verified"])
            .with(Task::VerifyTranslation, "B.", &["LABEL: uncertain"])
            .with(Task::VerifyTranslation, "C.", &["Sure, looks right"]);
        let verifier = Verifier::Oracle(Arc::new(OracleClient::new(Arc::new(stub))));
        let phi = parse_formula("Cat(tom)").unwrap();
        let run = |s: &str| semantic_verify(&SentenceSpan::premise(0, s), &phi, &verifier);
        assert!(run("A.").accepted);
        assert_eq!(run("B.").confidence, VerifyLabel::Uncertain);
        assert!(!run("B.").accepted);
        assert_eq!(run("C.").confidence, VerifyLabel::Rejected);
    }

    #[test]
    fn oracle_translation_outcomes() {
        let stub = StubBackend::new()
            .with(Task::Translate, "Tom is a cat.", &["FORMULA: Cat(tom)"])
            .with(Task::Translate, "Hmm.", &["NONE"])
            .with(Task::Translate, "Bad.", &["FORMULA: Cat(("]);
        let t = Translator::Oracle(Arc::new(OracleClient::new(Arc::new(stub))));
        let run = |s: &str| translate_candidate(&SentenceSpan::premise(0, s), &t).unwrap();
        assert_eq!(run("Tom is a cat."), Candidate::Formula(parse_formula("Cat(tom)").unwrap()));
        assert!(matches!(run("Hmm."), Candidate::NoCandidate(_)));
        assert!(matches!(run("Bad."), Candidate::NoCandidate(_)));
        let down = Translator::Oracle(Arc::new(OracleClient::new(Arc::new(Down))));
        assert!(matches!(
            translate_candidate(&SentenceSpan::premise(0, "x"), &down),
            Err(TranslationError::Backend(_))
        ));
    }

    #[test]
    fn normalization() {
        assert_eq!(content_tokens("Nobody is never late."), vec!["q", "not", "not", "late"]);
        assert_eq!(content_tokens("A if and only if B."), vec!["iff", "b"]);
    }
}
