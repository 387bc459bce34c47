use super::{
    semantic_verify, translate_candidate, Candidate, HybridContext, HybridStatement, Mode, PatternInventory,
    SentenceSpan, TranslationError, Translator, Verifier,
};

/// Everything the translation pipeline consults.
#[derive(Clone)]
pub struct Backends {
    pub inventory: PatternInventory,
    pub translator: Translator,
    pub verifier: Verifier,
}

impl Backends {
    /// Template translator, offline verifier, shipped pattern inventory.
    pub fn offline() -> Self {
        Backends {
            inventory: PatternInventory::builtin(),
            translator: Translator::Template,
            verifier: Verifier::Offline,
        }
    }
}

impl Default for Backends {
    fn default() -> Self {
        Self::offline()
    }
}

fn translate_one(span: &SentenceSpan, mode: Mode, backends: &Backends) -> HybridStatement {
    let text = || HybridStatement::Text(span.clone());
    match mode {
        Mode::AllNl => text(),
        Mode::AllFol => match translate_candidate(span, &backends.translator) {
            Ok(Candidate::Formula(formula)) => HybridStatement::Logic {
                formula,
                origin: span.clone(),
            },
            Ok(Candidate::NoCandidate(_)) | Err(_) => text(),
        },
        Mode::Selective => {
            if !backends.inventory.filter(span).accepted {
                return text();
            }
            let Ok(Candidate::Formula(formula)) = translate_candidate(span, &backends.translator) else {
                return text();
            };
            if semantic_verify(span, &formula, &backends.verifier).accepted {
                HybridStatement::Logic {
                    formula,
                    origin: span.clone(),
                }
            } else {
                text()
            }
        }
    }
}

/// Translates premises and conclusion under `mode`. No sentence is ever
/// dropped: anything not accepted stays as text.
pub fn build_hybrid_context(
    premises: &[SentenceSpan],
    conclusion: &SentenceSpan,
    mode: Mode,
    backends: &Backends,
) -> Result<HybridContext, TranslationError> {
    if premises.is_empty() {
        return Err(TranslationError::EmptyPremises);
    }
    let translated = premises.iter().map(|p| translate_one(p, mode, backends)).collect();
    HybridContext::new(translated, translate_one(conclusion, mode, backends))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spans(texts: &[&str]) -> Vec<SentenceSpan> {
        texts.iter().enumerate().map(|(i, t)| SentenceSpan::premise(i, *t)).collect()
    }

    #[test]
    fn one_filtered_sentence_of_four() {
        let premises = spans(&[
            "Every cat is an animal.",
            "Tom is a cat.",
            "The weather felt oddly nostalgic.",
            "If something is an animal then it is alive.",
        ]);
        let ctx = build_hybrid_context(
            &premises,
            &SentenceSpan::conclusion("Tom is alive."),
            Mode::Selective,
            &Backends::offline(),
        )
        .unwrap();
        assert_eq!(ctx.retention_ratio, 0.25);
        assert!(ctx.premises[2].is_text());
        assert!(!ctx.conclusion.is_text());
    }

    #[test]
    fn modes_bracket_retention() {
        let premises = spans(&["All cats are animals.", "Tom is a cat.", "It rained a lot."]);
        let c = SentenceSpan::conclusion("Tom is an animal.");
        let b = Backends::offline();
        let r = |m| build_hybrid_context(&premises, &c, m, &b).unwrap().retention_ratio;
        assert_eq!(r(Mode::AllNl), 1.0);
        // the plural universal translates but fails the lemma-free verifier
        assert!((r(Mode::Selective) - 2.0 / 3.0).abs() < 1e-12);
        assert!((r(Mode::AllFol) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn empty_premises() {
        let err = build_hybrid_context(&[], &SentenceSpan::conclusion("x"), Mode::AllNl, &Backends::offline());
        assert_eq!(err, Err(TranslationError::EmptyPremises));
    }
}
