mod common;

use std::collections::HashSet;

use common::{closure, closure_verdict, random_problem};
use hblr::fol::{Formula, Literal};
use hblr::reasoning::{conclusion_goals, prove, verify_step, ProofTrace, Strategy, Verdict};
use hblr::translation::HybridContext;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn problem(seed: u64) -> (Vec<Formula>, Formula, HybridContext) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (premises, conclusion) = random_problem(&mut rng, 12, 6, 3);
    let ctx = HybridContext::symbolic(&premises, conclusion.clone()).unwrap();
    (premises, conclusion, ctx)
}

/// Verdicts must be backed by the closure; Unknown is only allowed when the
/// closure is undecided or the budget ran out.
fn check_sound(t: &ProofTrace, goals: &[Literal], known: &HashSet<Literal>, decided: bool) -> Result<(), TestCaseError> {
    prop_assert!(t.steps_used <= t.budget);
    match t.verdict {
        Verdict::True => prop_assert!(goals.iter().all(|g| known.contains(g))),
        Verdict::False => prop_assert!(goals.iter().any(|g| known.contains(&g.complement()))),
        Verdict::Unknown => prop_assert!(!decided || t.steps_used == t.budget, "gave up early at {}", t.steps_used),
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn backward_matches_closure_with_room(seed in any::<u64>()) {
        let (premises, conclusion, ctx) = problem(seed);
        let t = prove(&ctx, Strategy::Backward, 5000, None).unwrap();
        let expected = closure_verdict(&premises, &conclusion);
        let known = closure(&premises, &[&conclusion]);
        let goals = conclusion_goals(&ctx).unwrap();
        check_sound(&t, &goals, &known, expected != Verdict::Unknown)?;
        if expected == Verdict::Unknown || t.verdict != Verdict::True {
            prop_assert_eq!(t.verdict, expected);
        }
    }

    #[test]
    fn forward_matches_closure_with_room(seed in any::<u64>()) {
        let (premises, conclusion, ctx) = problem(seed);
        let t = prove(&ctx, Strategy::Forward, 5000, None).unwrap();
        let expected = closure_verdict(&premises, &conclusion);
        let known = closure(&premises, &[&conclusion]);
        let goals = conclusion_goals(&ctx).unwrap();
        check_sound(&t, &goals, &known, expected != Verdict::Unknown)?;
        prop_assert_eq!(t.verdict == Verdict::Unknown, expected == Verdict::Unknown);
    }

    #[test]
    fn tight_budgets_stay_sound(seed in any::<u64>(), k in 1usize..12) {
        let (premises, conclusion, ctx) = problem(seed);
        let expected = closure_verdict(&premises, &conclusion);
        let known = closure(&premises, &[&conclusion]);
        let goals = conclusion_goals(&ctx).unwrap();
        for strategy in [Strategy::Backward, Strategy::Forward] {
            let t = prove(&ctx, strategy, k, None).unwrap();
            check_sound(&t, &goals, &known, expected != Verdict::Unknown)?;
        }
    }

    #[test]
    fn recorded_steps_reverify(seed in any::<u64>()) {
        let (_, _, ctx) = problem(seed);
        for strategy in [Strategy::Backward, Strategy::Forward] {
            let t = prove(&ctx, strategy, 200, None).unwrap();
            prop_assert_eq!(t.essential_marks.len(), t.steps.len());
            for (i, s) in t.steps.iter().enumerate() {
                prop_assert!(s.verified);
                prop_assert!(verify_step(s, &ctx, None), "{:?} step {} fails re-verification", strategy, i);
                prop_assert!(s.depends_on.iter().all(|d| *d < i));
            }
            let r = t.essential_ratio();
            prop_assert!((0.0..=1.0).contains(&r));
        }
    }
}
