//! Seeded Horn-chain problems phrased in the template grammar: one goal
//! chain plus goal-disjoint distractor chains.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{HarnessError, ProblemInstance, VERDICT_LABELS};

pub const MAX_SYNTH_DEPTH: usize = 8;
const MAX_DISTRACTORS: usize = 40;

const ONSETS: [&str; 16] = ["b", "d", "f", "g", "j", "k", "l", "n", "r", "s", "t", "v", "w", "y", "z", "sh"];
const VOWELS: [&str; 4] = ["a", "i", "o", "u"];
const CODAS: [&str; 3] = ["mpus", "rpus", "lpus"];
const NAMES: [&str; 8] = ["Alex", "Fae", "Max", "Polly", "Rex", "Sally", "Stella", "Wren"];

fn vocabulary() -> Vec<String> {
    let mut words = Vec::with_capacity(ONSETS.len() * VOWELS.len() * CODAS.len());
    for o in ONSETS {
        for v in VOWELS {
            for c in CODAS {
                words.push(format!("{o}{v}{c}"));
            }
        }
    }
    words
}

fn fact(entity: &str, class: &str, positive: bool) -> String {
    if positive {
        format!("{entity} is a {class}.")
    } else {
        format!("{entity} is not a {class}.")
    }
}

fn rule(from: &str, to: &str, positive: bool) -> String {
    if positive {
        format!("Every {from} is a {to}.")
    } else {
        format!("No {from} is a {to}.")
    }
}

/// One instance with a goal chain of exactly `depth` rules and gold `gold`.
/// False comes either from a negative last link or a negated conclusion;
/// Unknown from a chain about another entity or a missing link.
pub fn build_instance(id: String, depth: usize, distractors: usize, gold: &str, rng: &mut ChaCha8Rng) -> ProblemInstance {
    let mut words = vocabulary();
    words.shuffle(rng);
    let (chain, rest) = words.split_at(depth + 1);
    let entity = *NAMES.choose(rng).unwrap();
    let other = *NAMES.iter().filter(|n| **n != entity).collect::<Vec<_>>().choose(rng).unwrap();

    let mut start_entity = entity;
    let mut start_positive = true;
    let mut last_positive = true;
    let mut conclusion_positive = true;
    let mut missing: Option<usize> = None;
    match gold {
        "False" => {
            if rng.gen_bool(0.5) {
                conclusion_positive = false;
            } else if depth == 0 {
                start_positive = false;
            } else {
                last_positive = false;
            }
        }
        "Unknown" => {
            if depth > 0 && rng.gen_bool(0.5) {
                missing = Some(rng.gen_range(0..depth));
            } else {
                start_entity = other;
            }
        }
        _ => {}
    }

    let mut premises = vec![fact(start_entity, &chain[0], start_positive)];
    for i in 0..depth {
        if missing != Some(i) {
            premises.push(rule(&chain[i], &chain[i + 1], i + 1 < depth || last_positive));
        }
    }
    let mut pool = rest.iter();
    for j in 0..distractors {
        // Two-link chains only while the instance stays within 30 premises.
        let after = 2 * (distractors - j - 1);
        let len = if premises.len() + 3 + after <= 30 { rng.gen_range(1..=2) } else { 1 };
        let preds: Vec<&String> = pool.by_ref().take(len + 1).collect();
        premises.push(fact(NAMES.choose(rng).unwrap(), preds[0], true));
        for w in preds.windows(2) {
            premises.push(rule(w[0], w[1], true));
        }
    }
    premises.shuffle(rng);
    ProblemInstance {
        id,
        premises,
        conclusion: fact(entity, &chain[depth], conclusion_positive),
        options: None,
        gold: gold.to_string(),
        depth: Some(depth),
    }
}

/// `count` instances with depths drawn from `0..=max_depth`; gold labels
/// cycle True, False, Unknown. Identical arguments give
/// identical output.
pub fn generate_synthetic(
    count: usize,
    max_depth: usize,
    distractors: usize,
    seed: u64,
) -> Result<Vec<ProblemInstance>, HarnessError> {
    if max_depth > MAX_SYNTH_DEPTH {
        return Err(HarnessError::InvalidParams(format!(
            "max_depth {max_depth} exceeds {MAX_SYNTH_DEPTH}"
        )));
    }
    if distractors > MAX_DISTRACTORS {
        return Err(HarnessError::InvalidParams(format!(
            "distractors {distractors} exceeds {MAX_DISTRACTORS}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|i| {
            let depth = rng.gen_range(0..=max_depth);
            let gold = VERDICT_LABELS[i % 3];
            build_instance(format!("synth-{seed}-{i:04}"), depth, distractors, gold, &mut rng)
        })
        .collect())
}
