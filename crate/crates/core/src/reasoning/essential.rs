use super::{ProofTrace, Verdict};

/// Marks the steps the verdict depends on, walking `depends_on` back from
/// the verdict-producing steps. Unknown traces get no essential steps.
pub fn mark_essential(mut trace: ProofTrace) -> ProofTrace {
    let mut marks = vec![false; trace.steps.len()];
    if trace.verdict != Verdict::Unknown {
        let mut pending = trace.verdict_support.clone();
        while let Some(i) = pending.pop() {
            if i >= marks.len() || marks[i] {
                continue;
            }
            marks[i] = true;
            pending.extend(trace.steps[i].depends_on.iter().copied());
        }
    }
    trace.essential_marks = marks;
    trace
}
