use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::ProofTrace;

/// One exported step. Field order is the serialized order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step_index: usize,
    pub hypothesis: String,
    pub derived: String,
    pub justification_kind: String,
    pub verified: bool,
    pub essential: bool,
}

/// Writes one JSON object per step.
pub fn export_trace(trace: &ProofTrace, out: &mut impl Write) -> io::Result<()> {
    for (i, step) in trace.steps.iter().enumerate() {
        let record = TraceRecord {
            step_index: i,
            hypothesis: step.from_hypothesis.statement.to_string(),
            derived: step.derived.to_string(),
            justification_kind: step.justification.kind().to_string(),
            verified: step.verified,
            essential: trace.essential_marks.get(i).copied().unwrap_or(false),
        };
        serde_json::to_writer(&mut *out, &record)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
