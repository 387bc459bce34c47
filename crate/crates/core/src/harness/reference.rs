//! Published numbers for the five benchmarks, measured with hosted LLMs.
//! Reports print them beside local results under [`REFERENCE_LABEL`]; they
//! are never recomputed here.

pub const REFERENCE_LABEL: &str = "paper (LLM), not reproduced";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub dataset: &'static str,
    /// Accuracy of backward reasoning, percent.
    pub backward_accuracy: f64,
    /// Accuracy of the forward variant, percent.
    pub forward_accuracy: f64,
    /// Share of effective reasoning steps, percent.
    pub essential_ratio: f64,
    /// Share of input left in natural language, percent, where published.
    pub retention: Option<f64>,
}

const ROWS: [ReferenceRow; 5] = [
    ReferenceRow {
        dataset: "ProntoQA",
        backward_accuracy: 99.36,
        forward_accuracy: 95.41,
        essential_ratio: 95.58,
        retention: None,
    },
    ReferenceRow {
        dataset: "ProofWriter",
        backward_accuracy: 89.41,
        forward_accuracy: 81.24,
        essential_ratio: 81.60,
        retention: None,
    },
    ReferenceRow {
        dataset: "FOLIO",
        backward_accuracy: 84.22,
        forward_accuracy: 77.58,
        essential_ratio: 73.29,
        retention: Some(21.17),
    },
    ReferenceRow {
        dataset: "LogicalDeduction",
        backward_accuracy: 97.83,
        forward_accuracy: 93.34,
        essential_ratio: 87.46,
        retention: Some(2.65),
    },
    ReferenceRow {
        dataset: "AR-LSAT",
        backward_accuracy: 44.07,
        forward_accuracy: 38.86,
        essential_ratio: 66.08,
        retention: Some(37.03),
    },
];

/// Mean natural-language retention over the five benchmarks, percent.
pub const MEAN_RETENTION: f64 = 15.74;

fn squash(s: &str) -> String {
    s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase()
}

/// All rows, or the one whose name occurs in `dataset` (a file stem, say).
pub fn reference_rows(dataset: Option<&str>) -> Vec<ReferenceRow> {
    match dataset {
        None => ROWS.to_vec(),
        Some(name) => {
            let name = squash(name);
            ROWS.iter()
                .filter(|r| {
                    let key = squash(r.dataset);
                    name.contains(&key) || (key == "logicaldeduction" && name.contains("deduction"))
                })
                .copied()
                .collect()
        }
    }
}
