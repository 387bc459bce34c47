//! Dataset ingestion, synthetic problems, evaluation runs, mode/strategy
//! comparisons and reports.

mod config;
mod dataset;
mod eval;
mod reference;
mod report;
mod synth;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use config::{BackendKind, RunConfig, TranslatorKind};
pub use dataset::{load_dataset, parse_dataset, write_dataset};
pub use eval::{compare_modes, run_eval, run_eval_with, Aggregates, Comparison, DepthCell, InstanceRecord, Override, Pipeline, RunReport};
pub use reference::{reference_rows, ReferenceRow, REFERENCE_LABEL};
pub use report::{emit_comparison, emit_report, read_records, render_comparison, render_report, ReportFormat};
pub use synth::{build_instance, generate_synthetic, MAX_SYNTH_DEPTH};

pub const VERDICT_LABELS: [&str; 3] = ["True", "False", "Unknown"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Choice {
    pub label: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub id: String,
    pub premises: Vec<String>,
    pub conclusion: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<Vec<Choice>>,
    pub gold: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

impl ProblemInstance {
    /// Labels a prediction may take for this instance.
    pub fn label_space(&self) -> Vec<&str> {
        match &self.options {
            Some(options) => options.iter().map(|o| o.label.as_str()).collect(),
            None => VERDICT_LABELS.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("line {line}: bad or missing `{field}`")]
    Schema { line: usize, field: String },
    #[error("i/o: {0}")]
    Io(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no instances to evaluate")]
    EmptyRun,
    #[error("report has no rows")]
    EmptyReport,
    #[error("config: {0}")]
    Config(String),
    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}
