use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::oracle::{
    load_prompts, Backend, HttpBackend, OracleClient, RateLimiter, ResponseCache, StubBackend, API_KEY_ENV,
};
use crate::par::{self, Execution};
use crate::reasoning::{prove, ProofTrace, Strategy, Verdict};
use crate::translation::{
    build_hybrid_context, Backends, HybridContext, Mode, PatternInventory, SentenceSpan, Translator, Verifier,
};

use super::{BackendKind, HarnessError, ProblemInstance, RunConfig, TranslatorKind};

/// One evaluated instance. Column order of the CSV export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub id: String,
    pub depth: Option<usize>,
    pub gold: String,
    /// Empty when the run abstained or failed.
    pub prediction: Option<String>,
    pub correct: bool,
    pub steps_used: usize,
    pub essential_ratio: f64,
    pub retention_ratio: f64,
    /// Whether the prediction rests on a proof (not Unknown, not abstained).
    pub decided: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthCell {
    pub correct: usize,
    pub total: usize,
}

impl DepthCell {
    pub fn accuracy(&self) -> f64 {
        self.correct as f64 / self.total as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub instances: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub mean_retention: f64,
    pub mean_essential: f64,
    pub per_depth: BTreeMap<usize, DepthCell>,
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

impl Aggregates {
    /// Retention is averaged over instances that produced a context; the
    /// essential ratio over decided ones unless `include_unknown`.
    pub fn from_records(records: &[InstanceRecord], include_unknown: bool) -> Self {
        let correct = records.iter().filter(|r| r.correct).count();
        let mut per_depth: BTreeMap<usize, DepthCell> = BTreeMap::new();
        for r in records {
            if let Some(d) = r.depth {
                let cell = per_depth.entry(d).or_insert(DepthCell { correct: 0, total: 0 });
                cell.total += 1;
                cell.correct += r.correct as usize;
            }
        }
        let ok = || records.iter().filter(|r| r.error.is_none());
        Aggregates {
            instances: records.len(),
            correct,
            accuracy: if records.is_empty() { 0.0 } else { correct as f64 / records.len() as f64 },
            mean_retention: mean(ok().map(|r| r.retention_ratio)),
            mean_essential: mean(
                ok().filter(|r| r.decided || include_unknown)
                    .map(|r| r.essential_ratio),
            ),
            per_depth,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub label: String,
    pub records: Vec<InstanceRecord>,
    pub aggregates: Aggregates,
    /// Proof traces per instance, one per proved hypothesis.
    pub traces: Vec<Vec<ProofTrace>>,
}

/// Backends and settings for a run, built once and shared by all workers.
pub struct Pipeline {
    pub config: RunConfig,
    backends: Backends,
    oracle: Option<Arc<OracleClient>>,
}

fn unavailable(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::BackendUnavailable(e.to_string())
}

impl Pipeline {
    pub fn from_config(config: &RunConfig) -> Result<Self, HarnessError> {
        config.validate()?;
        let backend: Option<Arc<dyn Backend>> = match config.backend {
            BackendKind::None => None,
            BackendKind::Stub => Some(Arc::new(match &config.stub_script {
                Some(path) => StubBackend::from_file(path).map_err(unavailable)?,
                None => StubBackend::new(),
            })),
            BackendKind::Http => {
                if std::env::var(API_KEY_ENV).map_or(true, |k| k.is_empty()) {
                    return Err(unavailable(format!("{API_KEY_ENV} is not set")));
                }
                Some(Arc::new(
                    HttpBackend::from_env(&config.api_base, &config.model).with_trace(config.trace_oracle),
                ))
            }
        };
        let oracle = match backend {
            None => None,
            Some(backend) => {
                let mut client = OracleClient::new(backend);
                if let Some(dir) = &config.prompts {
                    client = client.with_prompts(load_prompts(dir).map_err(unavailable)?);
                }
                if let Some(v) = &config.prompt_version {
                    client = client.with_prompt_version(v.clone());
                }
                if let Some(path) = &config.cache {
                    client = client.with_cache(ResponseCache::open(path).map_err(unavailable)?);
                }
                if let Some(rps) = config.requests_per_second {
                    client = client.with_limiter(Arc::new(RateLimiter::new(rps)));
                }
                Some(Arc::new(client))
            }
        };
        Self::with_oracle(config, oracle)
    }

    /// Uses `oracle` for every natural-language call instead of building one.
    pub fn with_oracle(config: &RunConfig, oracle: Option<Arc<OracleClient>>) -> Result<Self, HarnessError> {
        config.validate()?;
        let inventory = match &config.patterns {
            Some(path) => PatternInventory::load(path).map_err(|e| HarnessError::Config(e.to_string()))?,
            None => PatternInventory::builtin(),
        };
        let (translator, verifier) = match (config.translator, &oracle) {
            (TranslatorKind::Template, _) => (Translator::Template, Verifier::Offline),
            (TranslatorKind::Oracle, Some(o)) => (Translator::Oracle(o.clone()), Verifier::Oracle(o.clone())),
            (TranslatorKind::Oracle, None) => return Err(unavailable("translator = oracle without a backend")),
        };
        Ok(Pipeline {
            config: config.clone(),
            backends: Backends {
                inventory,
                translator,
                verifier,
            },
            oracle,
        })
    }

    pub fn oracle(&self) -> Option<&OracleClient> {
        self.oracle.as_deref()
    }

    pub fn context(&self, inst: &ProblemInstance, conclusion: &str) -> Result<HybridContext, String> {
        let premises: Vec<SentenceSpan> = inst
            .premises
            .iter()
            .enumerate()
            .map(|(i, p)| SentenceSpan::premise(i, p.as_str()))
            .collect();
        build_hybrid_context(&premises, &SentenceSpan::conclusion(conclusion), self.config.mode, &self.backends)
            .map_err(|e| e.to_string())
    }

    fn attempt(&self, inst: &ProblemInstance, conclusion: &str) -> Result<(HybridContext, ProofTrace), String> {
        let ctx = self.context(inst, conclusion)?;
        let trace = prove(&ctx, self.config.strategy, self.config.budget, self.oracle()).map_err(|e| e.to_string())?;
        Ok((ctx, trace))
    }

    /// Proves the conclusion, or every option, and scores the prediction.
    /// Options: exactly one True wins, anything else abstains.
    pub fn evaluate(&self, inst: &ProblemInstance) -> (InstanceRecord, Vec<ProofTrace>) {
        let mut record = InstanceRecord {
            id: inst.id.clone(),
            depth: inst.depth,
            gold: inst.gold.clone(),
            prediction: None,
            correct: false,
            steps_used: 0,
            essential_ratio: 0.0,
            retention_ratio: 0.0,
            decided: false,
            error: None,
        };
        let hypotheses: Vec<(Option<&str>, &str)> = match &inst.options {
            Some(options) => options.iter().map(|o| (Some(o.label.as_str()), o.text.as_str())).collect(),
            None => vec![(None, inst.conclusion.as_str())],
        };
        let mut traces = Vec::with_capacity(hypotheses.len());
        let mut winners = Vec::new();
        for (label, text) in &hypotheses {
            match self.attempt(inst, text) {
                Ok((ctx, trace)) => {
                    record.retention_ratio = ctx.retention_ratio;
                    record.steps_used += trace.steps_used;
                    if label.is_none() || trace.verdict == Verdict::True {
                        winners.push((label.unwrap_or(trace.verdict.as_str()), traces.len()));
                    }
                    traces.push(trace);
                }
                Err(e) => {
                    record.error = Some(e);
                    return (record, traces);
                }
            }
        }
        if let [(label, i)] = winners[..] {
            record.prediction = Some(label.to_string());
            record.essential_ratio = traces[i].essential_ratio();
            record.decided = traces[i].verdict != Verdict::Unknown;
            record.correct = label == inst.gold;
        }
        (record, traces)
    }

    pub fn run(&self, instances: &[ProblemInstance], exec: Execution) -> Result<RunReport, HarnessError> {
        if instances.is_empty() {
            return Err(HarnessError::EmptyRun);
        }
        let exec = if self.config.parallel { exec } else { Execution::Sequential };
        let (records, traces): (Vec<_>, Vec<_>) = par::map(instances, exec, |inst| self.evaluate(inst)).into_iter().unzip();
        Ok(RunReport {
            label: self.config.label(),
            aggregates: Aggregates::from_records(&records, self.config.include_unknown_ratio),
            records,
            traces,
        })
    }
}

pub fn run_eval(instances: &[ProblemInstance], config: &RunConfig) -> Result<RunReport, HarnessError> {
    if instances.is_empty() {
        return Err(HarnessError::EmptyRun);
    }
    Pipeline::from_config(config)?.run(instances, Execution::default())
}

pub fn run_eval_with(instances: &[ProblemInstance], pipeline: &Pipeline, exec: Execution) -> Result<RunReport, HarnessError> {
    pipeline.run(instances, exec)
}

/// A variation on the base configuration along one or more axes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Override {
    pub mode: Option<Mode>,
    pub strategy: Option<Strategy>,
    pub budget: Option<usize>,
}

impl Override {
    pub fn mode(mode: Mode) -> Self {
        Override {
            mode: Some(mode),
            ..Self::default()
        }
    }

    pub fn strategy(strategy: Strategy) -> Self {
        Override {
            strategy: Some(strategy),
            ..Self::default()
        }
    }

    pub fn apply(&self, base: &RunConfig) -> RunConfig {
        let mut cfg = base.clone();
        if let Some(m) = self.mode {
            cfg.mode = m;
        }
        if let Some(s) = self.strategy {
            cfg.strategy = s;
        }
        if let Some(b) = self.budget {
            cfg.budget = b;
        }
        cfg
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub rows: Vec<RunReport>,
}

impl Comparison {
    /// Accuracy of each row minus that of the first.
    pub fn accuracy_deltas(&self) -> Vec<f64> {
        let base = self.rows.first().map_or(0.0, |r| r.aggregates.accuracy);
        self.rows.iter().map(|r| r.aggregates.accuracy - base).collect()
    }
}

/// Runs every override of `base` on the same instances, each with freshly
/// built backends.
pub fn compare_modes(instances: &[ProblemInstance], base: &RunConfig, axes: &[Override]) -> Result<Comparison, HarnessError> {
    if axes.len() < 2 {
        return Err(HarnessError::Config(format!(
            "a comparison needs at least two configurations, got {}",
            axes.len()
        )));
    }
    let rows = axes
        .iter()
        .map(|o| run_eval(instances, &o.apply(base)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Comparison { rows })
}
