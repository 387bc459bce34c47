use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::reasoning::{Strategy, DEFAULT_BUDGET};
use crate::translation::Mode;

use super::HarnessError;

/// Where candidate formulas come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TranslatorKind {
    /// Template grammar plus the offline verifier.
    Template,
    /// The configured natural-language backend for both.
    Oracle,
}

/// The natural-language backend behind oracle calls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendKind {
    None,
    Stub,
    Http,
}

impl FromStr for TranslatorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "template" => Ok(TranslatorKind::Template),
            "oracle" => Ok(TranslatorKind::Oracle),
            _ => Err(format!("unknown translator `{s}` (template or oracle)")),
        }
    }
}

impl FromStr for BackendKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(BackendKind::None),
            "stub" => Ok(BackendKind::Stub),
            "http" | "oracle" => Ok(BackendKind::Http),
            _ => Err(format!("unknown backend `{s}` (none, stub or http)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub strategy: Strategy,
    pub budget: usize,
    pub translator: TranslatorKind,
    pub backend: BackendKind,
    pub stub_script: Option<PathBuf>,
    pub seed: u64,
    /// Count Unknown verdicts (ratio 0.0) in the mean essential ratio.
    pub include_unknown_ratio: bool,
    pub cache: Option<PathBuf>,
    pub requests_per_second: Option<f64>,
    pub prompts: Option<PathBuf>,
    pub prompt_version: Option<String>,
    pub patterns: Option<PathBuf>,
    pub api_base: String,
    pub model: String,
    pub trace_oracle: bool,
    /// Evaluate instances on the worker pool.
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Selective,
            strategy: Strategy::Backward,
            budget: DEFAULT_BUDGET,
            translator: TranslatorKind::Template,
            backend: BackendKind::Stub,
            stub_script: None,
            seed: 0,
            include_unknown_ratio: false,
            cache: None,
            requests_per_second: None,
            prompts: None,
            prompt_version: None,
            patterns: None,
            api_base: "https://api.openai.com/v1".into(),
            model: "gpt-4o".into(),
            trace_oracle: false,
            parallel: true,
        }
    }
}

fn value<T: FromStr>(key: &str, raw: &str) -> Result<T, HarnessError>
where
    T::Err: fmt::Display,
{
    raw.parse()
        .map_err(|e| HarnessError::Config(format!("`{key}`: {e}")))
}

impl RunConfig {
    /// Reads flat `key = value` lines. `#` starts a comment; relative paths
    /// resolve against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self, HarnessError> {
        let mut cfg = RunConfig::default();
        let path = |raw: &str| match base {
            Some(b) if Path::new(raw).is_relative() => b.join(raw),
            _ => PathBuf::from(raw),
        };
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, raw)) = line.split_once('=') else {
                return Err(HarnessError::Config(format!("line {}: expected `key = value`", n + 1)));
            };
            let (key, raw) = (key.trim(), raw.trim());
            match key {
                "mode" => cfg.mode = value(key, raw)?,
                "strategy" => cfg.strategy = value(key, raw)?,
                "budget" => cfg.budget = value(key, raw)?,
                "translator" => cfg.translator = value(key, raw)?,
                "backend" => cfg.backend = value(key, raw)?,
                "stub_script" => cfg.stub_script = Some(path(raw)),
                "seed" => cfg.seed = value(key, raw)?,
                "include_unknown_ratio" => cfg.include_unknown_ratio = value(key, raw)?,
                "cache" => cfg.cache = Some(path(raw)),
                "requests_per_second" => cfg.requests_per_second = Some(value(key, raw)?),
                "prompts" => cfg.prompts = Some(path(raw)),
                "prompt_version" => cfg.prompt_version = Some(raw.to_string()),
                "patterns" => cfg.patterns = Some(path(raw)),
                "api_base" => cfg.api_base = raw.to_string(),
                "model" => cfg.model = raw.to_string(),
                "parallel" => cfg.parallel = value(key, raw)?,
                _ => return Err(HarnessError::Config(format!("line {}: unknown key `{key}`", n + 1))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.parent())
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.budget == 0 {
            return Err(HarnessError::Config("`budget` must be at least 1".into()));
        }
        if self.requests_per_second.is_some_and(|r| r.is_nan() || r <= 0.0) {
            return Err(HarnessError::Config("`requests_per_second` must be positive".into()));
        }
        if self.translator == TranslatorKind::Oracle && self.backend == BackendKind::None {
            return Err(HarnessError::Config("translator = oracle needs a backend".into()));
        }
        Ok(())
    }

    /// Short row label, e.g. `selective/backward`.
    pub fn label(&self) -> String {
        format!("{}/{}", self.mode, self.strategy)
    }
}
