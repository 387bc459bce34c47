//! The `hblr` command line.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::fol::print_formula;
use crate::harness::{
    emit_comparison, emit_report, generate_synthetic, load_dataset, write_dataset, BackendKind, Comparison,
    HarnessError, Override, Pipeline, ProblemInstance, ReportFormat, RunConfig, RunReport,
};
use crate::par::Execution;
use crate::reasoning::{export_trace, ProofTrace, Strategy};
use crate::translation::{HybridStatement, Mode};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_BACKEND: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hblr", version, about = "Backward reasoning over hybrid logic/text contexts")]
pub struct Cli {
    /// Log every backend request and response to stderr (API key redacted).
    #[arg(long, global = true)]
    pub trace_oracle: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build hybrid contexts and print them as JSON lines.
    Translate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        mode: Option<Mode>,
        #[command(flatten)]
        backend: BackendArgs,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prove every instance and print one result line each.
    Prove {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        strategy: Option<Strategy>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        mode: Option<Mode>,
        #[command(flatten)]
        backend: BackendArgs,
        /// Write each instance's trace to DIR/<id>.jsonl.
        #[arg(long)]
        trace_dir: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a dataset under one configuration.
    Eval {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also export proof traces under OUT/traces.
        #[arg(long)]
        traces: bool,
        /// Evaluate instances one after another.
        #[arg(long)]
        sequential: bool,
    },
    /// Compare configurations along modes and/or strategies.
    Ablate {
        #[arg(long)]
        dataset: PathBuf,
        /// Comma-separated: modes, strategies.
        #[arg(long, value_delimiter = ',', default_value = "modes")]
        axes: Vec<Axis>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write seeded synthetic instances as JSON lines.
    Gen {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        distractors: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Axis {
    Modes,
    Strategies,
}

#[derive(Debug, Args)]
pub struct BackendArgs {
    /// `key = value` run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// none, stub or http.
    #[arg(long)]
    backend: Option<String>,
    /// Stub script: `task<TAB>key<TAB>reply...` lines.
    #[arg(long)]
    stub_script: Option<PathBuf>,
    /// Response cache file.
    #[arg(long)]
    cache: Option<PathBuf>,
}

impl BackendArgs {
    fn config(&self, trace_oracle: bool) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(b) = &self.backend {
            cfg.backend = b.parse::<BackendKind>().map_err(CliError::Usage)?;
        }
        if let Some(p) = &self.stub_script {
            cfg.stub_script = Some(p.clone());
        }
        if let Some(p) = &self.cache {
            cfg.cache = Some(p.clone());
        }
        cfg.trace_oracle |= trace_oracle;
        Ok(cfg)
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Backend(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Backend(_) => EXIT_BACKEND,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Backend(m) => write!(f, "backend error: {m}"),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(_) => CliError::Usage(e.to_string()),
            HarnessError::BackendUnavailable(_) => CliError::Backend(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) if p != Path::new("-") => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?,
        )),
        _ => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn file_stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn safe_name(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

fn statement_json(s: &HybridStatement) -> serde_json::Value {
    json!({
        "text": s.span().text,
        "formula": s.formula().map(print_formula),
    })
}

fn write_traces(dir: &Path, instances: &[ProblemInstance], traces: &[Vec<ProofTrace>]) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    for (inst, ts) in instances.iter().zip(traces) {
        let mut out = BufWriter::new(File::create(dir.join(format!("{}.jsonl", safe_name(&inst.id))))?);
        for t in ts {
            export_trace(t, &mut out)?;
        }
        out.flush()?;
    }
    Ok(())
}

fn translate(cli_trace: bool, input: &Path, mode: Option<Mode>, backend: &BackendArgs, out: Option<&Path>) -> Result<(), CliError> {
    let mut cfg = backend.config(cli_trace)?;
    if let Some(m) = mode {
        cfg.mode = m;
    }
    let instances = load_dataset(input)?;
    let pipeline = Pipeline::from_config(&cfg)?;
    let mut w = output(out)?;
    for inst in &instances {
        let ctx = pipeline.context(inst, &inst.conclusion).map_err(CliError::Backend)?;
        let line = json!({
            "id": inst.id,
            "mode": cfg.mode.to_string(),
            "retention_ratio": ctx.retention_ratio,
            "premises": ctx.premises.iter().map(statement_json).collect::<Vec<_>>(),
            "conclusion": statement_json(&ctx.conclusion),
        });
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn prove(
    cli_trace: bool,
    input: &Path,
    strategy: Option<Strategy>,
    budget: Option<usize>,
    mode: Option<Mode>,
    backend: &BackendArgs,
    trace_dir: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let mut cfg = backend.config(cli_trace)?;
    if let Some(s) = strategy {
        cfg.strategy = s;
    }
    if let Some(b) = budget {
        cfg.budget = b;
    }
    if let Some(m) = mode {
        cfg.mode = m;
    }
    let instances = load_dataset(input)?;
    let report = Pipeline::from_config(&cfg)?.run(&instances, Execution::default())?;
    let mut w = output(out)?;
    for r in &report.records {
        writeln!(w, "{}", serde_json::to_string(r).map_err(|e| CliError::Data(e.to_string()))?)?;
    }
    w.flush()?;
    if let Some(dir) = trace_dir {
        write_traces(dir, &instances, &report.traces)?;
    }
    Ok(())
}

fn write_run(dir: &Path, report: &RunReport, dataset: &str, prefix: &str) -> Result<(), CliError> {
    emit_report(report, ReportFormat::Csv, dataset, &dir.join(format!("{prefix}records.csv")))?;
    emit_report(report, ReportFormat::Markdown, dataset, &dir.join(format!("{prefix}report.md")))?;
    Ok(())
}

fn eval(cli_trace: bool, dataset: &Path, config: &Path, out: &Path, traces: bool, sequential: bool) -> Result<(), CliError> {
    let mut cfg = RunConfig::load(config)?;
    cfg.trace_oracle |= cli_trace;
    if sequential {
        cfg.parallel = false;
    }
    let instances = load_dataset(dataset)?;
    let report = Pipeline::from_config(&cfg)?.run(&instances, Execution::default())?;
    fs::create_dir_all(out)?;
    write_run(out, &report, &file_stem(dataset), "")?;
    if traces {
        write_traces(&out.join("traces"), &instances, &report.traces)?;
    }
    let a = &report.aggregates;
    println!("{}: accuracy {:.4} ({}/{})", report.label, a.accuracy, a.correct, a.instances);
    Ok(())
}

fn ablate(cli_trace: bool, dataset: &Path, axes: &[Axis], config: Option<&Path>, out: &Path) -> Result<(), CliError> {
    let mut base = match config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    base.trace_oracle |= cli_trace;
    let modes: Vec<Option<Mode>> = if axes.contains(&Axis::Modes) {
        [Mode::Selective, Mode::AllNl, Mode::AllFol].map(Some).to_vec()
    } else {
        vec![None]
    };
    let strategies: Vec<Option<Strategy>> = if axes.contains(&Axis::Strategies) {
        [Strategy::Backward, Strategy::Forward].map(Some).to_vec()
    } else {
        vec![None]
    };
    let overrides: Vec<Override> = modes
        .iter()
        .flat_map(|&mode| {
            strategies.iter().map(move |&strategy| Override {
                mode,
                strategy,
                budget: None,
            })
        })
        .collect();
    let instances = load_dataset(dataset)?;
    let cmp: Comparison = crate::harness::compare_modes(&instances, &base, &overrides)?;
    fs::create_dir_all(out)?;
    let name = file_stem(dataset);
    emit_comparison(&cmp, ReportFormat::Csv, &name, &out.join("comparison.csv"))?;
    emit_comparison(&cmp, ReportFormat::Markdown, &name, &out.join("comparison.md"))?;
    for row in &cmp.rows {
        write_run(out, row, &name, &format!("{}-", safe_name(&row.label)))?;
        println!("{}: accuracy {:.4}", row.label, row.aggregates.accuracy);
    }
    Ok(())
}

fn gen(count: usize, depth: usize, distractors: usize, seed: u64, out: Option<&Path>) -> Result<(), CliError> {
    let instances = generate_synthetic(count, depth, distractors, seed).map_err(|e| match e {
        HarnessError::InvalidParams(m) => CliError::Usage(m),
        other => other.into(),
    })?;
    let mut w = output(out)?;
    write_dataset(&instances, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    let t = cli.trace_oracle;
    match cli.command {
        Command::Translate {
            input,
            mode,
            backend,
            out,
        } => translate(t, &input, mode, &backend, out.as_deref()),
        Command::Prove {
            input,
            strategy,
            budget,
            mode,
            backend,
            trace_dir,
            out,
        } => prove(t, &input, strategy, budget, mode, &backend, trace_dir.as_deref(), out.as_deref()),
        Command::Eval {
            dataset,
            config,
            out,
            traces,
            sequential,
        } => eval(t, &dataset, &config, &out, traces, sequential),
        Command::Ablate {
            dataset,
            axes,
            config,
            out,
        } => ablate(t, &dataset, &axes, config.as_deref(), &out),
        Command::Gen {
            count,
            depth,
            distractors,
            seed,
            out,
        } => gen(count, depth, distractors, seed, out.as_deref()),
    }
}

/// Parses `args`, runs the command, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("hblr: {e}");
            e.exit_code()
        }
    }
}
