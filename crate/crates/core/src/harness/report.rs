use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::eval::{Comparison, InstanceRecord, RunReport};
use super::reference::{reference_rows, MEAN_RETENTION, REFERENCE_LABEL};
use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Markdown => "md",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            _ => Err(format!("unknown report format `{s}` (csv or markdown)")),
        }
    }
}

fn csv_err(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Io(e.to_string())
}

fn pct(x: f64) -> String {
    format!("{:.2}", 100.0 * x)
}

fn records_csv(records: &[InstanceRecord]) -> Result<String, HarnessError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(csv_err)?;
    }
    String::from_utf8(w.into_inner().map_err(csv_err)?).map_err(csv_err)
}

/// Parses the per-instance CSV written by [`emit_report`].
pub fn read_records(text: &str) -> Result<Vec<InstanceRecord>, HarnessError> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(csv_err)
}

fn comparison_csv(rows: &[&RunReport]) -> Result<String, HarnessError> {
    let depths: BTreeSet<usize> = rows.iter().flat_map(|r| r.aggregates.per_depth.keys().copied()).collect();
    let base = rows[0].aggregates.accuracy;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = ["config", "instances", "correct", "accuracy", "delta_accuracy", "mean_retention", "mean_essential"]
        .map(String::from)
        .to_vec();
    header.extend(depths.iter().map(|d| format!("depth_{d}")));
    w.write_record(&header).map_err(csv_err)?;
    for r in rows {
        let a = &r.aggregates;
        let mut row = vec![
            r.label.clone(),
            a.instances.to_string(),
            a.correct.to_string(),
            a.accuracy.to_string(),
            (a.accuracy - base).to_string(),
            a.mean_retention.to_string(),
            a.mean_essential.to_string(),
        ];
        row.extend(depths.iter().map(|d| a.per_depth.get(d).map(|c| c.accuracy().to_string()).unwrap_or_default()));
        w.write_record(&row).map_err(csv_err)?;
    }
    String::from_utf8(w.into_inner().map_err(csv_err)?).map_err(csv_err)
}

fn table(out: &mut String, corner: &str, columns: &[&RunReport], rows: &[(String, Vec<String>)]) {
    let _ = write!(out, "| {corner} |");
    for c in columns {
        let _ = write!(out, " {} |", c.label);
    }
    out.push_str("\n| --- |");
    out.push_str(&" ---: |".repeat(columns.len()));
    out.push('\n');
    for (name, cells) in rows {
        let _ = writeln!(out, "| {name} | {} |", cells.join(" | "));
    }
    out.push('\n');
}

fn markdown(rows: &[&RunReport], dataset: &str) -> String {
    let mut out = String::new();
    let acc = |f: &dyn Fn(&RunReport) -> String| rows.iter().map(|r| f(r)).collect::<Vec<_>>();

    out.push_str("## Accuracy (%)\n\n");
    table(&mut out, "dataset", rows, &[(dataset.to_string(), acc(&|r| pct(r.aggregates.accuracy)))]);

    out.push_str("## Metrics\n\n");
    let mut metrics = vec![
        ("instances".to_string(), acc(&|r| r.aggregates.instances.to_string())),
        ("correct".to_string(), acc(&|r| r.aggregates.correct.to_string())),
    ];
    if rows.len() > 1 {
        let base = rows[0].aggregates.accuracy;
        metrics.push((
            format!("accuracy delta vs {} (pp)", rows[0].label),
            acc(&|r| format!("{:+.2}", 100.0 * (r.aggregates.accuracy - base))),
        ));
    }
    metrics.push(("mean NL retention (%)".to_string(), acc(&|r| pct(r.aggregates.mean_retention))));
    metrics.push(("mean essential-step ratio (%)".to_string(), acc(&|r| pct(r.aggregates.mean_essential))));
    table(&mut out, "metric", rows, &metrics);

    let depths: BTreeSet<usize> = rows.iter().flat_map(|r| r.aggregates.per_depth.keys().copied()).collect();
    if !depths.is_empty() {
        out.push_str("## Accuracy by depth (%)\n\n");
        let by_depth: Vec<(String, Vec<String>)> = depths
            .iter()
            .map(|d| {
                let cells = acc(&|r| {
                    r.aggregates
                        .per_depth
                        .get(d)
                        .map(|c| format!("{} ({}/{})", pct(c.accuracy()), c.correct, c.total))
                        .unwrap_or_else(|| "-".into())
                });
                (d.to_string(), cells)
            })
            .collect();
        table(&mut out, "depth", rows, &by_depth);
    }

    let refs = reference_rows(Some(dataset));
    if !refs.is_empty() {
        let _ = writeln!(out, "## Reference: {REFERENCE_LABEL}\n");
        out.push_str("| dataset | backward accuracy (%) | forward accuracy (%) | effective-step ratio (%) | NL retention (%) |\n");
        out.push_str("| --- | ---: | ---: | ---: | ---: |\n");
        for r in refs {
            let retention = r.retention.map_or_else(|| format!("- (mean {MEAN_RETENTION:.2})"), |x| format!("{x:.2}"));
            let _ = writeln!(
                out,
                "| {} | {:.2} | {:.2} | {:.2} | {retention} |",
                r.dataset, r.backward_accuracy, r.forward_accuracy, r.essential_ratio
            );
        }
        out.push('\n');
    }
    out
}

/// A single run: per-instance rows as CSV, or summary tables as markdown.
pub fn render_report(report: &RunReport, format: ReportFormat, dataset: &str) -> Result<String, HarnessError> {
    if report.records.is_empty() {
        return Err(HarnessError::EmptyReport);
    }
    match format {
        ReportFormat::Csv => records_csv(&report.records),
        ReportFormat::Markdown => Ok(markdown(&[report], dataset)),
    }
}

/// Side-by-side configurations: one CSV row per configuration, or
/// markdown tables with one column per configuration.
pub fn render_comparison(cmp: &Comparison, format: ReportFormat, dataset: &str) -> Result<String, HarnessError> {
    if cmp.rows.is_empty() || cmp.rows.iter().any(|r| r.records.is_empty()) {
        return Err(HarnessError::EmptyReport);
    }
    let rows: Vec<&RunReport> = cmp.rows.iter().collect();
    match format {
        ReportFormat::Csv => comparison_csv(&rows),
        ReportFormat::Markdown => Ok(markdown(&rows, dataset)),
    }
}

fn write(path: &Path, text: &str) -> Result<(), HarnessError> {
    fs::write(path, text).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

pub fn emit_report(report: &RunReport, format: ReportFormat, dataset: &str, path: &Path) -> Result<(), HarnessError> {
    write(path, &render_report(report, format, dataset)?)
}

pub fn emit_comparison(cmp: &Comparison, format: ReportFormat, dataset: &str, path: &Path) -> Result<(), HarnessError> {
    write(path, &render_comparison(cmp, format, dataset)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{compare_modes, generate_synthetic, run_eval, Aggregates, Override, RunConfig};
    use crate::reasoning::Strategy;

    #[test]
    fn two_configs_give_two_data_columns() {
        let ds = generate_synthetic(6, 2, 1, 1).unwrap();
        let axes = [Strategy::Backward, Strategy::Forward].map(Override::strategy);
        let cmp = compare_modes(&ds, &RunConfig::default(), &axes).unwrap();
        let md = render_comparison(&cmp, ReportFormat::Markdown, "synthetic").unwrap();
        let header = md.lines().find(|l| l.starts_with("| dataset |")).unwrap();
        assert_eq!(header, "| dataset | selective/backward | selective/forward |");
        assert!(!md.contains(REFERENCE_LABEL));
        let csv = render_comparison(&cmp, ReportFormat::Csv, "synthetic").unwrap();
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn csv_round_trip_reproduces_aggregates() {
        let ds = generate_synthetic(25, 4, 3, 6).unwrap();
        let report = run_eval(&ds, &RunConfig::default()).unwrap();
        let csv = render_report(&report, ReportFormat::Csv, "synthetic").unwrap();
        let back = read_records(&csv).unwrap();
        assert_eq!(back, report.records);
        assert_eq!(Aggregates::from_records(&back, false), report.aggregates);
    }

    #[test]
    fn benchmark_names_pull_in_reference_numbers() {
        let ds = generate_synthetic(3, 1, 0, 1).unwrap();
        let report = run_eval(&ds, &RunConfig::default()).unwrap();
        let md = render_report(&report, ReportFormat::Markdown, "proofwriter-dev").unwrap();
        assert!(md.contains(REFERENCE_LABEL));
        assert!(md.contains("| ProofWriter | 89.41 | 81.24 | 81.60 |"));
    }

    #[test]
    fn empty_report_is_rejected() {
        let ds = generate_synthetic(1, 0, 0, 1).unwrap();
        let mut report = run_eval(&ds, &RunConfig::default()).unwrap();
        report.records.clear();
        assert_eq!(render_report(&report, ReportFormat::Csv, "x"), Err(HarnessError::EmptyReport));
    }
}
