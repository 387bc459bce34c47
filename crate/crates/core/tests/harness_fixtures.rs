mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;

use common::closure_verdict;
use hblr::harness::{load_dataset, run_eval, BackendKind, HarnessError, Pipeline, ProblemInstance, RunConfig};
use hblr::translation::{HybridStatement, Mode};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn offline(mode: Mode) -> RunConfig {
    RunConfig {
        mode,
        backend: BackendKind::None,
        ..RunConfig::default()
    }
}

#[test]
fn three_valid_lines_load() {
    let ds = load_dataset(&data("three_valid.jsonl")).unwrap();
    assert_eq!(ds.iter().map(|i| i.id.as_str()).collect::<Vec<_>>(), ["v1", "v2", "v3"]);
    let report = run_eval(&ds, &offline(Mode::Selective)).unwrap();
    assert_eq!(report.aggregates.correct, 3);
}

#[test]
fn missing_gold_names_the_line() {
    let err = load_dataset(&data("missing_gold.jsonl")).unwrap_err();
    assert_eq!(
        err,
        HarnessError::Schema {
            line: 2,
            field: "gold".into()
        }
    );
}

fn symbolic(pipeline: &Pipeline, inst: &ProblemInstance) -> (Vec<hblr::fol::Formula>, hblr::fol::Formula) {
    let ctx = pipeline.context(inst, &inst.conclusion).unwrap();
    let logic = |s: &HybridStatement| {
        s.formula()
            .cloned()
            .unwrap_or_else(|| panic!("{}: `{}` stayed text", inst.id, s.span().text))
    };
    (ctx.premises.iter().map(logic).collect(), logic(&ctx.conclusion))
}

#[test]
fn proofwriter_gold_agrees_with_the_closure() {
    let ds = load_dataset(&data("proofwriter_depth.jsonl")).unwrap();
    assert_eq!(ds.len(), 20);
    let depths: BTreeSet<usize> = ds.iter().filter_map(|i| i.depth).collect();
    assert_eq!(depths, (0..=5).collect());
    let pipeline = Pipeline::from_config(&offline(Mode::Selective)).unwrap();
    for inst in &ds {
        let (premises, conclusion) = symbolic(&pipeline, inst);
        assert_eq!(closure_verdict(&premises, &conclusion).as_str(), inst.gold, "{}", inst.id);
    }
    let report = run_eval(&ds, &offline(Mode::Selective)).unwrap();
    assert_eq!(report.aggregates.accuracy, 1.0);
    assert!(report.records.iter().all(|r| r.retention_ratio == 0.0));
}

#[test]
fn ten_templated_premises_retain_nothing() {
    let ds = load_dataset(&data("ten_premises.jsonl")).unwrap();
    assert_eq!(ds[0].premises.len(), 10);
    let report = run_eval(&ds, &offline(Mode::Selective)).unwrap();
    let r = &report.records[0];
    assert_eq!(r.retention_ratio, 0.0);
    assert_eq!(r.prediction.as_deref(), Some("True"));
    let all_nl = run_eval(&ds, &offline(Mode::AllNl)).unwrap();
    assert_eq!(all_nl.records[0].retention_ratio, 1.0);
    assert_eq!(all_nl.records[0].prediction.as_deref(), Some("Unknown"));
}

#[test]
fn shipped_config_resolves_its_stub_script() {
    let cfg = RunConfig::load(&data("eval.conf")).unwrap();
    assert_eq!(cfg.backend, BackendKind::Stub);
    assert_eq!(cfg.stub_script.as_deref(), Some(data("stub_script.tsv").as_path()));
    assert_eq!(cfg.seed, 7);
    let ds = load_dataset(&data("three_valid.jsonl")).unwrap();
    assert_eq!(run_eval(&ds, &cfg).unwrap().aggregates.correct, 3);
}
