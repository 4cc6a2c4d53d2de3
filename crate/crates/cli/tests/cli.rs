use std::process::Command;

use ncat_cli::report::{Counts, Timing};
use ncat_cli::{run_suite, Aggregate, CliError, Report, RunConfig, SUITES};
use ncat_combinat::Verdict;
use serde_json::Value;

fn ncat(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ncat")).args(args).env_remove("NCAT_TRUNCATION").output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8"))
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().expect("report is an object").remove("timing");
    v
}

#[test]
fn unknown_suite_is_typed() {
    assert!(matches!(run_suite("no-such-suite", &RunConfig::default()), Err(CliError::UnknownSuite(s)) if s == "no-such-suite"));
    let (code, _) = ncat(&["verify-lemma", "no-such-suite"]);
    assert_eq!(code, 64);
}

#[test]
fn registry_names_are_unique() {
    let mut names: Vec<_> = SUITES.iter().map(|s| s.name).collect();
    names.sort_unstable();
    names.dedup();
    assert_eq!(names.len(), SUITES.len());
    assert!(SUITES.iter().all(|s| !s.anchor.is_empty()));
}

#[test]
fn factorization_suite_passes_with_config_echo() {
    let cfg = RunConfig { seed: 11, ..RunConfig::default() };
    let r = run_suite("factorization-uniqueness", &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(r.config, cfg);
    // Σ_{a, b ≤ 6} C(a + b + 1, a + 1)
    assert_eq!(r.counts.checked, 6427);
}

#[test]
fn filtration_suite_reports_stage_counts() {
    let cfg = RunConfig::default().with_truncation(2);
    let r = run_suite("filtration-partition", &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.witnesses);
    let rows = r.details.as_array().unwrap();
    assert_eq!(rows.len(), 4 * 4);
    assert!(rows.iter().any(|row| row["stages"].as_object().is_some_and(|s| !s.is_empty())));
}

#[test]
fn reports_are_deterministic_up_to_timing() {
    for name in ["segal-corruption", "sifted-commas", "tensor-values"] {
        let cfg = RunConfig { seed: 5, ..RunConfig::default() };
        let a = serde_json::to_value(run_suite(name, &cfg).unwrap()).unwrap();
        let b = serde_json::to_value(run_suite(name, &cfg).unwrap()).unwrap();
        assert_eq!(without_timing(a), without_timing(b), "{name}");
    }
}

#[test]
fn zero_bounds_are_rejected() {
    let cfg = RunConfig { jobs: 0, ..RunConfig::default() };
    assert!(matches!(run_suite("tensor-values", &cfg), Err(CliError::BadConfig(_))));
}

#[test]
fn budget_overrun_is_inconclusive() {
    let (code, out) = ncat(&["enumerate", "--src", "6", "--tgt", "6", "--budget", "10"]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "INCONCLUSIVE");
    assert!(v["witnesses"][0].as_str().unwrap().contains("budget"));
    // the same bound through a suite
    let cfg = RunConfig { budget: 10, ..RunConfig::default() };
    assert_eq!(run_suite("morita-pair", &cfg).unwrap().verdict, Verdict::Inconclusive);
}

#[test]
fn aggregate_takes_max_severity() {
    let report = |verdict, failed| Report {
        suite: "s".into(),
        anchor: "a".into(),
        verdict,
        counts: Counts { checked: 1, failed, undecided: 0 },
        witnesses: vec![],
        details: Value::Null,
        config: RunConfig::default(),
        timing: Timing::default(),
    };
    let cfg = RunConfig::default();
    assert_eq!(Aggregate::new(&cfg, vec![report(Verdict::Pass, 0), report(Verdict::Inconclusive, 0)]).exit_code(), 2);
    assert_eq!(Aggregate::new(&cfg, vec![report(Verdict::Inconclusive, 0), report(Verdict::Fail, 1), report(Verdict::Pass, 0)]).exit_code(), 1);
    assert_eq!(Aggregate::new(&cfg, vec![report(Verdict::Pass, 0)]).exit_code(), 0);
}

#[test]
fn check_segal_reads_json() {
    let (code, out) = ncat(&["check-segal", "--input", &data("z2_nerve.json")]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = ncat(&["check-segal", "--input", &data("z2_nerve_extra_triangle.json")]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(!v["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn factorize_and_compose_json() {
    let (code, out) = ncat(&["factorize", "--morphism", r#"{"src":1,"tgt":3,"values":[1,3]}"#]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["details"]["active"]["values"], serde_json::json!([0, 2]));
    assert_eq!(v["details"]["inert"]["values"], serde_json::json!([1, 2, 3]));
    let (code, out) = ncat(&["factorize", "--morphism", r#"{"kind":"gamma","src":2,"tgt":1,"values":[0,1,1]}"#]);
    assert_eq!(code, 0);
    assert!(out.contains("\"class\""));
    let (code, out) = ncat(&["compose", "--first", r#"{"src":0,"tgt":1,"values":[1]}"#, "--second", r#"{"src":1,"tgt":2,"values":[0,2]}"#]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["details"]["values"], serde_json::json!([2]));
}

#[test]
fn tensor_of_cyclic_groups() {
    let (code, out) = ncat(&["tensor", "--left", "Z/4", "--right", "Z/6"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["details"]["invariant_factors"], serde_json::json!([2]));
}

#[test]
fn env_overrides_flags() {
    let out = Command::new(env!("CARGO_BIN_EXE_ncat"))
        .args(["verify-lemma", "tensor-values"])
        .env("NCAT_SEED", "42")
        .env("NCAT_CAP", "32")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 42);
    assert_eq!(v["config"]["cap"], 32);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("ncat-report-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, stdout) = ncat(&["verify-lemma", "gamma-index", "--out", p]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["suite"], "gamma-index");
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn morita_between_k_and_matrices() {
    let (code, out) = ncat(&["morita", "--a", "0", "--b", "3"]);
    assert_eq!(code, 0, "{out}");
    let (code, _) = ncat(&["morita", "--a", "0", "--b", "2"]);
    assert_eq!(code, 1);
}
