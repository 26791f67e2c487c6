use std::path::PathBuf;
use std::process::{Command, Output};

use parakahler_cli::Report;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parakahler")).args(args).output().expect("binary runs")
}

fn fixture() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures/g6_brackets.json")
        .to_string_lossy()
        .into_owned()
}

fn json_report(args: &[&str]) -> (i32, Report) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = bin(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    (out.status.code().unwrap(), serde_json::from_str(&text).expect(&text))
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
    assert_eq!(bin(&["--version"]).status.code(), Some(0));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(bin(&["validate"]).status.code(), Some(1));
    assert_eq!(bin(&["validate", "--builtin", "G1", "--checks", "nonsense"]).status.code(), Some(1));
    assert_eq!(bin(&["validate", "--builtin", "G99"]).status.code(), Some(2));
    assert_eq!(bin(&["validate", "--builtin", "G1"]).status.code(), Some(0));
    assert_eq!(bin(&["solve", "--builtin", "G1"]).status.code(), Some(4));
    assert_eq!(bin(&["solve", "--builtin", "G1", "--max-splits", "0", "--max-depth", "0"]).status.code(), Some(5));
    assert_eq!(
        bin(&["solve", "--builtin", "G21", "--omega", "1,6,1;2,5,1;3,4,-1"]).status.code(),
        Some(0)
    );
    let missing = bin(&["curvature", "--builtin", "G6"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("external-required"));
    let explicit = bin(&["validate", "--builtin", "G6", "--checks", "integrability"]);
    assert_eq!(explicit.status.code(), Some(2));
}

#[test]
fn json_reports_round_trip() {
    let (code, report) = json_report(&["solve", "--builtin", "G1"]);
    assert_eq!(code, 4);
    let again: Report = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(again, report);
    assert_eq!(again.to_json(), report.to_json());
    assert_eq!(report.exit_code(), 4);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = bin(&["ideals", "--builtin", "G21", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(r.find_artifact("ascending central series").is_some());
}

#[test]
fn g1_trace_ends_with_constant_four() {
    let (_, r) = json_report(&["solve", "--builtin", "G1"]);
    assert_eq!(r.find_check("trace replay").unwrap().status, parakahler_cli::Status::Pass);
    let trace = r.find_artifact("trace").unwrap();
    assert!(trace.text.last().unwrap().ends_with("constant 4 \u{2260} 0"));
    let text = String::from_utf8(bin(&["solve", "--builtin", "G1"]).stdout).unwrap();
    assert!(text.trim_end().ends_with("verdict: UNSAT"));
}

#[test]
fn g21_ideals() {
    let (code, r) = json_report(&["ideals", "--builtin", "G21"]);
    assert_eq!(code, 0);
    let dims = &r.find_artifact("ascending central series").unwrap().data["dims"];
    assert_eq!(dims, &serde_json::json!([2, 4, 6]));
    let lower = &r.find_artifact("lower central series").unwrap().data["dims"];
    assert_eq!(lower, &serde_json::json!([6, 2, 1, 0]));
}

#[test]
fn g6_ansatz_with_supplied_brackets() {
    let f = fixture();
    let (code, r) = json_report(&["ansatz", "--builtin", "G6", "--brackets-file", &f]);
    assert_eq!(code, 0);
    let hits = r.find_artifact("ansatz").unwrap().data["hits"].as_array().unwrap().clone();
    assert!(hits.iter().any(|h| h["signs"] == serde_json::json!([1, -1, -1, 1, 1, -1])));
    let (_, g1) = json_report(&["ansatz", "--builtin", "G1"]);
    assert_eq!(g1.find_artifact("ansatz").unwrap().data["candidates"], 20);
    assert!(g1.find_artifact("ansatz").unwrap().data["hits"].as_array().unwrap().is_empty());
}

#[test]
fn diagonal_j_on_g1_is_not_integrable() {
    let (code, r) = json_report(&["validate", "--builtin", "G1", "--j", "diag:1,1,1,-1,-1,-1"]);
    assert_eq!(code, 3);
    assert_eq!(r.find_check("integrability").unwrap().status, parakahler_cli::Status::Fail);
    assert_eq!(r.find_check("involution").unwrap().status, parakahler_cli::Status::Pass);
}

#[test]
fn g6_printed_family_validates_without_brackets() {
    let (code, r) = json_report(&["validate", "--builtin", "G6", "--checks", "involution,compat,metric"]);
    assert_eq!(code, 0);
    for name in ["involution", "compat", "metric", "metric (reconstructed entries)"] {
        assert_eq!(r.find_check(name).unwrap().status, parakahler_cli::Status::Pass, "{}", name);
    }
}

#[test]
fn user_problem_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("heis.json");
    std::fs::write(
        &path,
        r#"{"name": "heis", "dim": 3, "brackets": [{"i": 1, "j": 2, "coeffs": ["0", "0", "1"]}]}"#,
    )
    .unwrap();
    let out = bin(&["ideals", "--file", path.to_str().unwrap()]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(text.contains("g_1 (dim 1)"));
}

#[test]
fn catalog_and_selfcheck() {
    let (code, r) = json_report(&["catalog", "list"]);
    assert_eq!(code, 0);
    assert_eq!(r.find_artifact("catalog").unwrap().text.len(), 3);
    let (code, _) = json_report(&["catalog", "show", "G21"]);
    assert_eq!(code, 0);
    let (code, r) = json_report(&["selfcheck", "--seed", "7", "--cases", "20", "--suites", "ring,lie"]);
    assert_eq!(code, 0);
    assert_eq!(r.checks.len(), 2);
    assert_eq!(bin(&["selfcheck", "--suites", "nope"]).status.code(), Some(1));
}
