//! One line per acceptance criterion. Runs without the test harness so the
//! lines are always printed; exits nonzero if an attainable criterion fails.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;

use parakahler::catalog::{builtin, Problem};
use parakahler::para::{nijenhuis_entry, Endomorphism};
use parakahler::scalar::parse_scalar;
use parakahler::solver::{prepare, replay, sign_diagonals, solve, Action, BranchEnd, Budget, Origin, Rule, Verdict};
use parakahler::{Scalar, Var};
use parakahler_cli::{Report, Status};
use serde_json::json;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cli(args: &[&str]) -> Result<(i32, Report), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_parakahler"))
        .args(args)
        .args(["--format", "json"])
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code().unwrap_or(-1);
    let text = String::from_utf8_lossy(&out.stdout);
    let report = serde_json::from_str(&text)
        .map_err(|e| format!("{:?} exited {} without a report ({}): {}", args, code, e, String::from_utf8_lossy(&out.stderr)))?;
    Ok((code, report))
}

fn passes(r: &Report, name: &str) -> Result<(), String> {
    match r.find_check(name) {
        Some(c) if c.status == Status::Pass => Ok(()),
        Some(c) => Err(format!("check `{}` is {:?}: {}", name, c.status, c.details)),
        None => Err(format!("check `{}` missing", name)),
    }
}

fn fixture() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures/g6_brackets.json")
        .to_string_lossy()
        .into_owned()
}

fn parse(p: &Problem, text: &str) -> Scalar {
    parse_scalar(text, &p.context()).expect("valid expression")
}

fn psi(i: usize, j: usize) -> Var {
    Var::psi(i, j)
}

fn criterion1() -> Outcome {
    let (code, r) = cli(&["solve", "--builtin", "G1"])?;
    ensure(code == 4 && r.verdict == Some(Verdict::Unsat), format!("exit {} verdict {:?}", code, r.verdict))?;
    passes(&r, "trace replay")?;
    let trace = r.find_artifact("trace").ok_or("no trace artifact")?;
    ensure(
        trace.text.last().is_some_and(|l| l.ends_with("constant 4 \u{2260} 0")),
        "trace does not end with the constant 4",
    )?;

    let p = builtin("G1").map_err(|e| e.to_string())?;
    let sys = prepare(p.algebra().map_err(|e| e.to_string())?, p.omega.as_ref().unwrap()).map_err(|e| e.to_string())?;
    let out = solve(&sys, &Budget::default());
    let forced: Vec<Var> = out
        .trace
        .steps()
        .into_iter()
        .filter(|s| s.rule == Rule::SquareForce)
        .filter_map(|s| match &s.action {
            Action::Bind { var, value } if value == &Scalar::from_int(0) => Some(var.clone()),
            _ => None,
        })
        .collect();
    for (i, j) in [(1, 6), (1, 5), (1, 4), (2, 5), (1, 3), (1, 2), (2, 4), (2, 3), (3, 4)] {
        ensure(forced.contains(&psi(i, j)), format!("psi_{}_{} is not forced to 0", i, j))?;
    }
    let leaves = replay(&sys, &out.trace).map_err(|e| e.to_string())?;
    ensure(leaves.iter().all(|l| l.end.is_contradiction()), "a branch does not end in a contradiction")?;
    let four = leaves.iter().any(|l| {
        l.binding(&psi(1, 1)) == Some(&Scalar::from_int(1))
            && l.binding(&psi(2, 2)) == Some(&Scalar::from_int(1))
            && l.binding(&psi(3, 3)) == Some(&Scalar::from_int(-1))
            && matches!(&l.end, BranchEnd::Contradiction { constants, .. }
                if constants.iter().any(|(o, c)| o == &Origin::Nijenhuis { k: 6, i: 2, j: 4 } && c == &Scalar::from_int(4)))
    });
    ensure(four, "no branch psi_1_1 = psi_2_2 = 1, psi_3_3 = -1 closes with N^6_24 = 4")?;
    Ok(format!("UNSAT, {} branches replayed, nine squares forced, N^6_24 = 4", leaves.len()))
}

fn criterion2() -> Outcome {
    let p = builtin("G1").map_err(|e| e.to_string())?;
    let l = p.algebra().map_err(|e| e.to_string())?;
    let sys = prepare(l, p.omega.as_ref().unwrap()).map_err(|e| e.to_string())?;
    let mut bindings: BTreeMap<Var, Scalar> = BTreeMap::new();
    let mut mismatches = Vec::new();
    // (k, i, j, expected, unknowns set to zero afterwards)
    let steps: &[(usize, usize, usize, &str, &[(usize, usize)])] = &[
        (1, 5, 6, "psi_1_6^2", &[(1, 6)]),
        (1, 4, 5, "psi_1_5^2", &[(1, 5)]),
        (3, 1, 5, "psi_1_4^2", &[]),
        (2, 3, 5, "psi_2_5^2", &[(1, 4), (2, 5)]),
        (1, 2, 3, "psi_1_3^2", &[(1, 3)]),
        (6, 2, 6, "psi_1_2^2/(lambda-1)", &[(1, 2), (2, 4), (2, 3)]),
        (3, 4, 1, "psi_3_4^2", &[(3, 4)]),
        (4, 1, 3, "2*psi_1_1*psi_3_3 + psi_3_3^2 + 1", &[]),
        (5, 2, 3, "psi_2_2^2 + 2*psi_2_2*psi_3_3 + 1", &[]),
        (6, 1, 5, "psi_1_1^2 - 2*psi_1_1*psi_2_2 + 1", &[]),
    ];
    for &(k, i, j, expected, zeros) in steps {
        let m = sys.j.try_map(|e| e.substitute(&bindings, &p.facts)).map_err(|e| e.to_string())?;
        let j_op = Endomorphism::new(m).map_err(|e| e.to_string())?;
        let got = nijenhuis_entry(l, &j_op, k - 1, i - 1, j - 1);
        if got != parse(&p, expected) {
            mismatches.push(format!("N^{}_{}{} is {}, not {}", k, i, j, got, expected));
        }
        for &(a, b) in zeros {
            bindings.insert(psi(a, b), Scalar::from_int(0));
        }
    }
    if mismatches.is_empty() {
        Ok("all ten printed polynomials reproduced".into())
    } else {
        Err(format!(
            "{} (the square psi_1_4^2 appears at N^1_34; the printed label does not match)",
            mismatches.join("; ")
        ))
    }
}

fn criterion3() -> Outcome {
    let p = builtin("G1").map_err(|e| e.to_string())?;
    let sys = prepare(p.algebra().map_err(|e| e.to_string())?, p.omega.as_ref().unwrap()).map_err(|e| e.to_string())?;
    let printed = [
        (2, 6, "psi_1_5/(1-lambda)"),
        (3, 5, "(1-lambda)*psi_2_4/lambda"),
        (3, 6, "psi_1_4/lambda"),
        (4, 4, "-psi_3_3"),
        (4, 5, "(lambda-1)*psi_2_3/lambda"),
        (4, 6, "-psi_1_3/lambda"),
        (5, 3, "lambda*psi_4_2/(1-lambda)"),
        (5, 4, "lambda*psi_3_2/(lambda-1)"),
        (5, 5, "-psi_2_2"),
        (5, 6, "psi_1_2/(lambda-1)"),
        (6, 2, "(1-lambda)*psi_5_1"),
        (6, 3, "lambda*psi_4_1"),
        (6, 4, "-lambda*psi_3_1"),
        (6, 5, "(lambda-1)*psi_2_1"),
        (6, 6, "-psi_1_1"),
    ];
    for (i, j, text) in printed {
        ensure(sys.entry(i, j) == &parse(&p, text), format!("J entry ({}, {}) is {}, expected {}", i, j, sys.entry(i, j), text))?;
    }
    Ok(format!("{} dependent entries match, {} unknowns remain", printed.len(), sys.unknowns.len()))
}

fn criterion4() -> Outcome {
    let (code, r) = cli(&["validate", "--builtin", "G6", "--checks", "involution,compat,metric"])?;
    for name in ["involution", "compat", "metric", "metric (reconstructed entries)"] {
        passes(&r, name)?;
    }
    ensure(code == 0, format!("exit {}", code))?;
    let rec = &r.find_check("metric (reconstructed entries)").unwrap().details;
    Ok(format!("J^2 = Id, compatible, g_J matches; reconstructed: {}", rec))
}

fn criterion5() -> Outcome {
    let diag = "diag:1,-1,-1,1,1,-1";
    let (_, r) = cli(&["validate", "--builtin", "G6", "--j", diag, "--checks", "involution,compat"])?;
    passes(&r, "involution")?;
    passes(&r, "compat")?;
    ensure(r.find_check("involution").unwrap().details.contains("(+3, -3)"), "ranks are not (3, 3)")?;

    // Conditional part: brackets from the user fixture.
    let f = fixture();
    let (code, r) = cli(&["validate", "--builtin", "G6", "--brackets-file", &f, "--j", diag, "--checks", "integrability,nilpotent"])?;
    passes(&r, "integrability")?;
    passes(&r, "nilpotent")?;
    ensure(code == 0, format!("validate exit {}", code))?;
    ensure(r.find_check("nilpotent").unwrap().details.contains("(2, 3, 4, 6)"), "a_k(J) dims are not (2, 3, 4, 6)")?;
    let (_, r) = cli(&["curvature", "--builtin", "G6", "--brackets-file", &f, "--j", diag])?;
    let comps = r.find_artifact("curvature").ok_or("no curvature artifact")?;
    let expected = ["R[1,2,1]^4 = 1", "R[1,2,2]^6 = 1", "R[1,2,3]^6 = -1", "R[1,3,1]^5 = -1", "R[1,3,2]^6 = -1"];
    ensure(comps.text == expected, format!("curvature components {:?}", comps.text))?;
    ensure(r.find_artifact("ricci").unwrap().data["ricci_flat"] == json!(true), "Ric is not zero")?;
    Ok("involution, ranks (3, 3), compatible; with supplied brackets: integrable, dims (2, 3, 4, 6), five components, Ric = 0".into())
}

fn criterion6() -> Outcome {
    let (_, r) = cli(&["ideals", "--builtin", "G21"])?;
    let asc = r.find_artifact("ascending central series").ok_or("no ascending series")?;
    ensure(asc.data["dims"] == json!([2, 4, 6]), format!("ascending dims {}", asc.data["dims"]))?;
    ensure(asc.text.first().is_some_and(|l| l.ends_with("span{e5, e6}")), "center is not span{e5, e6}")?;

    let omega = "1,6,1;2,5,1;3,4,-1";
    let (code, r) = cli(&["solve", "--builtin", "G21", "--omega", omega])?;
    ensure(code == 0 && r.verdict == Some(Verdict::Family), format!("solve exit {}", code))?;
    let j = "rows:-1,0,0,0,0,0;0,1,0,0,0,0;0,0,-1,1,0,0;0,0,0,1,0,0;0,-2,0,0,-1,0;0,0,0,0,0,1";
    let (code, r) = cli(&["curvature", "--builtin", "G21", "--omega", omega, "--j", j])?;
    ensure(code == 0, format!("curvature exit {}: {:?}", code, r.checks))?;
    let decomposition = r.find_artifact("decomposition").ok_or("no decomposition artifact")?;
    ensure(decomposition.text.iter().all(|l| l.ends_with(": true")), format!("{:?}", decomposition.text))?;
    ensure(r.find_artifact("ricci").unwrap().data["ricci_flat"] == json!(true), "Ric is not zero")?;
    let comps = r.find_artifact("curvature").unwrap().data.as_array().unwrap().clone();
    ensure(!comps.is_empty(), "structure is flat; the pattern is untested")?;
    for c in &comps {
        let (i, jj, l) = (c["i"].as_u64().unwrap(), c["j"].as_u64().unwrap(), c["l"].as_u64().unwrap());
        ensure(l >= 5 && i <= 2 && jj <= 2, format!("component outside the pattern: {}", c))?;
    }
    Ok(format!(
        "hypotheses and conclusions hold, Ric = 0, {} nonzero components all of type R^(5|6)_(12)k",
        comps.len()
    ))
}

fn criterion7() -> Outcome {
    let (code, r) = cli(&["selfcheck", "--seed", "20261015", "--cases", "500"])?;
    for c in &r.checks {
        ensure(c.status == Status::Pass, format!("{}: {}", c.name, c.details))?;
    }
    ensure(code == 0 && r.checks.len() == 7, format!("exit {}, {} suites", code, r.checks.len()))?;
    Ok("7 suites x 500 seeded cases pass".into())
}

fn criterion8() -> Outcome {
    ensure(sign_diagonals(6).len() == 20, "not 20 sign diagonals at n = 6")?;
    let (_, r) = cli(&["ansatz", "--builtin", "G1"])?;
    let a = r.find_artifact("ansatz").ok_or("no ansatz artifact")?;
    ensure(a.data["candidates"] == json!(20), "candidate count")?;
    ensure(a.data["hits"].as_array().is_some_and(|h| h.is_empty()), "G1 has a diagonal hit")?;
    let f = fixture();
    let (_, r) = cli(&["ansatz", "--builtin", "G6", "--brackets-file", &f])?;
    let hits = r.find_artifact("ansatz").unwrap().data["hits"].as_array().unwrap().clone();
    ensure(hits.iter().any(|h| h["signs"] == json!([1, -1, -1, 1, 1, -1])), "G6 diagonal missing")?;
    Ok(format!("20 candidates, none on G1, {} on G6 including diag(1,-1,-1,1,1,-1)", hits.len()))
}

/// Criteria whose failure is recorded and does not fail the run.
const KNOWN_UNATTAINABLE: &[usize] = &[2];

fn main() {
    // libtest flags such as --nocapture are accepted and ignored.
    let criteria: [(usize, fn() -> Outcome); 8] = [
        (1, criterion1),
        (2, criterion2),
        (3, criterion3),
        (4, criterion4),
        (5, criterion5),
        (6, criterion6),
        (7, criterion7),
        (8, criterion8),
    ];
    let mut failed = Vec::new();
    for (n, f) in criteria {
        match f() {
            Ok(msg) => println!("criterion {}: PASS: {}", n, msg),
            Err(msg) => {
                println!("criterion {}: FAIL: {}", n, msg);
                if !KNOWN_UNATTAINABLE.contains(&n) {
                    failed.push(n);
                }
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("attainable criteria failed: {:?}", failed);
        std::process::exit(1);
    }
}
