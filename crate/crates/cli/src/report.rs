use std::fmt::Write as _;

use parakahler::solver::Verdict;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub details: String,
}

/// A computed object: `text` is what the pretty form prints, `data` the
/// same content in structured form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub name: String,
    pub text: Vec<String>,
    pub data: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    pub checks: Vec<CheckResult>,
    pub artifacts: Vec<Artifact>,
    /// Set by `solve` only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_FAILED: i32 = 3;
pub const EXIT_UNSAT: i32 = 4;
pub const EXIT_UNKNOWN: i32 = 5;

impl Report {
    pub fn new(command: Vec<String>) -> Report {
        Report {
            command,
            checks: Vec::new(),
            artifacts: Vec::new(),
            verdict: None,
        }
    }

    pub fn check(&mut self, name: &str, status: Status, details: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            status,
            details: details.into(),
        });
    }

    pub fn artifact(&mut self, name: &str, text: Vec<String>, data: Value) {
        self.artifacts.push(Artifact {
            name: name.to_string(),
            text,
            data,
        });
    }

    pub fn find_check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn find_artifact(&self, name: &str) -> Option<&Artifact> {
        self.artifacts.iter().find(|a| a.name == name)
    }

    /// Solver verdicts decide first; otherwise any failed check gives 3.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Some(Verdict::Witness | Verdict::Family) => EXIT_OK,
            Some(Verdict::Unsat) => EXIT_UNSAT,
            Some(Verdict::Unknown) => EXIT_UNKNOWN,
            None if self.checks.iter().any(|c| c.status == Status::Fail) => EXIT_FAILED,
            None => EXIT_OK,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "$ parakahler {}", self.command.join(" "));
        for c in &self.checks {
            if c.details.is_empty() {
                let _ = writeln!(out, "[{}] {}", c.status.label(), c.name);
            } else {
                let _ = writeln!(out, "[{}] {}: {}", c.status.label(), c.name, c.details);
            }
        }
        for a in &self.artifacts {
            let _ = writeln!(out, "-- {} --", a.name);
            for line in &a.text {
                let _ = writeln!(out, "{}", line);
            }
        }
        if let Some(v) = self.verdict {
            let _ = writeln!(out, "verdict: {}", v.to_string().to_uppercase());
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }
}
