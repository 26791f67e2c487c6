//! The `parakahler` command line: argument parsing, the subcommands, and
//! their reports.

pub mod report;

use std::path::PathBuf;
use std::time::Duration;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use parakahler::catalog::{builtin, load_problem, load_problem_file, Problem, Provenance, BUILTIN_NAMES};
use parakahler::curvature::{check_parakahler_identity, check_decomposition, curvature_tensor, levi_civita, ricci};
use parakahler::lie::IdealChain;
use parakahler::linalg::{Matrix, Subspace};
use parakahler::para::*;
use parakahler::scalar::parse_scalar;
use parakahler::selfcheck::{run_suite, SUITES};
use parakahler::solver::{
    ansatz_diag, prepare, replay, sign_diagonals, solve, Action, Branch, BranchEnd, Budget, SolverError, TraceNode,
};
use parakahler::{Rational, Scalar, Zero};

pub use report::{Report, Status};
use report::{EXIT_INPUT, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(name = "parakahler", version, about = "Exact checks and search for para-Kaehler structures on Lie algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the algebra, form and operator of a problem.
    Validate {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Comma-separated subset of: jacobi, symplectic, involution,
        /// compat, integrability, nilpotent, relations, metric.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
    },
    /// Lower central, ascending central and a_k(J) series.
    Ideals {
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// Levi-Civita connection, curvature and Ricci tensor of g = omega J.
    Curvature {
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// Search for J compatible with omega and integrable.
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = Budget::default().max_splits)]
        max_splits: usize,
        #[arg(long, default_value_t = Budget::default().max_depth)]
        max_depth: usize,
        /// Comma-separated rationals tried by enumeration.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        enum_set: Option<Vec<String>>,
        /// Wall-clock limit in seconds; 0 disables it.
        #[arg(long, default_value_t = 120)]
        time_limit: u64,
    },
    /// Trace-zero sign diagonals that are compatible and integrable.
    Ansatz {
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// The built-in problems.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Seeded randomized checks of the library invariants.
    Selfcheck {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        cases: usize,
        /// Comma-separated suite names; all by default.
        #[arg(long, value_delimiter = ',')]
        suites: Option<Vec<String>>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    List,
    Show { name: String },
}

#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("source").required(true).args(["builtin", "file"])))]
pub struct ProblemArgs {
    /// G1, G6 or G21.
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Problem file whose brackets complete the selected problem.
    #[arg(long)]
    pub brackets_file: Option<PathBuf>,
    /// Replaces omega: `i,j,coeff;...` with one-based indices.
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<String>,
    /// Replaces J: `diag:a,b,...` or `rows:a,b,...;c,d,...`.
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<String>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) => m,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

/// Parses `argv` (without the program name), runs the command, writes the
/// report, and returns the exit code.
pub fn main_with(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(std::iter::once("parakahler".to_string()).chain(argv.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli, argv) {
        Ok(report) => {
            let text = match cli.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json() + "\n",
            };
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: {}: {}", path.display(), e);
                        return EXIT_INPUT;
                    }
                }
                None => print!("{}", text),
            }
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli, argv: Vec<String>) -> Result<Report, CliError> {
    let mut report = Report::new(argv);
    match &cli.command {
        Command::Validate { problem, checks } => validate(&mut report, &load(problem)?, checks.as_deref())?,
        Command::Ideals { problem } => ideals(&mut report, &load(problem)?)?,
        Command::Curvature { problem } => curvature(&mut report, &load(problem)?)?,
        Command::Solve {
            problem,
            max_splits,
            max_depth,
            enum_set,
            time_limit,
        } => {
            let mut budget = Budget {
                max_splits: *max_splits,
                max_depth: *max_depth,
                time: (*time_limit > 0).then(|| Duration::from_secs(*time_limit)),
                ..Budget::default()
            };
            if let Some(items) = enum_set {
                budget.enum_set = parse_enum_set(items)?;
            }
            cmd_solve(&mut report, &load(problem)?, &budget)?
        }
        Command::Ansatz { problem } => ansatz(&mut report, &load(problem)?)?,
        Command::Catalog { action } => catalog(&mut report, action)?,
        Command::Selfcheck { seed, cases, suites } => selfcheck(&mut report, *seed, *cases, suites.as_deref())?,
    }
    Ok(report)
}

// Loading.

pub fn load(args: &ProblemArgs) -> Result<Problem, CliError> {
    let mut p = match (&args.builtin, &args.file) {
        (Some(name), None) => builtin(name).map_err(input)?,
        (None, Some(path)) => load_problem(path).map_err(input)?,
        _ => return Err(CliError::Usage("give exactly one of --builtin and --file".into())),
    };
    if let Some(path) = &args.brackets_file {
        let file = load_problem_file(path).map_err(input)?;
        p.complete_brackets(&file).map_err(input)?;
    }
    if let Some(spec) = &args.omega {
        p.omega = Some(parse_omega(&p, spec)?);
        p.provenance.insert("omega".into(), Provenance::User);
    }
    if let Some(spec) = &args.j {
        p.j = Some(parse_j(&p, spec)?);
        p.provenance.insert("J".into(), Provenance::User);
        p.provenance.retain(|k, _| !k.starts_with("J["));
    }
    Ok(p)
}

fn scalar(p: &Problem, text: &str) -> Result<Scalar, CliError> {
    parse_scalar(text.trim(), &p.context()).map_err(|e| CliError::Usage(format!("`{}`: {}", text.trim(), e)))
}

pub fn parse_omega(p: &Problem, spec: &str) -> Result<TwoForm, CliError> {
    let mut terms = Vec::new();
    for item in spec.split(';').filter(|s| !s.trim().is_empty()) {
        let parts: Vec<&str> = item.split(',').collect();
        let bad = || CliError::Usage(format!("--omega entry `{}` is not i,j,coeff", item));
        if parts.len() != 3 {
            return Err(bad());
        }
        let i: usize = parts[0].trim().parse().map_err(|_| bad())?;
        let j: usize = parts[1].trim().parse().map_err(|_| bad())?;
        if i == 0 || j == 0 || i > p.dim || j > p.dim || i == j {
            return Err(bad());
        }
        terms.push((i - 1, j - 1, scalar(p, parts[2])?));
    }
    Ok(TwoForm::from_wedges(p.dim, &terms))
}

pub fn parse_j(p: &Problem, spec: &str) -> Result<Endomorphism, CliError> {
    let n = p.dim;
    let m = if let Some(rest) = spec.strip_prefix("diag:") {
        let entries = rest.split(',').map(|t| scalar(p, t)).collect::<Result<Vec<_>, _>>()?;
        if entries.len() != n {
            return Err(CliError::Usage(format!("--j diag has {} entries, expected {}", entries.len(), n)));
        }
        Matrix::diagonal(&entries)
    } else if let Some(rest) = spec.strip_prefix("rows:") {
        let rows = rest
            .split(';')
            .map(|r| r.split(',').map(|t| scalar(p, t)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(CliError::Usage(format!("--j rows must be {}x{}", n, n)));
        }
        Matrix::from_rows(rows)
    } else {
        return Err(CliError::Usage("--j takes diag:... or rows:...".into()));
    };
    Endomorphism::new(m).map_err(input)
}

fn parse_enum_set(items: &[String]) -> Result<Vec<Rational>, CliError> {
    let ctx = parakahler::scalar::ParseContext::new();
    items
        .iter()
        .map(|t| {
            parse_scalar(t.trim(), &ctx)
                .ok()
                .and_then(|s| s.as_rational())
                .ok_or_else(|| CliError::Usage(format!("--enum-set entry `{}` is not a rational", t)))
        })
        .collect()
}

fn need<'a, T>(what: Option<&'a T>, p: &Problem, field: &str) -> Result<&'a T, CliError> {
    what.ok_or_else(|| CliError::Input(format!("{}: no {} given", p.name, field)))
}

fn algebra(p: &Problem) -> Result<&parakahler::lie::LieAlgebra, CliError> {
    p.algebra().map_err(input)
}

// Rendering helpers.

fn matrix_text(m: &Matrix<Scalar>) -> Vec<String> {
    m.to_string().lines().map(str::to_string).collect()
}

fn matrix_json(m: &Matrix<Scalar>) -> Value {
    json!(m.row_vecs().iter().map(|r| r.iter().map(Scalar::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn subspace_json(s: &Subspace<Scalar>) -> Value {
    json!(s
        .basis_vectors()
        .iter()
        .map(|v| v.iter().map(Scalar::to_string).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn chain_artifact(report: &mut Report, name: &str, chain: &IdealChain) {
    let text = chain.to_string().lines().map(str::to_string).collect();
    let data = json!({
        "dims": chain.dims(),
        "links": chain.links.iter().map(subspace_json).collect::<Vec<_>>(),
    });
    report.artifact(name, text, data);
}

fn dims(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
}

// validate

pub const CHECKS: &[&str] = &[
    "jacobi",
    "symplectic",
    "involution",
    "compat",
    "integrability",
    "nilpotent",
    "relations",
    "metric",
];

fn validate(report: &mut Report, p: &Problem, requested: Option<&[String]>) -> Result<(), CliError> {
    let explicit = requested.is_some();
    let names: Vec<String> = match requested {
        Some(list) => list.iter().map(|s| s.trim().to_lowercase()).collect(),
        None => CHECKS.iter().map(|s| s.to_string()).collect(),
    };
    for n in &names {
        if !CHECKS.contains(&n.as_str()) {
            return Err(CliError::Usage(format!("unknown check `{}` (known: {})", n, CHECKS.join(", "))));
        }
    }
    for name in &names {
        let needs_algebra = matches!(name.as_str(), "jacobi" | "symplectic" | "integrability" | "nilpotent" | "relations");
        let needs_omega = matches!(name.as_str(), "symplectic" | "compat" | "relations" | "metric");
        let needs_j = matches!(name.as_str(), "involution" | "compat" | "integrability" | "nilpotent" | "metric");
        let missing = if needs_algebra && p.algebra.is_none() {
            Some(p.algebra().map_err(input).unwrap_err().message().to_string())
        } else if needs_omega && p.omega.is_none() {
            Some("no omega".to_string())
        } else if needs_j && p.j.is_none() {
            Some("no J".to_string())
        } else if name == "metric" && p.metric.is_none() {
            Some("no reference metric".to_string())
        } else {
            None
        };
        if let Some(reason) = missing {
            if explicit {
                return Err(CliError::Input(format!("check `{}`: {}", name, reason)));
            }
            report.check(name, Status::Skip, reason);
            continue;
        }
        run_check(report, p, name)?;
    }
    Ok(())
}

fn run_check(report: &mut Report, p: &Problem, name: &str) -> Result<(), CliError> {
    let facts = &p.facts;
    match name {
        "jacobi" => {
            let r = algebra(p)?.constants().check_jacobi();
            report.check(name, Status::from_bool(r.passed()), format!("{} brackets", algebra(p)?.constants().nonzero_pairs().len()));
        }
        "symplectic" => {
            let r = check_symplectic(algebra(p)?, p.omega.as_ref().expect("checked")).map_err(input)?;
            let details = if r.passed() {
                "closed, nondegenerate".to_string()
            } else {
                format!("closed: {}, nondegenerate: {}, cocycle fails at {:?}", r.closed, r.nondegenerate, r.failures)
            };
            report.check(name, Status::from_bool(r.passed()), details);
        }
        "involution" => {
            let r = check_almost_paracomplex(p.j.as_ref().expect("checked"), facts).map_err(input)?;
            report.check(
                name,
                Status::from_bool(r.passed()),
                format!("J^2 = Id: {}, ranks (+{}, -{})", r.involutive, r.rank_plus, r.rank_minus),
            );
        }
        "compat" => {
            let w = p.omega.as_ref().expect("checked");
            let j = p.j.as_ref().expect("checked");
            let ok = check_compatible(w, j).map_err(input)?;
            let details = if ok {
                "omega(JX,JY) = -omega(X,Y)".to_string()
            } else {
                let res = compatibility_residual(w, j);
                let bad: Vec<String> = (0..p.dim)
                    .flat_map(|i| (0..p.dim).map(move |k| (i, k)))
                    .filter(|&(i, k)| i < k && !res[(i, k)].is_zero())
                    .take(4)
                    .map(|(i, k)| format!("({},{}): {}", i + 1, k + 1, res[(i, k)]))
                    .collect();
                format!("residual nonzero at {}", bad.join(", "))
            };
            report.check(name, Status::from_bool(ok), details);
        }
        "integrability" => {
            let l = algebra(p)?;
            let j = p.j.as_ref().expect("checked");
            let r = is_integrable(l, j).map_err(input)?;
            let mut details = format!(
                "Nijenhuis zero: {}, g+ subalgebra: {}, g- subalgebra: {}",
                r.nijenhuis_zero, r.plus_subalgebra, r.minus_subalgebra
            );
            if !r.nijenhuis_zero {
                let n = nijenhuis(l, j).map_err(input)?;
                let first: Vec<String> = n
                    .nonzero()
                    .into_iter()
                    .take(3)
                    .map(|(k, a, b)| format!("N^{}_{}{} = {}", k + 1, a + 1, b + 1, n.get(k, a, b)))
                    .collect();
                details.push_str(&format!("; {}", first.join(", ")));
            }
            report.check(name, Status::from_bool(r.integrable()), details);
        }
        "nilpotent" => {
            let l = algebra(p)?;
            let j = p.j.as_ref().expect("checked");
            let chain = j_invariant_chain(l, j).map_err(input)?;
            let ok = chain.last().is_full();
            report.check(name, Status::from_bool(ok), format!("a_k(J) dims ({})", dims(&chain.dims())));
        }
        "relations" => {
            let l = algebra(p)?;
            let w = p.omega.as_ref().expect("checked");
            let j = p.j.as_ref().filter(|j| check_almost_paracomplex(j, facts).is_ok_and(|r| r.involutive));
            for rel in check_subspace_relations(l, w, j).map_err(input)? {
                report.check(&format!("relation {}", rel.name), Status::from_bool(rel.holds), "");
            }
        }
        "metric" => metric_check(report, p)?,
        _ => unreachable!("names are validated"),
    }
    Ok(())
}

/// Compares `omega J` with the stored metric. Entries that depend on a
/// reconstructed entry of J are reported on their own.
fn metric_check(report: &mut Report, p: &Problem) -> Result<(), CliError> {
    let w = p.omega.as_ref().expect("checked");
    let j = p.j.as_ref().expect("checked");
    let reference = p.metric.as_ref().expect("checked");
    let g = match metric_from(w, j) {
        Ok(g) => g,
        Err(e) => {
            report.check("metric", Status::Fail, e.to_string());
            return Ok(());
        }
    };
    // g_ab = sum_k omega_ak J^k_b depends on J^r_c when b = c and omega_ar != 0.
    let reconstructed: Vec<(usize, usize)> = p
        .provenance
        .iter()
        .filter(|(_, v)| **v == Provenance::Reconstructed)
        .filter_map(|(k, _)| {
            let inner = k.strip_prefix("J[")?.strip_suffix(']')?;
            let (r, c) = inner.split_once(',')?;
            Some((r.trim().parse::<usize>().ok()? - 1, c.trim().parse::<usize>().ok()? - 1))
        })
        .collect();
    let depends = |a: usize, b: usize| {
        reconstructed.iter().any(|&(r, c)| {
            (b == c && !w.matrix()[(a, r)].is_zero()) || (a == c && !w.matrix()[(b, r)].is_zero())
        })
    };
    let mut mismatches = Vec::new();
    let mut rec_entries = Vec::new();
    let mut rec_mismatches = Vec::new();
    for a in 0..p.dim {
        for b in a..p.dim {
            let same = g.matrix()[(a, b)] == reference[(a, b)];
            if depends(a, b) {
                rec_entries.push(format!("({},{})", a + 1, b + 1));
                if !same {
                    rec_mismatches.push(format!("({},{})", a + 1, b + 1));
                }
            } else if !same {
                mismatches.push(format!("({},{}): computed {}, stored {}", a + 1, b + 1, g.matrix()[(a, b)], reference[(a, b)]));
            }
        }
    }
    let details = if mismatches.is_empty() {
        "omega J equals the stored metric".to_string()
    } else {
        mismatches.join("; ")
    };
    report.check("metric", Status::from_bool(mismatches.is_empty()), details);
    if !rec_entries.is_empty() {
        report.check(
            "metric (reconstructed entries)",
            Status::from_bool(rec_mismatches.is_empty()),
            format!("entries {} depend on reconstructed J data", rec_entries.join(", ")),
        );
    }
    report.artifact("metric omega J", matrix_text(g.matrix()), matrix_json(g.matrix()));
    Ok(())
}

// ideals

fn ideals(report: &mut Report, p: &Problem) -> Result<(), CliError> {
    let l = algebra(p)?;
    chain_artifact(report, "lower central series", &l.lower_central_series().map_err(input)?);
    chain_artifact(report, "ascending central series", &l.ascending_series().map_err(input)?);
    match &p.j {
        Some(j) if check_almost_paracomplex(j, &p.facts).is_ok_and(|r| r.involutive) => {
            let chain = j_invariant_chain(l, j).map_err(input)?;
            chain_artifact(report, "a_k(J)", &chain);
            report.check("J nilpotent", Status::from_bool(chain.last().is_full()), format!("dims ({})", dims(&chain.dims())));
        }
        Some(_) => report.check("J nilpotent", Status::Skip, "J is not involutive"),
        None => {}
    }
    Ok(())
}

// curvature

fn curvature(report: &mut Report, p: &Problem) -> Result<(), CliError> {
    let l = algebra(p)?;
    let w = need(p.omega.as_ref(), p, "omega")?;
    let j = need(p.j.as_ref(), p, "J")?;
    report.check("compatible", Status::from_bool(check_compatible(w, j).map_err(input)?), "");
    let integ = is_integrable(l, j).map_err(input)?;
    report.check("integrable", Status::from_bool(integ.integrable()), "");
    let g = metric_from(w, j).map_err(input)?;
    let conn = levi_civita(l, &g).map_err(input)?;
    let r = curvature_tensor(l, &conn).map_err(input)?;
    let ric = ricci(&r);
    report.artifact("metric", matrix_text(g.matrix()), matrix_json(g.matrix()));

    let n = p.dim;
    let mut gamma_text = Vec::new();
    let mut gamma_data = Vec::new();
    for i in 0..n {
        for jj in 0..n {
            for k in 0..n {
                let v = conn.gamma(k, i, jj);
                if !v.is_zero() {
                    gamma_text.push(format!("Gamma[{},{}]^{} = {}", i + 1, jj + 1, k + 1, v));
                    gamma_data.push(json!({"i": i + 1, "j": jj + 1, "k": k + 1, "value": v.to_string()}));
                }
            }
        }
    }
    report.artifact("christoffel symbols", gamma_text, json!(gamma_data));

    let comps = r.nonzero_components();
    let text = comps
        .iter()
        .map(|((ll, i, jj, k), v)| format!("R[{},{},{}]^{} = {}", i + 1, jj + 1, k + 1, ll + 1, v))
        .collect();
    let data: Vec<Value> = comps
        .iter()
        .map(|((ll, i, jj, k), v)| json!({"i": i + 1, "j": jj + 1, "k": k + 1, "l": ll + 1, "value": v.to_string()}))
        .collect();
    report.artifact("curvature", text, json!(data));

    let flat = ric.is_zero();
    let mut ric_text = matrix_text(&ric);
    ric_text.push(format!("Ricci-flat: {}", if flat { "yes" } else { "no" }));
    report.artifact("ricci", ric_text, json!({"matrix": matrix_json(&ric), "ricci_flat": flat}));

    let identity = check_parakahler_identity(&g, j, &r);
    report.check("para-Kaehler curvature identity", Status::from_bool(identity), "g(R(X,Y)Z,W) = -g(R(X,Y)JZ,JW)");

    if let Some(part) = &p.partition {
        let (a, b, c) = part.subspaces(n);
        let rep = check_decomposition(l, w, j, (&a, &b, &c)).map_err(input)?;
        let text: Vec<String> = rep
            .hypotheses
            .iter()
            .map(|h| format!("hypothesis {}: {}", h.name, h.holds))
            .chain(rep.conclusions.iter().map(|h| format!("conclusion {}: {}", h.name, h.holds)))
            .collect();
        report.artifact("decomposition", text, serde_json::to_value(&rep).expect("serialisable"));
        if rep.hypotheses_hold() {
            for c in &rep.conclusions {
                report.check(&format!("decomposition: {}", c.name), Status::from_bool(c.holds), "");
            }
        } else {
            report.check(
                "decomposition",
                Status::Skip,
                format!("hypothesis fails: {}", rep.first_failure().unwrap_or_default()),
            );
        }
    }
    Ok(())
}

// solve

fn trace_json(node: &TraceNode) -> Value {
    let steps: Vec<Value> = node
        .steps
        .iter()
        .map(|s| {
            let action = match &s.action {
                Action::Bind { var, value } => json!({"bind": {"var": var.to_string(), "value": value.to_string()}}),
                Action::Replace(p) => json!({"replace": p.to_string()}),
            };
            json!({"rule": s.rule.to_string(), "origin": s.origin.to_string(), "equation": s.equation.to_string(), "action": action})
        })
        .collect();
    let end = match &node.end {
        BranchEnd::Contradiction { rule, constants } => json!({"contradiction": {
            "rule": rule.to_string(),
            "equations": constants.iter().map(|(o, c)| json!({"origin": o.to_string(), "value": c.to_string()})).collect::<Vec<_>>(),
        }}),
        BranchEnd::Infeasible { fact } => json!({"infeasible": fact.to_string()}),
        BranchEnd::Split { origin, equation, children } => json!({"split": {
            "origin": origin.to_string(),
            "equation": equation.to_string(),
            "children": children.iter().map(|(b, c)| {
                let label = match b {
                    Branch::Factor(_) => "factor",
                    Branch::CoefficientZero(_) => "coefficient_zero",
                    Branch::CoefficientNonzero(_) => "coefficient_nonzero",
                };
                json!({"branch": label, "condition": b.to_string(), "node": trace_json(c)})
            }).collect::<Vec<_>>(),
        }}),
        BranchEnd::Solved { component, free } => json!({"solved": {
            "component": component,
            "free": free.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        }}),
        BranchEnd::Open { reason } => json!({"open": reason}),
    };
    json!({"steps": steps, "end": end})
}

fn cmd_solve(report: &mut Report, p: &Problem, budget: &Budget) -> Result<(), CliError> {
    let l = algebra(p)?;
    let w = need(p.omega.as_ref(), p, "omega")?;
    let sys = match prepare(l, w) {
        Ok(sys) => sys,
        Err(SolverError::NotSymplectic(msg)) => {
            report.check("symplectic", Status::Fail, msg);
            return Ok(());
        }
        Err(e) => return Err(input(e)),
    };
    report.check("symplectic", Status::Pass, "closed, nondegenerate");
    let subs: Vec<String> = sys.substitutions.iter().map(|(v, s)| format!("{} = {}", v, s)).collect();
    let mut layer = vec![format!(
        "{} unknowns, {} free after the compatibility equations, {} equations",
        sys.dim() * sys.dim(),
        sys.unknowns.len(),
        sys.equations.len()
    )];
    layer.extend(subs.iter().cloned());
    report.artifact(
        "compatibility layer",
        layer,
        json!({
            "unknowns": sys.dim() * sys.dim(),
            "free": sys.unknowns.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "equations": sys.equations.len(),
            "substitutions": sys.substitutions.iter().map(|(v, s)| json!({"var": v.to_string(), "value": s.to_string()})).collect::<Vec<_>>(),
            "J": matrix_json(&sys.j),
        }),
    );
    let out = solve(&sys, budget);
    match replay(&sys, &out.trace) {
        Ok(leaves) => report.check("trace replay", Status::Pass, format!("{} branch ends re-derived", leaves.len())),
        Err(e) => report.check("trace replay", Status::Fail, e.to_string()),
    }
    report.artifact(
        "trace",
        out.trace.to_string().lines().map(str::to_string).collect(),
        trace_json(&out.trace.root),
    );
    if let Some(j) = &out.witness {
        report.artifact("witness", matrix_text(j.matrix()), matrix_json(j.matrix()));
    }
    if !out.family.is_empty() {
        let mut text = Vec::new();
        let mut data = Vec::new();
        for (k, c) in out.family.iter().enumerate() {
            let free: Vec<String> = c.free.iter().map(|v| v.to_string()).collect();
            let facts: Vec<String> = c.facts.iter().map(|f| f.to_string()).collect();
            text.push(format!(
                "component {}: free {{{}}}{}",
                k + 1,
                free.join(", "),
                if facts.is_empty() { String::new() } else { format!(", nonzero {{{}}}", facts.join(", ")) }
            ));
            text.extend(c.j.to_string().lines().map(|l| format!("  {}", l)));
            data.push(json!({
                "free": free,
                "nonzero": facts,
                "bindings": c.bindings.iter().map(|(v, s)| json!({"var": v.to_string(), "value": s.to_string()})).collect::<Vec<_>>(),
                "J": matrix_json(&c.j),
            }));
        }
        report.artifact("family", text, json!(data));
    }
    let b = &out.budget;
    let mut btext = vec![format!("splits {}, enumeration candidates {}, steps {}", b.splits, b.enum_candidates, b.steps)];
    if let Some(reason) = &b.exhausted {
        btext.push(format!("exhausted: {}", reason));
    }
    report.artifact("budget", btext, serde_json::to_value(b).expect("serialisable"));
    report.verdict = Some(out.verdict);
    Ok(())
}

// ansatz

fn ansatz(report: &mut Report, p: &Problem) -> Result<(), CliError> {
    let l = algebra(p)?;
    let w = need(p.omega.as_ref(), p, "omega")?;
    let total = sign_diagonals(p.dim).len();
    let hits = ansatz_diag(l, w).map_err(input)?;
    let mut text = vec![format!("{} of {} trace-zero sign diagonals are para-Kaehler", hits.len(), total)];
    let mut data = Vec::new();
    for h in &hits {
        let signs: Vec<String> = h.signs.iter().map(i64::to_string).collect();
        text.push(format!(
            "diag({})  a_k(J) dims ({})  nilpotent: {}",
            signs.join(","),
            dims(&h.chain_dims),
            if h.nilpotent { "yes" } else { "no" }
        ));
        data.push(json!({"signs": h.signs, "chain_dims": h.chain_dims, "nilpotent": h.nilpotent}));
    }
    report.artifact("ansatz", text, json!({"candidates": total, "hits": data}));
    Ok(())
}

// catalog

fn catalog(report: &mut Report, action: &CatalogAction) -> Result<(), CliError> {
    match action {
        CatalogAction::List => {
            let mut text = Vec::new();
            let mut data = Vec::new();
            for name in BUILTIN_NAMES {
                let p = builtin(name).map_err(input)?;
                let tags: Vec<String> = p.provenance.iter().map(|(k, v)| format!("{}: {}", k, v)).collect();
                text.push(format!("{:<4} dim {}  {}", name, p.dim, tags.join(", ")));
                data.push(json!({"name": name, "dim": p.dim, "provenance": p.provenance}));
            }
            report.artifact("catalog", text, json!(data));
        }
        CatalogAction::Show { name } => {
            let p = builtin(name).map_err(|e| CliError::Usage(e.to_string()))?;
            let text = p.to_string().lines().map(str::to_string).collect();
            report.artifact(name, text, serde_json::to_value(p.to_file()).expect("serialisable"));
        }
    }
    Ok(())
}

// selfcheck

fn selfcheck(report: &mut Report, seed: u64, cases: usize, suites: Option<&[String]>) -> Result<(), CliError> {
    let names: Vec<String> = match suites {
        Some(list) => list.iter().map(|s| s.trim().to_string()).collect(),
        None => SUITES.iter().map(|s| s.to_string()).collect(),
    };
    for name in &names {
        let r = run_suite(name, seed, cases)
            .ok_or_else(|| CliError::Usage(format!("unknown suite `{}` (known: {})", name, SUITES.join(", "))))?;
        let mut details = format!("{} cases, seed {}, {} failed", r.cases, r.seed, r.failed);
        if let Some(first) = r.failures.first() {
            details.push_str(&format!("; {}", first));
        }
        report.check(&format!("suite {}", name), Status::from_bool(r.passed()), details);
    }
    Ok(())
}
