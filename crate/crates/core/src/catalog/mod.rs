//! Problem files: a Lie algebra with optional symplectic form, operator,
//! metric and decomposition, plus parameter declarations.

mod builtin;
mod schema;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::lie::{LieAlgebra, LieError, StructureConstants};
use crate::linalg::{Matrix, Subspace};
use crate::para::{Endomorphism, ParaError, TwoForm};
use crate::scalar::{parse_polynomial, parse_scalar, Facts, ParseContext, Polynomial, Scalar, ScalarError};

pub use builtin::{builtin, BUILTIN_NAMES};
pub use schema::{BracketEntry, OmegaEntry, ParamEntry, PartitionEntry, ProblemFile, Provenance};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{path}: line {line}, column {column}: {message}")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {source}")]
    Expression {
        field: String,
        #[source]
        source: ScalarError,
    },
    #[error("{0}")]
    Dimension(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Para(#[from] ParaError),
    #[error("unknown builtin `{0}` (known: G1, G6, G21)")]
    UnknownBuiltin(String),
    #[error("{problem}: {field} not available (external-required); supply it with --brackets-file")]
    ExternalRequired { problem: String, field: String },
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub name: String,
    pub nonzero: Vec<Polynomial>,
}

/// Zero-based index triples of a decomposition `g = A + B + C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

impl Partition {
    pub fn subspaces(&self, n: usize) -> (Subspace<Scalar>, Subspace<Scalar>, Subspace<Scalar>) {
        (
            Subspace::coordinate(n, &self.a),
            Subspace::coordinate(n, &self.b),
            Subspace::coordinate(n, &self.c),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub name: String,
    pub dim: usize,
    /// `None` when the brackets are not known yet.
    pub algebra: Option<LieAlgebra>,
    pub omega: Option<TwoForm>,
    pub j: Option<Endomorphism>,
    pub metric: Option<Matrix<Scalar>>,
    pub partition: Option<Partition>,
    pub params: Vec<Param>,
    pub facts: Facts,
    pub provenance: BTreeMap<String, Provenance>,
}

impl Problem {
    pub fn algebra(&self) -> Result<&LieAlgebra, CatalogError> {
        self.algebra.as_ref().ok_or_else(|| CatalogError::ExternalRequired {
            problem: self.name.clone(),
            field: "brackets".into(),
        })
    }

    pub fn context(&self) -> ParseContext {
        context_for(self.dim, &self.params.iter().map(|p| p.name.clone()).collect::<Vec<_>>(), &self.facts)
    }

    pub fn provenance_of(&self, field: &str) -> Option<Provenance> {
        self.provenance.get(field).copied()
    }

    /// Fills in brackets from another file (only its `dim` and `brackets`
    /// are read) and tags them as user-supplied.
    pub fn complete_brackets(&mut self, file: &ProblemFile) -> Result<(), CatalogError> {
        if file.dim != self.dim {
            return Err(CatalogError::Dimension(format!(
                "brackets file has dim {}, problem has dim {}",
                file.dim, self.dim
            )));
        }
        let entries = file.brackets.as_ref().ok_or_else(|| CatalogError::ExternalRequired {
            problem: file.name.clone(),
            field: "brackets".into(),
        })?;
        self.algebra = Some(build_algebra(self.dim, entries, &self.context(), &self.facts)?);
        self.provenance.insert("brackets".into(), Provenance::User);
        Ok(())
    }

    pub fn from_file(file: &ProblemFile) -> Result<Problem, CatalogError> {
        let n = file.dim;
        if n == 0 {
            return Err(CatalogError::Dimension("dim must be positive".into()));
        }
        let names: Vec<String> = file.params.iter().map(|p| p.name.clone()).collect();
        let base = context_for(n, &names, &Facts::new());
        let mut facts = Facts::new();
        let mut params = Vec::new();
        for p in &file.params {
            let mut nonzero = Vec::new();
            for (k, text) in p.nonzero.iter().enumerate() {
                let poly = parse_polynomial(text, &base).map_err(|e| expr_err(format!("params.{}.nonzero[{}]", p.name, k), e))?;
                if !facts.declare(&poly) {
                    return Err(CatalogError::Dimension(format!("parameter `{}` declared nonzero as 0", p.name)));
                }
                nonzero.push(poly);
            }
            params.push(Param {
                name: p.name.clone(),
                nonzero,
            });
        }
        let ctx = context_for(n, &names, &facts);
        let algebra = match &file.brackets {
            Some(entries) => Some(build_algebra(n, entries, &ctx, &facts)?),
            None => None,
        };
        let omega = match &file.omega {
            Some(entries) => {
                let mut terms = Vec::new();
                for (k, e) in entries.iter().enumerate() {
                    check_index(n, e.i, e.j, &format!("omega[{}]", k))?;
                    let c = parse_scalar(&e.coeff, &ctx).map_err(|err| expr_err(format!("omega[{}]", k), err))?;
                    terms.push((e.i - 1, e.j - 1, c));
                }
                Some(TwoForm::from_wedges(n, &terms))
            }
            None => None,
        };
        let j = match &file.j {
            Some(entries) => Some(Endomorphism::new(parse_matrix(n, entries, &ctx, "J")?)?),
            None => None,
        };
        let metric = match &file.metric {
            Some(entries) => Some(parse_matrix(n, entries, &ctx, "metric")?),
            None => None,
        };
        let partition = match &file.partition {
            Some(p) => {
                let mut seen = vec![false; n];
                for &k in p.a.iter().chain(&p.b).chain(&p.c) {
                    if k == 0 || k > n || seen[k - 1] {
                        return Err(CatalogError::Dimension(format!("partition index {} invalid or repeated", k)));
                    }
                    seen[k - 1] = true;
                }
                let zb = |v: &Vec<usize>| v.iter().map(|k| k - 1).collect();
                Some(Partition {
                    a: zb(&p.a),
                    b: zb(&p.b),
                    c: zb(&p.c),
                })
            }
            None => None,
        };
        Ok(Problem {
            name: file.name.clone(),
            dim: n,
            algebra,
            omega,
            j,
            metric,
            partition,
            params,
            facts,
            provenance: file.provenance.clone(),
        })
    }

    pub fn to_file(&self) -> ProblemFile {
        let n = self.dim;
        let brackets = self.algebra.as_ref().map(|l| {
            l.constants()
                .nonzero_pairs()
                .into_iter()
                .map(|(i, j)| BracketEntry {
                    i: i + 1,
                    j: j + 1,
                    coeffs: l.constants().bracket_basis(i, j).iter().map(Scalar::to_string).collect(),
                })
                .collect()
        });
        let omega = self.omega.as_ref().map(|w| {
            w.wedges()
                .into_iter()
                .map(|(i, j, c)| OmegaEntry {
                    i: i + 1,
                    j: j + 1,
                    coeff: c.to_string(),
                })
                .collect()
        });
        let strings = |m: &Matrix<Scalar>| m.entries().map(Scalar::to_string).collect::<Vec<_>>();
        let ob = |v: &Vec<usize>| v.iter().map(|k| k + 1).collect();
        ProblemFile {
            name: self.name.clone(),
            dim: n,
            brackets,
            omega,
            j: self.j.as_ref().map(|j| strings(j.matrix())),
            metric: self.metric.as_ref().map(strings),
            partition: self.partition.as_ref().map(|p| PartitionEntry {
                a: ob(&p.a),
                b: ob(&p.b),
                c: ob(&p.c),
            }),
            params: self
                .params
                .iter()
                .map(|p| ParamEntry {
                    name: p.name.clone(),
                    nonzero: p.nonzero.iter().map(Polynomial::to_string).collect(),
                })
                .collect(),
            provenance: self.provenance.clone(),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (dim {})", self.name, self.dim)?;
        match &self.algebra {
            Some(l) => writeln!(f, "  brackets: {}", l)?,
            None => writeln!(f, "  brackets: external-required")?,
        }
        if let Some(w) = &self.omega {
            let terms: Vec<String> = w
                .wedges()
                .iter()
                .map(|(i, j, c)| format!("({})*e{}^e{}", c, i + 1, j + 1))
                .collect();
            writeln!(f, "  omega: {}", terms.join(" + "))?;
        }
        if let Some(j) = &self.j {
            write!(f, "  J:\n{}", indent(&j.matrix().to_string()))?;
        }
        if let Some(g) = &self.metric {
            write!(f, "  metric:\n{}", indent(&g.to_string()))?;
        }
        if let Some(p) = &self.partition {
            let ob = |v: &Vec<usize>| v.iter().map(|k| format!("e{}", k + 1)).collect::<Vec<_>>().join(",");
            writeln!(f, "  partition: A={{{}}} B={{{}}} C={{{}}}", ob(&p.a), ob(&p.b), ob(&p.c))?;
        }
        for p in &self.params {
            let nz: Vec<String> = p.nonzero.iter().map(|q| format!("{} != 0", q)).collect();
            if nz.is_empty() {
                writeln!(f, "  param {}", p.name)?;
            } else {
                writeln!(f, "  param {}: {}", p.name, nz.join(", "))?;
            }
        }
        for (field, tag) in &self.provenance {
            writeln!(f, "  provenance {}: {}", field, tag)?;
        }
        Ok(())
    }
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("    {}\n", l)).collect()
}

fn context_for(n: usize, names: &[String], facts: &Facts) -> ParseContext {
    names
        .iter()
        .fold(ParseContext::new().with_dim(n), |c, name| c.with_param(name))
        .with_facts(facts.clone())
}

fn expr_err(field: String, source: ScalarError) -> CatalogError {
    CatalogError::Expression { field, source }
}

fn check_index(n: usize, i: usize, j: usize, field: &str) -> Result<(), CatalogError> {
    if i == 0 || j == 0 || i > n || j > n || i == j {
        return Err(CatalogError::Dimension(format!("{}: index pair ({}, {}) invalid for dim {}", field, i, j, n)));
    }
    Ok(())
}

fn build_algebra(n: usize, entries: &[BracketEntry], ctx: &ParseContext, facts: &Facts) -> Result<LieAlgebra, CatalogError> {
    let mut c = StructureConstants::new(n);
    for (k, e) in entries.iter().enumerate() {
        let field = format!("brackets[{}]", k);
        check_index(n, e.i, e.j, &field)?;
        if e.coeffs.len() != n {
            return Err(CatalogError::Dimension(format!("{}: {} coefficients for dim {}", field, e.coeffs.len(), n)));
        }
        let v = e
            .coeffs
            .iter()
            .map(|s| parse_scalar(s, ctx))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|err| expr_err(field, err))?;
        c.set(e.i - 1, e.j - 1, v)?;
    }
    Ok(LieAlgebra::new(c, facts.clone())?)
}

fn parse_matrix(n: usize, entries: &[String], ctx: &ParseContext, what: &str) -> Result<Matrix<Scalar>, CatalogError> {
    if entries.len() != n * n {
        return Err(CatalogError::Dimension(format!("{} has {} entries, expected {}", what, entries.len(), n * n)));
    }
    let vals = entries
        .iter()
        .enumerate()
        .map(|(k, s)| parse_scalar(s, ctx).map_err(|e| expr_err(format!("{}[{},{}]", what, k / n + 1, k % n + 1), e)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_fn(n, n, |i, j| vals[i * n + j].clone()))
}

pub fn parse_problem(text: &str, origin: &str) -> Result<Problem, CatalogError> {
    Problem::from_file(&parse_problem_file(text, origin)?)
}

pub fn parse_problem_file(text: &str, origin: &str) -> Result<ProblemFile, CatalogError> {
    serde_json::from_str(text).map_err(|e| CatalogError::Syntax {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn load_problem_file(path: &Path) -> Result<ProblemFile, CatalogError> {
    let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io(path.display().to_string(), e))?;
    parse_problem_file(&text, &path.display().to_string())
}

pub fn load_problem(path: &Path) -> Result<Problem, CatalogError> {
    Problem::from_file(&load_problem_file(path)?)
}

pub fn to_json(problem: &Problem) -> String {
    serde_json::to_string_pretty(&problem.to_file()).expect("problem files serialise")
}

pub fn save_problem(problem: &Problem, path: &Path) -> Result<(), CatalogError> {
    std::fs::write(path, to_json(problem) + "\n").map_err(|e| CatalogError::Io(path.display().to_string(), e))
}
