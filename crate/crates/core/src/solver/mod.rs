//! The polynomial system for an unknown para-complex structure `J` on a
//! fixed `(L, omega)`, and its decision by elimination tactics.
//!
//! Solutions are real: the square and sum-of-squares tactics use that a real
//! square vanishes only at zero.

mod ansatz;
mod search;
mod tactics;
mod trace;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lie::LieAlgebra;
use crate::linalg::{rref, LinalgError, Matrix};
use crate::para::{check_symplectic, nijenhuis_entry, Endomorphism, ParaError, TwoForm};
use crate::scalar::{Facts, Scalar, ScalarError, Var};

pub use ansatz::{ansatz_diag, sign_diagonals, AnsatzHit};
pub use search::{solve, Budget, BudgetReport, FamilyComponent, SolveOutcome, Verdict};
pub use tactics::{is_positive_definite_quadratic, is_sos_positive, Core};
pub use trace::{replay, Action, Branch, BranchEnd, DerivationTrace, ReplayError, ReplayLeaf, Rule, Step, TraceNode};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("omega is not symplectic: {0}")]
    NotSymplectic(String),
    #[error("compatibility elimination: {0}")]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Para(#[from] ParaError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("compatibility equation {0} is not linear in the unknowns")]
    Nonlinear(Origin),
}

/// Where an equation comes from. Indices are one-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    /// Entry `(i, j)` of `J^2 - Id`.
    Involution { i: usize, j: usize },
    /// Entry `(i, j)` of `J^T omega + omega J`.
    Compatibility { i: usize, j: usize },
    /// `N^k_ij`.
    Nijenhuis { k: usize, i: usize, j: usize },
    /// Leading coefficient of another equation, split off as its own case.
    Coefficient(Box<Origin>),
}

impl Origin {
    fn key(&self) -> Vec<usize> {
        match self {
            Origin::Involution { i, j } => vec![0, *i, *j],
            Origin::Compatibility { i, j } => vec![1, *i, *j],
            Origin::Nijenhuis { k, i, j } => vec![2, *i, *j, *k],
            Origin::Coefficient(p) => {
                let mut key = p.key();
                key.push(usize::MAX);
                key
            }
        }
    }
}

impl Ord for Origin {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Origin {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Involution { i, j } => write!(f, "involution({},{})", i, j),
            Origin::Compatibility { i, j } => write!(f, "compatibility({},{})", i, j),
            Origin::Nijenhuis { k, i, j } if *i < 10 && *j < 10 => write!(f, "N^{}_{}{}", k, i, j),
            Origin::Nijenhuis { k, i, j } => write!(f, "N^{}_{{{},{}}}", k, i, j),
            Origin::Coefficient(p) => write!(f, "coeff[{}]", p),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub origin: Origin,
    pub value: Scalar,
}

/// The system `J^2 = Id`, `J^T omega + omega J = 0`, `N_J = 0` in the entries
/// `psi_i_j` of `J`.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub algebra: LieAlgebra,
    pub omega: TwoForm,
    /// Remaining unknown entries, row-major.
    pub unknowns: Vec<Var>,
    pub parameters: Vec<Var>,
    /// Eliminated entries expressed in the remaining unknowns.
    pub substitutions: Vec<(Var, Scalar)>,
    /// `J` in terms of the remaining unknowns.
    pub j: Matrix<Scalar>,
    /// Sorted by origin.
    pub equations: Vec<Equation>,
    pub facts: Facts,
    pub parameter_constraints: Vec<String>,
}

impl ConstraintSystem {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn equation(&self, origin: &Origin) -> Option<&Equation> {
        self.equations.iter().find(|e| &e.origin == origin)
    }

    /// Entry `(i, j)` of the parameterized `J`, one-based.
    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.j[(i - 1, j - 1)]
    }

    pub fn has_compatibility(&self) -> bool {
        self.equations
            .iter()
            .any(|e| matches!(e.origin, Origin::Compatibility { .. }))
    }

    pub fn endomorphism(&self) -> Endomorphism {
        Endomorphism::new(self.j.clone()).expect("square")
    }
}

/// Builds the full system with all `n^2` entries unknown.
pub fn generate_constraints(l: &LieAlgebra, w: &TwoForm) -> Result<ConstraintSystem, SolverError> {
    let report = check_symplectic(l, w)?;
    if !report.passed() {
        return Err(SolverError::NotSymplectic(format!(
            "closed: {}, nondegenerate: {}, cocycle failures at {:?}",
            report.closed, report.nondegenerate, report.failures
        )));
    }
    let n = l.dim();
    let j = Matrix::from_fn(n, n, |r, c| Scalar::psi(r + 1, c + 1));
    let unknowns = (1..=n)
        .flat_map(|r| (1..=n).map(move |c| Var::psi(r, c)))
        .collect();
    let facts = l.facts().clone();
    let mut parameters: Vec<Var> = Vec::new();
    let brackets = l
        .constants()
        .nonzero_pairs()
        .into_iter()
        .flat_map(|(a, b)| l.constants().bracket_basis(a, b).to_vec());
    for e in w.matrix().entries().cloned().chain(brackets) {
        for v in e.vars() {
            if !v.is_psi() && !parameters.contains(&v) {
                parameters.push(v);
            }
        }
    }
    parameters.sort();
    let parameter_constraints = facts.iter().map(|f| format!("{} != 0", f)).collect();
    let mut sys = ConstraintSystem {
        algebra: l.clone(),
        omega: w.clone(),
        unknowns,
        parameters,
        substitutions: Vec::new(),
        j,
        equations: Vec::new(),
        facts,
        parameter_constraints,
    };
    sys.equations = equations_for(&sys.algebra, &sys.omega, &sys.j, true);
    Ok(sys)
}

/// Equations for a given (possibly parameterized) `J`, identically zero ones
/// dropped.
pub(crate) fn equations_for(l: &LieAlgebra, w: &TwoForm, j: &Matrix<Scalar>, compatibility: bool) -> Vec<Equation> {
    let n = l.dim();
    let mut out = Vec::new();
    let sq = j.mul(j);
    for r in 0..n {
        for c in 0..n {
            let mut v = sq[(r, c)].clone();
            if r == c {
                v = &v - &Scalar::one();
            }
            out.push(Equation {
                origin: Origin::Involution { i: r + 1, j: c + 1 },
                value: v,
            });
        }
    }
    if compatibility {
        let res = j.transpose().mul(w.matrix()).add(&w.matrix().mul(j));
        for r in 0..n {
            for c in r + 1..n {
                out.push(Equation {
                    origin: Origin::Compatibility { i: r + 1, j: c + 1 },
                    value: res[(r, c)].clone(),
                });
            }
        }
    }
    let end = Endomorphism::new(j.clone()).expect("square");
    for a in 0..n {
        for b in a + 1..n {
            for k in 0..n {
                out.push(Equation {
                    origin: Origin::Nijenhuis { k: k + 1, i: a + 1, j: b + 1 },
                    value: nijenhuis_entry(l, &end, k, a, b),
                });
            }
        }
    }
    out.retain(|e| !e.value.is_zero());
    out.sort_by(|a, b| a.origin.cmp(&b.origin));
    out
}

/// Solves the compatibility equations exactly. Columns are ordered with the
/// last row-major entry first, so later entries become the dependent ones.
pub fn parameterize_linear(sys: &ConstraintSystem) -> Result<ConstraintSystem, SolverError> {
    let compat: Vec<&Equation> = sys
        .equations
        .iter()
        .filter(|e| matches!(e.origin, Origin::Compatibility { .. }))
        .collect();
    let mut out = sys.clone();
    if compat.is_empty() {
        return Ok(out);
    }
    let cols: Vec<Var> = sys.unknowns.iter().rev().cloned().collect();
    let mut m = Matrix::<Scalar>::zeros(compat.len(), cols.len());
    for (r, e) in compat.iter().enumerate() {
        if !e.value.is_polynomial() {
            return Err(SolverError::Nonlinear(e.origin.clone()));
        }
        let p = e.value.numerator();
        for (c, v) in cols.iter().enumerate() {
            let cs = p.coefficients_in(v);
            match cs.len() {
                0 | 1 => {}
                2 => m[(r, c)] = Scalar::from_poly(cs[1].clone()),
                _ => return Err(SolverError::Nonlinear(e.origin.clone())),
            }
        }
    }
    let red = rref(&m, &sys.facts)?;
    let free: Vec<usize> = (0..cols.len()).filter(|c| !red.pivots.contains(c)).collect();
    let mut bindings = BTreeMap::new();
    for (r, &p) in red.pivots.iter().enumerate() {
        let mut value = Scalar::zero();
        for &f in &free {
            let a = &red.reduced[(r, f)];
            if !a.is_zero() {
                value = &value - &(a * &Scalar::var(cols[f].clone()));
            }
        }
        bindings.insert(cols[p].clone(), value);
    }
    let facts = sys.facts.clone();
    out.j = sys.j.try_map(|e| e.substitute(&bindings, &facts))?;
    out.substitutions = sys
        .substitutions
        .iter()
        .map(|(v, s)| Ok((v.clone(), s.substitute(&bindings, &facts)?)))
        .collect::<Result<Vec<_>, ScalarError>>()?;
    out.substitutions.extend(bindings.into_iter());
    out.substitutions.sort_by(|a, b| a.0.cmp(&b.0));
    out.unknowns = sys
        .unknowns
        .iter()
        .filter(|v| !out.substitutions.iter().any(|(w, _)| w == *v))
        .cloned()
        .collect();
    let all = equations_for(&out.algebra, &out.omega, &out.j, true);
    if let Some(e) = all.iter().find(|e| matches!(e.origin, Origin::Compatibility { .. })) {
        return Err(SolverError::Nonlinear(e.origin.clone()));
    }
    out.equations = all;
    Ok(out)
}

/// Both steps: the system ready for [`solve`].
pub fn prepare(l: &LieAlgebra, w: &TwoForm) -> Result<ConstraintSystem, SolverError> {
    parameterize_linear(&generate_constraints(l, w)?)
}
