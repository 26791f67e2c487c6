use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::search::{Applied, State};
use super::tactics::{positive_everywhere, Core};
use super::{ConstraintSystem, Equation, Origin};
use crate::scalar::{as_perfect_square, Polynomial, Scalar, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    SquareForce,
    LinearSubst,
    SosUnsat,
    ConstUnsat,
    CaseSplit,
    EnumTry,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::SquareForce => "square_force",
            Rule::LinearSubst => "linear_subst",
            Rule::SosUnsat => "sos_unsat",
            Rule::ConstUnsat => "const_unsat",
            Rule::CaseSplit => "case_split",
            Rule::EnumTry => "enum_try",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Action {
    Bind { var: Var, value: Scalar },
    /// The equation is replaced by a polynomial with the same real zeros.
    Replace(Scalar),
}

/// One deduction: `rule` applied to the equation tagged `origin`, whose
/// value at that point was `equation`.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub rule: Rule,
    pub origin: Origin,
    pub equation: Scalar,
    pub action: Action,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Branch {
    /// The split equation is replaced by this factor.
    Factor(Polynomial),
    /// This coefficient is added as an equation.
    CoefficientZero(Polynomial),
    /// This coefficient is declared nonzero.
    CoefficientNonzero(Polynomial),
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Factor(p) | Branch::CoefficientZero(p) => write!(f, "{} = 0", p),
            Branch::CoefficientNonzero(p) => write!(f, "{} != 0", p),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BranchEnd {
    /// Each listed equation is a nonzero constant times declared-nonzero
    /// factors (`const_unsat`), or positive everywhere (`sos_unsat`).
    Contradiction { rule: Rule, constants: Vec<(Origin, Scalar)> },
    /// A binding sent a declared-nonzero polynomial to zero.
    Infeasible { fact: Polynomial },
    Split {
        origin: Origin,
        equation: Scalar,
        children: Vec<(Branch, TraceNode)>,
    },
    /// No equations left; `component` indexes the outcome's family list.
    Solved { component: usize, free: Vec<Var> },
    Open { reason: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceNode {
    pub steps: Vec<Step>,
    pub end: BranchEnd,
}

impl TraceNode {
    pub(crate) fn leaves<'a>(&'a self, out: &mut Vec<&'a BranchEnd>) {
        match &self.end {
            BranchEnd::Split { children, .. } => {
                for (_, c) in children {
                    c.leaves(out);
                }
            }
            end => out.push(end),
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        let pad = "  ".repeat(indent);
        for s in &self.steps {
            writeln!(f, "{}{}", pad, s)?;
        }
        match &self.end {
            BranchEnd::Contradiction { rule, constants } => {
                for (o, c) in constants {
                    match rule {
                        Rule::SosUnsat => writeln!(f, "{}{} {}: {} > 0 everywhere", pad, rule, o, c)?,
                        _ => writeln!(f, "{}{} {}: constant {} \u{2260} 0", pad, rule, o, c)?,
                    }
                }
            }
            BranchEnd::Infeasible { fact } => writeln!(f, "{}const_unsat: declared nonzero {} vanishes", pad, fact)?,
            BranchEnd::Split {
                origin,
                equation,
                children,
            } => {
                writeln!(f, "{}case_split {}: {}", pad, origin, equation)?;
                for (k, (label, child)) in children.iter().enumerate() {
                    writeln!(f, "{}  [{}] {}", pad, k + 1, label)?;
                    child.write(f, indent + 2)?;
                }
            }
            BranchEnd::Solved { free, .. } if free.is_empty() => writeln!(f, "{}solved: witness", pad)?,
            BranchEnd::Solved { free, .. } => {
                let names: Vec<String> = free.iter().map(|v| v.to_string()).collect();
                writeln!(f, "{}solved: family in {}", pad, names.join(", "))?
            }
            BranchEnd::Open { reason } => writeln!(f, "{}open: {}", pad, reason)?,
        }
        Ok(())
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {} = 0 => ", self.rule, self.origin, self.equation)?;
        match &self.action {
            Action::Bind { var, value } => write!(f, "{} = {}", var, value),
            Action::Replace(p) => write!(f, "{} = 0", p),
        }
    }
}

/// The derivation tree: steps along each branch, case splits as children.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivationTrace {
    pub root: TraceNode,
}

impl DerivationTrace {
    /// Every step in depth-first order.
    pub fn steps(&self) -> Vec<&Step> {
        fn walk<'a>(n: &'a TraceNode, out: &mut Vec<&'a Step>) {
            out.extend(n.steps.iter());
            if let BranchEnd::Split { children, .. } = &n.end {
                for (_, c) in children {
                    walk(c, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    pub fn leaves(&self) -> Vec<&BranchEnd> {
        let mut out = Vec::new();
        self.root.leaves(&mut out);
        out
    }
}

impl fmt::Display for DerivationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.write(f, 0)
    }
}

impl BranchEnd {
    pub fn is_contradiction(&self) -> bool {
        matches!(self, BranchEnd::Contradiction { .. } | BranchEnd::Infeasible { .. })
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ReplayError {
    #[error("step {step}: no equation {origin}")]
    Missing { step: usize, origin: Origin },
    #[error("step {step}: equation {origin} is {actual}, trace records {recorded}")]
    Mismatch {
        step: usize,
        origin: Origin,
        actual: String,
        recorded: String,
    },
    #[error("step {step}: {rule} does not justify the deduction on {origin}")]
    Unjustified { step: usize, rule: Rule, origin: Origin },
    #[error("step {step}: substitution failed: {message}")]
    Substitution { step: usize, message: String },
    #[error("branch end does not hold: {0}")]
    End(String),
}

/// A branch end reached by replay, with the bindings along its path.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplayLeaf {
    pub bindings: BTreeMap<Var, Scalar>,
    pub end: BranchEnd,
}

impl ReplayLeaf {
    pub fn binding(&self, v: &Var) -> Option<&Scalar> {
        self.bindings.get(v)
    }
}

/// Re-derives the trace from the prepared system, checking that every
/// recorded equation is reproduced exactly and every deduction follows from
/// its rule.
pub fn replay(sys: &ConstraintSystem, trace: &DerivationTrace) -> Result<Vec<ReplayLeaf>, ReplayError> {
    let mut out = Vec::new();
    let mut counter = 0;
    replay_node(State::initial(sys), &trace.root, &mut counter, &mut out)?;
    Ok(out)
}

fn replay_node(
    mut state: State,
    node: &TraceNode,
    counter: &mut usize,
    out: &mut Vec<ReplayLeaf>,
) -> Result<(), ReplayError> {
    for step in &node.steps {
        *counter += 1;
        let n = *counter;
        let idx = locate(&state, n, &step.origin, &step.equation)?;
        let core = Core::of(&state.equations[idx].value, &state.facts);
        let unjustified = || ReplayError::Unjustified {
            step: n,
            rule: step.rule,
            origin: step.origin.clone(),
        };
        let justified = match (&step.rule, &step.action) {
            (Rule::SquareForce, Action::Bind { var, value }) => {
                let (_, root) = as_perfect_square(&core.poly).ok_or_else(unjustified)?;
                solves(&root, var, value, &state)
            }
            (Rule::SquareForce, Action::Replace(p)) => as_perfect_square(&core.poly).is_some_and(|(_, r)| &Scalar::from_poly(r) == p),
            (Rule::LinearSubst, Action::Bind { var, value }) => {
                core.poly.linear_in(var).is_some_and(|(a, _)| state.facts.certifies(&a)) && solves(&core.poly, var, value, &state)
            }
            (Rule::CaseSplit, Action::Replace(p)) => p.is_polynomial() && single_factor(&core.poly, p.numerator()),
            (Rule::EnumTry, Action::Bind { var, value }) => value.as_rational().is_some() && core.poly.contains_var(var),
            _ => false,
        };
        if !justified {
            return Err(unjustified());
        }
        let applied = match &step.action {
            Action::Bind { var, value } => state.bind(var, value),
            Action::Replace(p) => {
                state.replace(idx, p.numerator().clone());
                Ok(Applied::Ok)
            }
        };
        match applied {
            Ok(Applied::Ok) => {}
            Ok(Applied::Infeasible(f)) => {
                return match &node.end {
                    BranchEnd::Infeasible { fact } if *fact == f => {
                        out.push(ReplayLeaf {
                            bindings: state.bindings.clone(),
                            end: node.end.clone(),
                        });
                        Ok(())
                    }
                    _ => Err(ReplayError::End(format!("unexpected vanishing of {}", f))),
                };
            }
            Err(e) => {
                return Err(ReplayError::Substitution {
                    step: n,
                    message: e.to_string(),
                })
            }
        }
    }
    match &node.end {
        BranchEnd::Contradiction { rule, constants } => {
            if constants.is_empty() {
                return Err(ReplayError::End("contradiction without equations".into()));
            }
            for (o, c) in constants {
                let idx = locate(&state, *counter, o, c)?;
                let core = Core::of(&state.equations[idx].value, &state.facts);
                let holds = match rule {
                    Rule::ConstUnsat => core.is_contradiction(),
                    Rule::SosUnsat => positive_everywhere(&core.poly),
                    _ => false,
                };
                if !holds {
                    return Err(ReplayError::End(format!("{} on {} does not hold", rule, o)));
                }
            }
        }
        BranchEnd::Infeasible { fact } => {
            return Err(ReplayError::End(format!("{} was recorded as vanishing but did not", fact)));
        }
        BranchEnd::Split {
            origin,
            equation,
            children,
        } => {
            let idx = locate(&state, *counter, origin, equation)?;
            let core = Core::of(&state.equations[idx].value, &state.facts);
            check_split(&core.poly, children)?;
            for (label, child) in children {
                let mut st = state.clone();
                match label {
                    Branch::Factor(f) => st.replace(idx, f.clone()),
                    Branch::CoefficientZero(a) => st.push(Equation {
                        origin: Origin::Coefficient(Box::new(origin.clone())),
                        value: Scalar::from_poly(a.clone()),
                    }),
                    Branch::CoefficientNonzero(a) => {
                        st.facts.declare(a);
                    }
                }
                replay_node(st, child, counter, out)?;
            }
            return Ok(());
        }
        BranchEnd::Solved { .. } => {
            if !state.equations.is_empty() {
                return Err(ReplayError::End(format!("{} equations remain at a solved leaf", state.equations.len())));
            }
        }
        BranchEnd::Open { .. } => {}
    }
    out.push(ReplayLeaf {
        bindings: state.bindings,
        end: node.end.clone(),
    });
    Ok(())
}

fn locate(state: &State, step: usize, origin: &Origin, recorded: &Scalar) -> Result<usize, ReplayError> {
    let idx = state.find(origin).ok_or_else(|| ReplayError::Missing {
        step,
        origin: origin.clone(),
    })?;
    let actual = &state.equations[idx].value;
    if actual != recorded {
        return Err(ReplayError::Mismatch {
            step,
            origin: origin.clone(),
            actual: actual.to_string(),
            recorded: recorded.to_string(),
        });
    }
    Ok(idx)
}

fn solves(p: &Polynomial, var: &Var, value: &Scalar, state: &State) -> bool {
    let b: BTreeMap<Var, Scalar> = [(var.clone(), value.clone())].into();
    Scalar::from_poly(p.clone())
        .substitute(&b, &state.facts)
        .is_ok_and(|s| s.is_zero())
}

/// `p` is a unit times a power of `f`.
fn single_factor(p: &Polynomial, f: &Polynomial) -> bool {
    if f.is_constant() {
        return false;
    }
    let mut rest = p.clone();
    while let Some(q) = rest.div_exact(f) {
        rest = q;
    }
    rest.is_constant()
}

/// Factor branches must divide the core and exhaust it; coefficient
/// branches must name a coefficient of a linear occurrence.
fn check_split(core: &Polynomial, children: &[(Branch, TraceNode)]) -> Result<(), ReplayError> {
    let factors: Vec<&Polynomial> = children
        .iter()
        .filter_map(|(b, _)| match b {
            Branch::Factor(f) => Some(f),
            _ => None,
        })
        .collect();
    if !factors.is_empty() {
        let mut rest = core.clone();
        for f in &factors {
            let mut hit = false;
            while let Some(q) = rest.div_exact(f) {
                rest = q;
                hit = true;
            }
            if !hit || f.is_constant() {
                return Err(ReplayError::End(format!("{} does not divide {}", f, core)));
            }
        }
        if !rest.is_constant() {
            return Err(ReplayError::End(format!("factors leave {} of {}", rest, core)));
        }
        return Ok(());
    }
    let coeffs: Vec<&Polynomial> = children
        .iter()
        .filter_map(|(b, _)| match b {
            Branch::CoefficientZero(a) | Branch::CoefficientNonzero(a) => Some(a),
            _ => None,
        })
        .collect();
    let ok = coeffs.len() == 2
        && coeffs[0] == coeffs[1]
        && core
            .vars()
            .iter()
            .any(|v| core.linear_in(v).is_some_and(|(a, _)| &a == coeffs[0]));
    if ok {
        Ok(())
    } else {
        Err(ReplayError::End("coefficient split does not match the equation".into()))
    }
}
