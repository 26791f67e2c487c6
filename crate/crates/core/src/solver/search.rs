use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::tactics::{positive_everywhere, Core};
use super::trace::{Action, Branch, BranchEnd, DerivationTrace, Rule, Step, TraceNode};
use super::{ConstraintSystem, Equation, Origin};
use crate::linalg::Matrix;
use crate::para::{check_almost_paracomplex, check_compatible, is_integrable, Endomorphism};
use crate::scalar::{ratio, Facts, Polynomial, Rational, Scalar, ScalarError, Var};

#[derive(Clone, Debug, PartialEq)]
pub struct Budget {
    /// Total case splits over the whole search.
    pub max_splits: usize,
    /// Nested case splits along one branch.
    pub max_depth: usize,
    pub enum_set: Vec<Rational>,
    /// Total candidate points tried by enumeration.
    pub max_enum_candidates: usize,
    pub time: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_splits: 256,
            max_depth: 8,
            enum_set: default_enum_set(),
            max_enum_candidates: 10_000,
            time: Some(Duration::from_secs(120)),
        }
    }
}

pub fn default_enum_set() -> Vec<Rational> {
    [(0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2)]
        .iter()
        .map(|&(n, d)| ratio(n, d))
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub splits: usize,
    pub enum_candidates: usize,
    pub steps: usize,
    pub exhausted: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Witness,
    Family,
    Unsat,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Witness => "witness",
            Verdict::Family => "family",
            Verdict::Unsat => "unsat",
            Verdict::Unknown => "unknown",
        })
    }
}

/// One solved branch: every eliminated entry in terms of the free ones.
#[derive(Clone, Debug)]
pub struct FamilyComponent {
    pub bindings: Vec<(Var, Scalar)>,
    pub free: Vec<Var>,
    pub facts: Facts,
    pub j: Matrix<Scalar>,
    /// Specialization of the free unknowns that passed validation.
    pub sample: Option<Endomorphism>,
}

impl FamilyComponent {
    /// `J` at the given values of the free unknowns, or `None` if a
    /// denominator or declared-nonzero factor vanishes there.
    pub fn specialize(&self, point: &BTreeMap<Var, Rational>) -> Option<Matrix<Scalar>> {
        if self.facts.violated_by(point).is_some() {
            return None;
        }
        let b: BTreeMap<Var, Scalar> = point
            .iter()
            .map(|(v, q)| (v.clone(), Scalar::from_rational(q.clone())))
            .collect();
        self.j.try_map(|e| e.substitute(&b, &self.facts)).ok()
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub verdict: Verdict,
    pub witness: Option<Endomorphism>,
    pub family: Vec<FamilyComponent>,
    pub trace: DerivationTrace,
    pub budget: BudgetReport,
}

#[derive(Clone, Debug)]
pub(crate) struct State {
    pub bindings: BTreeMap<Var, Scalar>,
    pub equations: Vec<Equation>,
    pub facts: Facts,
}

/// What applying a binding can run into besides success.
pub(crate) enum Applied {
    Ok,
    /// A declared-nonzero polynomial became zero.
    Infeasible(Polynomial),
}

impl State {
    pub fn initial(sys: &ConstraintSystem) -> State {
        State {
            bindings: BTreeMap::new(),
            equations: sys.equations.clone(),
            facts: sys.facts.clone(),
        }
    }

    pub fn find(&self, origin: &Origin) -> Option<usize> {
        self.equations.iter().position(|e| &e.origin == origin)
    }

    pub fn bind(&mut self, v: &Var, value: &Scalar) -> Result<Applied, ScalarError> {
        let b: BTreeMap<Var, Scalar> = [(v.clone(), value.clone())].into();
        let mut facts = Facts::new();
        for f in self.facts.iter() {
            let g = Scalar::from_poly(f.clone()).substitute(&b, &self.facts)?;
            if g.is_zero() {
                return Ok(Applied::Infeasible(f.clone()));
            }
            facts.declare(g.numerator());
        }
        let old = std::mem::replace(&mut self.facts, facts);
        let both = old.union(&self.facts);
        for e in &mut self.equations {
            e.value = e.value.substitute(&b, &both)?;
        }
        self.equations.retain(|e| !e.value.is_zero());
        for s in self.bindings.values_mut() {
            *s = s.substitute(&b, &both)?;
        }
        self.bindings.insert(v.clone(), value.clone());
        Ok(Applied::Ok)
    }

    pub fn replace(&mut self, idx: usize, value: Polynomial) {
        self.equations[idx].value = Scalar::from_poly(value);
    }

    pub fn push(&mut self, e: Equation) {
        self.equations.push(e);
        self.equations.sort_by(|a, b| a.origin.cmp(&b.origin));
    }

    pub fn cores(&self) -> Vec<Core> {
        self.equations.iter().map(|e| Core::of(&e.value, &self.facts)).collect()
    }

    pub fn active_unknowns(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .equations
            .iter()
            .flat_map(|e| e.value.vars())
            .filter(Var::is_psi)
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

struct Search<'a> {
    sys: &'a ConstraintSystem,
    budget: &'a Budget,
    report: BudgetReport,
    start: Instant,
    components: Vec<FamilyComponent>,
    witness: Option<Endomorphism>,
}

const MAX_STEPS: usize = 100_000;

/// Decides a system whose compatibility layer is already eliminated.
pub fn solve(sys: &ConstraintSystem, budget: &Budget) -> SolveOutcome {
    let mut search = Search {
        sys,
        budget,
        report: BudgetReport::default(),
        start: Instant::now(),
        components: Vec::new(),
        witness: None,
    };
    let root = search.explore(State::initial(sys), 0);
    let mut leaves = Vec::new();
    root.leaves(&mut leaves);
    let verdict = if search.witness.is_some() {
        Verdict::Witness
    } else if !search.components.is_empty() {
        Verdict::Family
    } else if leaves.iter().all(|l| l.is_contradiction()) {
        Verdict::Unsat
    } else {
        Verdict::Unknown
    };
    SolveOutcome {
        verdict,
        witness: search.witness,
        family: search.components,
        trace: DerivationTrace { root },
        budget: search.report,
    }
}

impl Search<'_> {
    fn out_of_time(&self) -> bool {
        self.budget.time.is_some_and(|t| self.start.elapsed() > t)
    }

    fn open(&mut self, steps: Vec<Step>, reason: String) -> TraceNode {
        if self.report.exhausted.is_none() {
            self.report.exhausted = Some(reason.clone());
        }
        TraceNode {
            steps,
            end: BranchEnd::Open { reason },
        }
    }

    fn explore(&mut self, mut state: State, depth: usize) -> TraceNode {
        let mut steps = Vec::new();
        loop {
            self.report.steps += 1;
            if self.report.steps > MAX_STEPS {
                return self.open(steps, "step limit reached".into());
            }
            if self.out_of_time() {
                return self.open(steps, "time limit reached".into());
            }
            let cores = state.cores();

            let constants: Vec<(Origin, Scalar)> = cores
                .iter()
                .zip(&state.equations)
                .filter(|(c, _)| c.is_contradiction())
                .map(|(_, e)| (e.origin.clone(), e.value.clone()))
                .collect();
            if !constants.is_empty() {
                return TraceNode {
                    steps,
                    end: BranchEnd::Contradiction {
                        rule: Rule::ConstUnsat,
                        constants,
                    },
                };
            }

            if state.equations.is_empty() {
                let end = self.finish(&state);
                return TraceNode { steps, end };
            }

            if let Some(step) = find_square(&state, &cores) {
                match self.apply(&mut state, step, &mut steps) {
                    Some(end) => return TraceNode { steps, end },
                    None => continue,
                }
            }

            if let Some((i, _)) = cores
                .iter()
                .enumerate()
                .find(|(_, c)| positive_everywhere(&c.poly))
            {
                let e = &state.equations[i];
                return TraceNode {
                    steps,
                    end: BranchEnd::Contradiction {
                        rule: Rule::SosUnsat,
                        constants: vec![(e.origin.clone(), e.value.clone())],
                    },
                };
            }

            if let Some(step) = find_linear(&state, &cores) {
                match self.apply(&mut state, step, &mut steps) {
                    Some(end) => return TraceNode { steps, end },
                    None => continue,
                }
            }

            if let Some((i, fs)) = cores.iter().enumerate().find_map(|(i, c)| c.split().map(|f| (i, f))) {
                let e = state.equations[i].clone();
                if fs.len() == 1 {
                    let step = Step {
                        rule: Rule::CaseSplit,
                        origin: e.origin.clone(),
                        equation: e.value.clone(),
                        action: Action::Replace(Scalar::from_poly(fs[0].clone())),
                    };
                    match self.apply(&mut state, step, &mut steps) {
                        Some(end) => return TraceNode { steps, end },
                        None => continue,
                    }
                }
                if let Some(reason) = self.split_blocked(depth) {
                    return self.open(steps, reason);
                }
                self.report.splits += 1;
                let branches = fs
                    .into_iter()
                    .map(|f| {
                        let mut child = state.clone();
                        child.replace(i, f.clone());
                        (Branch::Factor(f), child)
                    })
                    .collect();
                let end = self.branch(e, branches, depth);
                return TraceNode { steps, end };
            }

            if let Some((i, (v, a))) = cores
                .iter()
                .enumerate()
                .find_map(|(i, c)| c.uncertified_coefficient(&state.facts).map(|x| (i, x)))
            {
                let _ = v;
                let e = state.equations[i].clone();
                if let Some(reason) = self.split_blocked(depth) {
                    return self.open(steps, reason);
                }
                self.report.splits += 1;
                let mut zero = state.clone();
                zero.push(Equation {
                    origin: Origin::Coefficient(Box::new(e.origin.clone())),
                    value: Scalar::from_poly(a.clone()),
                });
                let mut nonzero = state.clone();
                nonzero.facts.declare(&a);
                let branches = vec![
                    (Branch::CoefficientZero(a.clone()), zero),
                    (Branch::CoefficientNonzero(a), nonzero),
                ];
                let end = self.branch(e, branches, depth);
                return TraceNode { steps, end };
            }

            let vars = state.active_unknowns();
            if vars.len() <= 3 {
                match self.enumerate(&state, &vars) {
                    Some(point) => {
                        for (v, q) in point {
                            // Earlier bindings may have cleared every
                            // equation mentioning `v`; it is then free.
                            let Some(e) = state.equations.iter().find(|e| e.value.vars().contains(&v)) else {
                                continue;
                            };
                            let step = Step {
                                rule: Rule::EnumTry,
                                origin: e.origin.clone(),
                                equation: e.value.clone(),
                                action: Action::Bind {
                                    var: v,
                                    value: Scalar::from_rational(q),
                                },
                            };
                            if let Some(end) = self.apply(&mut state, step, &mut steps) {
                                return TraceNode { steps, end };
                            }
                        }
                        continue;
                    }
                    None => return self.open(steps, "no enumeration candidate satisfies the system".into()),
                }
            }
            return self.open(steps, "no tactic applies".into());
        }
    }

    fn split_blocked(&self, depth: usize) -> Option<String> {
        if depth >= self.budget.max_depth {
            Some(format!("case-split depth {} reached", self.budget.max_depth))
        } else if self.report.splits >= self.budget.max_splits {
            Some(format!("case-split budget {} exhausted", self.budget.max_splits))
        } else {
            None
        }
    }

    fn branch(&mut self, e: Equation, branches: Vec<(Branch, State)>, depth: usize) -> BranchEnd {
        let children = branches
            .into_iter()
            .map(|(label, st)| (label, self.explore(st, depth + 1)))
            .collect();
        BranchEnd::Split {
            origin: e.origin,
            equation: e.value,
            children,
        }
    }

    /// Applies a step, recording it. Returns an end when the step makes the
    /// branch infeasible.
    fn apply(&mut self, state: &mut State, step: Step, steps: &mut Vec<Step>) -> Option<BranchEnd> {
        let result = match &step.action {
            Action::Bind { var, value } => state.bind(var, value),
            Action::Replace(value) => {
                let i = state.find(&step.origin).expect("origin present");
                state.replace(i, value.numerator().clone());
                Ok(Applied::Ok)
            }
        };
        steps.push(step);
        match result {
            Ok(Applied::Ok) => None,
            Ok(Applied::Infeasible(f)) => Some(BranchEnd::Infeasible { fact: f }),
            Err(e) => Some(BranchEnd::Open {
                reason: format!("substitution failed: {}", e),
            }),
        }
    }

    fn enumerate(&mut self, state: &State, vars: &[Var]) -> Option<Vec<(Var, Rational)>> {
        let set = &self.budget.enum_set;
        if set.is_empty() {
            return None;
        }
        let total = set.len().pow(vars.len() as u32);
        for idx in 0..total {
            if self.report.enum_candidates >= self.budget.max_enum_candidates {
                return None;
            }
            self.report.enum_candidates += 1;
            let mut rest = idx;
            let mut point = BTreeMap::new();
            for v in vars.iter().rev() {
                point.insert(v.clone(), set[rest % set.len()].clone());
                rest /= set.len();
            }
            if state.facts.violated_by(&point).is_some() {
                continue;
            }
            let b: BTreeMap<Var, Scalar> = point
                .iter()
                .map(|(v, q)| (v.clone(), Scalar::from_rational(q.clone())))
                .collect();
            let ok = state
                .equations
                .iter()
                .all(|e| e.value.substitute(&b, &state.facts).is_ok_and(|s| s.is_zero()));
            if ok {
                return Some(point.into_iter().collect());
            }
        }
        None
    }

    /// All equations are gone: record a witness or a family component after
    /// validating a specialization.
    fn finish(&mut self, state: &State) -> BranchEnd {
        let bindings: BTreeMap<Var, Scalar> = state.bindings.clone();
        let j = match self.sys.j.try_map(|e| e.substitute(&bindings, &state.facts)) {
            Ok(j) => j,
            Err(e) => {
                return BranchEnd::Open {
                    reason: format!("substitution failed: {}", e),
                }
            }
        };
        let mut free: Vec<Var> = j.entries().flat_map(|e| e.vars()).filter(Var::is_psi).collect();
        free.sort();
        free.dedup();
        let mut all_bindings: Vec<(Var, Scalar)> = self
            .sys
            .substitutions
            .iter()
            .map(|(v, s)| (v.clone(), s.substitute(&bindings, &state.facts).unwrap_or_else(|_| s.clone())))
            .collect();
        all_bindings.extend(bindings.into_iter());
        all_bindings.sort_by(|a, b| a.0.cmp(&b.0));
        let mut component = FamilyComponent {
            bindings: all_bindings,
            free: free.clone(),
            facts: state.facts.clone(),
            j,
            sample: None,
        };
        let Some(sample) = sample_point(&component).and_then(|p| component.specialize(&p)) else {
            return BranchEnd::Open {
                reason: "no admissible specialization found".into(),
            };
        };
        let sample = Endomorphism::new(sample).expect("square");
        if let Err(reason) = validate(self.sys, &sample) {
            return BranchEnd::Open {
                reason: format!("validation failed: {}", reason),
            };
        }
        if free.is_empty() && self.witness.is_none() {
            self.witness = Some(sample.clone());
        }
        component.sample = Some(sample);
        // Different branches often reach the same parameterization.
        let index = match self
            .components
            .iter()
            .position(|c| c.j == component.j && c.facts == component.facts)
        {
            Some(i) => i,
            None => {
                self.components.push(component);
                self.components.len() - 1
            }
        };
        BranchEnd::Solved { component: index, free }
    }
}

fn find_square(state: &State, cores: &[Core]) -> Option<Step> {
    for (e, c) in state.equations.iter().zip(cores) {
        let Some(root) = c.square_root() else {
            continue;
        };
        let action = match super::tactics::solve_linear(&root, &state.facts) {
            Some((var, value)) => Action::Bind { var, value },
            None if root == c.poly => continue,
            None => Action::Replace(Scalar::from_poly(root)),
        };
        return Some(Step {
            rule: Rule::SquareForce,
            origin: e.origin.clone(),
            equation: e.value.clone(),
            action,
        });
    }
    None
}

fn find_linear(state: &State, cores: &[Core]) -> Option<Step> {
    for (e, c) in state.equations.iter().zip(cores) {
        if let Some((var, value)) = c.linear_solution(&state.facts) {
            return Some(Step {
                rule: Rule::LinearSubst,
                origin: e.origin.clone(),
                equation: e.value.clone(),
                action: Action::Bind { var, value },
            });
        }
    }
    None
}

/// Small values for the free unknowns avoiding every declared factor and
/// denominator: zero first, then single nonzero coordinates, then a scan.
fn sample_point(c: &FamilyComponent) -> Option<BTreeMap<Var, Rational>> {
    let values = [0i64, 1, -1, 2, -2, 3];
    let n = c.free.len();
    let limit = 4096usize.min(values.len().saturating_pow(n as u32));
    for idx in 0..limit.max(1) {
        let mut rest = idx;
        let mut point = BTreeMap::new();
        for v in &c.free {
            point.insert(v.clone(), Rational::from_integer(values[rest % values.len()].into()));
            rest /= values.len();
        }
        if c.specialize(&point).is_some() {
            return Some(point);
        }
    }
    None
}

/// Independent checks on a candidate structure.
pub(crate) fn validate(sys: &ConstraintSystem, j: &Endomorphism) -> Result<(), String> {
    let facts = sys.algebra.facts();
    let pc = check_almost_paracomplex(j, facts).map_err(|e| e.to_string())?;
    if !pc.passed() {
        return Err(format!("not almost para-complex: {:?}", pc));
    }
    if !check_compatible(&sys.omega, j).map_err(|e| e.to_string())? {
        return Err("not compatible with omega".into());
    }
    let int = is_integrable(&sys.algebra, j).map_err(|e| e.to_string())?;
    if !int.integrable() {
        return Err("not integrable".into());
    }
    Ok(())
}
