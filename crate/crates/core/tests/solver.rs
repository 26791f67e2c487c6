use std::collections::BTreeMap;

use parakahler::catalog::{builtin, parse_problem_file, Problem};
use parakahler::lie::LieAlgebra;
use parakahler::para::{nijenhuis_entry, Endomorphism, TwoForm};
use parakahler::scalar::{parse_scalar, ParseContext};
use parakahler::solver::*;
use parakahler::{Rational, Scalar, Var};

fn g1() -> (Problem, ConstraintSystem) {
    let p = builtin("G1").unwrap();
    let sys = prepare(p.algebra().unwrap(), p.omega.as_ref().unwrap()).unwrap();
    (p, sys)
}

fn g6_with_brackets() -> Problem {
    let mut p = builtin("G6").unwrap();
    let file = parse_problem_file(include_str!("fixtures/g6_brackets.json"), "fixture").unwrap();
    p.complete_brackets(&file).unwrap();
    p
}

fn parse(p: &Problem, text: &str) -> Scalar {
    parse_scalar(text, &p.context()).unwrap()
}

fn psi(i: usize, j: usize) -> Var {
    Var::psi(i, j)
}

#[test]
fn g1_compatibility_layer_matches_printed_matrix() {
    let (p, sys) = g1();
    assert_eq!(sys.unknowns.len(), 21);
    assert!(!sys.has_compatibility());
    let printed = [
        ["psi_1_1", "psi_1_2", "psi_1_3", "psi_1_4", "psi_1_5", "psi_1_6"],
        ["psi_2_1", "psi_2_2", "psi_2_3", "psi_2_4", "psi_2_5", "psi_1_5/(1-lambda)"],
        ["psi_3_1", "psi_3_2", "psi_3_3", "psi_3_4", "(1-lambda)*psi_2_4/lambda", "psi_1_4/lambda"],
        ["psi_4_1", "psi_4_2", "psi_4_3", "-psi_3_3", "(lambda-1)*psi_2_3/lambda", "-psi_1_3/lambda"],
        ["psi_5_1", "psi_5_2", "lambda*psi_4_2/(1-lambda)", "lambda*psi_3_2/(lambda-1)", "-psi_2_2", "psi_1_2/(lambda-1)"],
        ["psi_6_1", "(1-lambda)*psi_5_1", "lambda*psi_4_1", "-lambda*psi_3_1", "(lambda-1)*psi_2_1", "-psi_1_1"],
    ];
    for (i, row) in printed.iter().enumerate() {
        for (j, text) in row.iter().enumerate() {
            assert_eq!(sys.entry(i + 1, j + 1), &parse(&p, text), "entry ({}, {})", i + 1, j + 1);
        }
    }
    // Every eliminated entry is recorded.
    assert_eq!(sys.substitutions.len(), 15);
}

#[test]
fn g1_printed_nijenhuis_polynomials() {
    let (p, sys) = g1();
    let l = p.algebra().unwrap();
    let mut bindings: BTreeMap<Var, Scalar> = BTreeMap::new();
    let n = |b: &BTreeMap<Var, Scalar>, k: usize, i: usize, j: usize| {
        let m = sys.j.try_map(|e| e.substitute(b, &p.facts)).unwrap();
        nijenhuis_entry(l, &Endomorphism::new(m).unwrap(), k - 1, i - 1, j - 1)
    };
    let zero = |b: &mut BTreeMap<Var, Scalar>, vs: &[(usize, usize)]| {
        for &(i, j) in vs {
            b.insert(psi(i, j), Scalar::from_int(0));
        }
    };
    assert_eq!(n(&bindings, 1, 5, 6), parse(&p, "psi_1_6^2"));
    zero(&mut bindings, &[(1, 6)]);
    assert_eq!(n(&bindings, 1, 4, 5), parse(&p, "psi_1_5^2"));
    zero(&mut bindings, &[(1, 5)]);
    // The square of psi_1_4 sits at N^1_34 here; the printed label N^3_15
    // does not carry it.
    assert_eq!(n(&bindings, 1, 3, 4), parse(&p, "psi_1_4^2"));
    assert_ne!(n(&bindings, 3, 1, 5), parse(&p, "psi_1_4^2"));
    assert_eq!(n(&bindings, 2, 3, 5), parse(&p, "psi_2_5^2"));
    zero(&mut bindings, &[(1, 4), (2, 5)]);
    assert_eq!(n(&bindings, 1, 2, 3), parse(&p, "psi_1_3^2"));
    zero(&mut bindings, &[(1, 3)]);
    assert_eq!(n(&bindings, 6, 2, 6), parse(&p, "psi_1_2^2/(lambda-1)"));
    assert_eq!(n(&bindings, 2, 5, 1), parse(&p, "psi_2_4^2*(1-lambda)/lambda"));
    assert_eq!(n(&bindings, 6, 5, 3), parse(&p, "psi_2_3^2*(1-lambda)/lambda"));
    zero(&mut bindings, &[(1, 2), (2, 4), (2, 3)]);
    assert_eq!(n(&bindings, 3, 4, 1), parse(&p, "psi_3_4^2"));
    zero(&mut bindings, &[(3, 4)]);
    assert_eq!(n(&bindings, 4, 1, 3), parse(&p, "2*psi_1_1*psi_3_3 + psi_3_3^2 + 1"));
    assert_eq!(n(&bindings, 5, 2, 3), parse(&p, "psi_2_2^2 + 2*psi_2_2*psi_3_3 + 1"));
    assert_eq!(n(&bindings, 6, 1, 5), parse(&p, "psi_1_1^2 - 2*psi_1_1*psi_2_2 + 1"));
    for (v, q) in [(psi(1, 1), 1), (psi(2, 2), 1), (psi(3, 3), -1)] {
        bindings.insert(v, Scalar::from_int(q));
    }
    assert_eq!(n(&bindings, 6, 2, 4), Scalar::from_int(4));
}

#[test]
fn g1_is_unsat_with_the_square_chain() {
    let (_, sys) = g1();
    let out = solve(&sys, &Budget::default());
    assert_eq!(out.verdict, Verdict::Unsat);
    assert!(out.witness.is_none() && out.family.is_empty());
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
        assert!(forced.contains(&psi(i, j)), "psi_{}_{} not forced", i, j);
    }

    let leaves = replay(&sys, &out.trace).unwrap();
    assert!(!leaves.is_empty());
    assert!(leaves.iter().all(|l| l.end.is_contradiction()));
    let target = leaves
        .iter()
        .find(|l| {
            l.binding(&psi(1, 1)) == Some(&Scalar::from_int(1))
                && l.binding(&psi(2, 2)) == Some(&Scalar::from_int(1))
                && l.binding(&psi(3, 3)) == Some(&Scalar::from_int(-1))
        })
        .expect("branch psi11 = psi22 = 1, psi33 = -1");
    let BranchEnd::Contradiction { constants, .. } = &target.end else {
        panic!("not a contradiction");
    };
    assert!(constants
        .iter()
        .any(|(o, c)| o == &Origin::Nijenhuis { k: 6, i: 2, j: 4 } && c == &Scalar::from_int(4)));
    assert!(out.trace.to_string().trim_end().ends_with("constant 4 \u{2260} 0"));
}

#[test]
fn replay_rejects_tampered_traces() {
    let (_, sys) = g1();
    let out = solve(&sys, &Budget::default());

    let mut bad = out.trace.clone();
    if let Action::Bind { value, .. } = &mut bad.root.steps[0].action {
        *value = Scalar::from_int(1);
    }
    assert!(replay(&sys, &bad).is_err());

    let mut bad = out.trace.clone();
    bad.root.steps.remove(0);
    assert!(replay(&sys, &bad).is_err());

    let mut bad = out.trace.clone();
    bad.root.steps[1].rule = Rule::LinearSubst;
    assert!(replay(&sys, &bad).is_err());
}

#[test]
fn solving_is_deterministic() {
    let (_, sys) = g1();
    let a = solve(&sys, &Budget::default());
    let b = solve(&sys, &Budget::default());
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.verdict, b.verdict);
}

#[test]
fn abelian_plane_is_a_family() {
    let l = LieAlgebra::abelian(2);
    let w = TwoForm::from_wedges(2, &[(0, 1, Scalar::from_int(1))]);
    let full = generate_constraints(&l, &w).unwrap();
    assert!(!full.equations.iter().any(|e| matches!(e.origin, Origin::Nijenhuis { .. })));
    let sys = parameterize_linear(&full).unwrap();
    // Compatibility in dimension two is tracelessness alone.
    assert_eq!(sys.unknowns, vec![psi(1, 1), psi(1, 2), psi(2, 1)]);
    assert_eq!(sys.entry(2, 2), &-Scalar::psi(1, 1));
    let out = solve(&sys, &Budget::default());
    assert_eq!(out.verdict, Verdict::Family);
    assert!(!out.family.is_empty());
    for c in &out.family {
        assert!(!c.free.is_empty());
        assert!(c.sample.is_some());
    }
    assert!(replay(&sys, &out.trace).is_ok());
}

#[test]
fn g6_family_contains_the_diagonal_structure() {
    let p = g6_with_brackets();
    let sys = prepare(p.algebra().unwrap(), p.omega.as_ref().unwrap()).unwrap();
    let out = solve(&sys, &Budget::default());
    assert_eq!(out.verdict, Verdict::Family);
    let diag = [1i64, -1, -1, 1, 1, -1];
    let hit = out.family.iter().any(|c| {
        let point: BTreeMap<Var, Rational> = c
            .free
            .iter()
            .map(|v| {
                let Var::Psi(i, j) = v else { unreachable!() };
                let q = if i == j { diag[*i as usize - 1] } else { 0 };
                (v.clone(), Rational::from_integer(q.into()))
            })
            .collect();
        c.specialize(&point).is_some_and(|m| {
            (0..6).all(|i| (0..6).all(|j| m[(i, j)] == Scalar::from_int(if i == j { diag[i] } else { 0 })))
        })
    });
    assert!(hit);
    assert!(replay(&sys, &out.trace).is_ok());
}

#[test]
fn enumeration_finds_a_witness() {
    // J = [[x, y], [y, -x]] on the abelian plane: the only equation is
    // x^2 + y^2 - 1, which neither factors nor is a square.
    let l = LieAlgebra::abelian(2);
    let w = TwoForm::from_wedges(2, &[(0, 1, Scalar::from_int(1))]);
    let mut sys = prepare(&l, &w).unwrap();
    let ctx = ParseContext::new().with_dim(2);
    let b: BTreeMap<Var, Scalar> = [(psi(2, 1), Scalar::psi(1, 2))].into();
    sys.j = sys.j.try_map(|e| e.substitute(&b, &sys.facts)).unwrap();
    sys.unknowns = vec![psi(1, 1), psi(1, 2)];
    sys.equations = vec![Equation {
        origin: Origin::Involution { i: 1, j: 1 },
        value: parse_scalar("psi_1_1^2 + psi_1_2^2 - 1", &ctx).unwrap(),
    }];
    let out = solve(&sys, &Budget::default());
    assert_eq!(out.verdict, Verdict::Witness);
    let j = out.witness.unwrap();
    assert_eq!(j.matrix()[(0, 0)], Scalar::from_int(0));
    assert_eq!(j.matrix()[(0, 1)], Scalar::from_int(1));
    assert!(out.trace.steps().iter().all(|s| s.rule == Rule::EnumTry));
    assert!(replay(&sys, &out.trace).is_ok());

    let empty = Budget {
        enum_set: vec![Rational::from_integer(3.into())],
        ..Budget::default()
    };
    assert_eq!(solve(&sys, &empty).verdict, Verdict::Unknown);
}

#[test]
fn ansatz_on_catalog() {
    assert_eq!(sign_diagonals(6).len(), 20);
    let p = builtin("G1").unwrap();
    assert!(ansatz_diag(p.algebra().unwrap(), p.omega.as_ref().unwrap()).unwrap().is_empty());

    let p = g6_with_brackets();
    let hits = ansatz_diag(p.algebra().unwrap(), p.omega.as_ref().unwrap()).unwrap();
    let hit = hits.iter().find(|h| h.signs == vec![1, -1, -1, 1, 1, -1]).expect("printed diagonal");
    assert_eq!(hit.chain_dims, vec![2, 3, 4, 6]);
    assert!(hit.nilpotent);

    // Abelian R^4 with e12 + e34: every sign pattern with opposite signs in
    // each pair.
    let l = LieAlgebra::abelian(4);
    let w = TwoForm::from_wedges(4, &[(0, 1, Scalar::from_int(1)), (2, 3, Scalar::from_int(1))]);
    let hits = ansatz_diag(&l, &w).unwrap();
    assert_eq!(hits.len(), 4);
    assert!(hits.iter().all(|h| h.signs[0] == -h.signs[1] && h.signs[2] == -h.signs[3]));
}

#[test]
fn degenerate_omega_is_rejected() {
    let l = LieAlgebra::abelian(2);
    let w = TwoForm::from_wedges(2, &[(0, 1, Scalar::from_int(0))]);
    assert!(matches!(generate_constraints(&l, &w), Err(SolverError::NotSymplectic(_))));
}
