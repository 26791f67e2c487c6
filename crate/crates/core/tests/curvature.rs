mod common;

use common::*;
use parakahler::catalog::builtin;
use parakahler::curvature::*;
use parakahler::lie::{LieAlgebra, StructureConstants};
use parakahler::linalg::Matrix;
use parakahler::para::*;
use parakahler::{Facts, Rational, Scalar};

fn g6_diagonal() -> Endomorphism {
    Endomorphism::diagonal(&[s(1), s(-1), s(-1), s(1), s(1), s(-1)])
}

#[test]
fn g6_diagonal_has_five_printed_components() {
    let p = g6_with_brackets();
    let l = p.algebra().unwrap();
    let w = p.omega.as_ref().unwrap();
    let j = g6_diagonal();
    assert!(check_symplectic(l, w).unwrap().passed());
    assert!(is_integrable(l, &j).unwrap().integrable());
    assert_eq!(j_invariant_chain(l, &j).unwrap().dims(), vec![2, 3, 4, 6]);

    let g = metric_from(w, &j).unwrap();
    let conn = levi_civita(l, &g).unwrap();
    let r = curvature_tensor(l, &conn).unwrap();
    let comps: Vec<((usize, usize, usize, usize), Scalar)> = r
        .nonzero_components()
        .into_iter()
        .map(|((ll, i, jj, k), v)| ((ll + 1, i + 1, jj + 1, k + 1), v))
        .collect();
    assert_eq!(
        comps,
        vec![
            ((4, 1, 2, 1), s(1)),
            ((6, 1, 2, 2), s(1)),
            ((6, 1, 2, 3), s(-1)),
            ((5, 1, 3, 1), s(-1)),
            ((6, 1, 3, 2), s(-1)),
        ]
    );
    assert!(ricci(&r).is_zero());
    assert!(check_parakahler_identity(&g, &j, &r));
}

#[test]
fn g6_chain_sits_inside_ascending_series() {
    let p = g6_with_brackets();
    let l = p.algebra().unwrap();
    let a = j_invariant_chain(l, &g6_diagonal()).unwrap();
    let g = l.ascending_series().unwrap();
    for (k, link) in a.links.iter().enumerate() {
        assert!(g.get(k + 1).unwrap().contains(link).unwrap(), "a_{} not in g_{}", k + 1, k + 1);
    }
}

#[test]
fn g21_closed_forms_contain_the_chosen_omega() {
    let basis = g21_closed_forms();
    // Wedge coordinates of e^16 + e^25 - e^34 in the oracle's order.
    let mut target = vec![Rational::from_integer(0.into()); 15];
    target[4] = Rational::from_integer(1.into());
    target[7] = Rational::from_integer(1.into());
    target[9] = Rational::from_integer((-1).into());
    let m = Matrix::from_rows(basis.clone());
    let with = Matrix::from_rows(basis.into_iter().chain([target]).collect());
    let f = Facts::new();
    assert_eq!(
        parakahler::linalg::rank(&m, &f).unwrap(),
        parakahler::linalg::rank(&with, &f).unwrap()
    );
    let p = builtin("G21").unwrap();
    assert!(check_symplectic(p.algebra().unwrap(), &g21_omega()).unwrap().passed());
}

#[test]
fn g21_diagonal_structure_is_flat() {
    let p = builtin("G21").unwrap();
    let l = p.algebra().unwrap();
    let j = Endomorphism::diagonal(&[s(1), s(-1), s(1), s(-1), s(1), s(-1)]);
    let (a, b, c) = p.partition.as_ref().unwrap().subspaces(6);
    let rep = check_decomposition(l, &g21_omega(), &j, (&a, &b, &c)).unwrap();
    assert!(rep.passed(), "{:?}", rep.first_failure());
    assert!(rep.components.is_empty());
}

#[test]
fn g21_curved_structure_follows_the_four_component_pattern() {
    let p = builtin("G21").unwrap();
    let l = p.algebra().unwrap();
    let w = g21_omega();
    let j = g21_curved_j();
    assert!(is_integrable(l, &j).unwrap().integrable());
    let (a, b, c) = p.partition.as_ref().unwrap().subspaces(6);
    let rep = check_decomposition(l, &w, &j, (&a, &b, &c)).unwrap();
    assert!(rep.passed(), "{:?}", rep.first_failure());
    assert!(!rep.components.is_empty());
    let allowed = [(5, 1, 2, 1), (6, 1, 2, 1), (5, 1, 2, 2), (6, 1, 2, 2)];
    for comp in &rep.components {
        assert!(allowed.contains(comp), "{:?}", comp);
    }

    let g = metric_from(&w, &j).unwrap();
    let conn = levi_civita(l, &g).unwrap();
    let r = curvature_tensor(l, &conn).unwrap();
    assert!(!r.is_zero());
    assert!(ricci(&r).is_zero());
    assert!(check_parakahler_identity(&g, &j, &r));
    for c in check_connection_relations(l, &j, &conn, &r).unwrap() {
        assert!(c.holds, "{}", c.name);
    }
}

#[test]
fn decomposition_reports_the_failing_hypothesis() {
    let p = builtin("G21").unwrap();
    let l = p.algebra().unwrap();
    // Swapping the roles of A and C breaks C ⊂ Z(g).
    let (a, b, c) = p.partition.as_ref().unwrap().subspaces(6);
    let j = Endomorphism::diagonal(&[s(1), s(-1), s(1), s(-1), s(1), s(-1)]);
    let rep = check_decomposition(l, &g21_omega(), &j, (&c, &b, &a)).unwrap();
    assert_eq!(rep.first_failure(), Some("C ⊂ Z(g)"));
    assert!(rep.conclusions.is_empty());
}

#[test]
fn heisenberg_connection_by_hand() {
    // [e1,e2] = e3 with the identity metric: Koszul gives
    // nabla_1 e2 = e3/2, nabla_2 e1 = -e3/2, nabla_1 e3 = -e2/2,
    // nabla_3 e1 = -e2/2, nabla_2 e3 = e1/2, nabla_3 e2 = e1/2.
    let c = StructureConstants::<Scalar>::new(3).with_basis(1, 2, 3).unwrap();
    let l = LieAlgebra::new(c, Facts::new()).unwrap();
    let g = SymBilinear::new(Matrix::identity(3)).unwrap();
    let conn = levi_civita(&l, &g).unwrap();
    let h = q(1, 2);
    let expect = [
        ((2, 0, 1), h.clone()),
        ((2, 1, 0), -h.clone()),
        ((1, 0, 2), -h.clone()),
        ((1, 2, 0), -h.clone()),
        ((0, 1, 2), h.clone()),
        ((0, 2, 1), h.clone()),
    ];
    for k in 0..3 {
        for i in 0..3 {
            for jj in 0..3 {
                let want = expect
                    .iter()
                    .find(|(key, _)| *key == (k, i, jj))
                    .map(|(_, v)| v.clone())
                    .unwrap_or_else(|| s(0));
                assert_eq!(conn.gamma(k, i, jj), &want, "Gamma^{}_{}{}", k + 1, i + 1, jj + 1);
            }
        }
    }
    // g(R(e1,e2)e2, e1), the sectional curvature of the (e1,e2) plane.
    let r = curvature_tensor(&l, &conn).unwrap();
    let r1212: Scalar = (0..3).map(|ll| r.get(ll, 0, 1, 1).clone() * g.matrix()[(ll, 0)].clone()).fold(s(0), |a, b| a + b);
    assert_eq!(r1212, q(-3, 4));
}
