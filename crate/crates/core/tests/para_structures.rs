use parakahler::catalog::builtin;
use parakahler::linalg::{signature, Inertia, Matrix, Subspace};
use parakahler::para::*;
use parakahler::scalar::rat;
use parakahler::{Facts, Rational, Scalar};

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn g6_diagonal() -> Endomorphism {
    Endomorphism::diagonal(&[s(1), s(-1), s(-1), s(1), s(1), s(-1)])
}

#[test]
fn g1_form_is_symplectic() {
    let p = builtin("G1").unwrap();
    let r = check_symplectic(p.algebra().unwrap(), p.omega.as_ref().unwrap()).unwrap();
    assert!(r.closed && r.nondegenerate, "{:?}", r);
}

#[test]
fn degenerate_form_on_abelian() {
    let l = parakahler::lie::LieAlgebra::<Scalar>::abelian(4);
    let w = TwoForm::from_wedges(4, &[(0, 1, s(1))]);
    let r = check_symplectic(&l, &w).unwrap();
    assert!(r.closed);
    assert!(!r.nondegenerate);
}

#[test]
fn g6_diagonal_is_almost_paracomplex_and_compatible() {
    let p = builtin("G6").unwrap();
    let j = g6_diagonal();
    let r = check_almost_paracomplex(&j, &Facts::new()).unwrap();
    assert_eq!((r.involutive, r.rank_plus, r.rank_minus), (true, 3, 3));
    assert!(check_compatible(p.omega.as_ref().unwrap(), &j).unwrap());
    let g = metric_from(p.omega.as_ref().unwrap(), &j).unwrap();
    let q = g.matrix().map(|x| x.as_rational().unwrap());
    assert_eq!(
        signature(&q).unwrap(),
        Inertia {
            positive: 3,
            negative: 3,
            null: 0
        }
    );
}

#[test]
fn identity_is_not_paracomplex_or_compatible() {
    let j = Endomorphism::diagonal(&vec![s(1); 6]);
    let r = check_almost_paracomplex(&j, &Facts::new()).unwrap();
    assert!(r.involutive);
    assert_eq!((r.rank_plus, r.rank_minus), (6, 0));
    assert!(!r.passed());
    let p = builtin("G6").unwrap();
    assert!(!check_compatible(p.omega.as_ref().unwrap(), &j).unwrap());
}

#[test]
fn g6_family_identities() {
    let p = builtin("G6").unwrap();
    let j = p.j.as_ref().unwrap();
    assert_eq!(j.matrix().mul(j.matrix()), Matrix::identity(6));
    let w = p.omega.as_ref().unwrap();
    assert!(check_compatible(w, j).unwrap());
    let g = metric_from(w, j).unwrap();
    assert_eq!(g.matrix(), p.metric.as_ref().unwrap());
}

#[test]
fn hyperbolic_pair_metric() {
    let w = TwoForm::from_wedges(2, &[(0, 1, s(1))]);
    let j = Endomorphism::diagonal(&[s(1), s(-1)]);
    let g = metric_from(&w, &j).unwrap();
    assert_eq!(g.matrix(), &Matrix::from_rows(vec![vec![s(0), s(-1)], vec![s(-1), s(0)]]));
}

#[test]
fn g1_block_diagonal_not_integrable() {
    let p = builtin("G1").unwrap();
    let j = Endomorphism::diagonal(&[s(1), s(1), s(1), s(-1), s(-1), s(-1)]);
    let r = is_integrable(p.algebra().unwrap(), &j).unwrap();
    assert!(!r.nijenhuis_zero);
    assert!(r.consistent());
}

#[test]
fn lagrangian_half_basis() {
    let w = TwoForm::<Rational>::from_wedges(4, &[(0, 2, rat(1)), (1, 3, rat(1))]);
    assert!(is_lagrangian(&w, &Subspace::coordinate(4, &[0, 1]), &Facts::new()).unwrap());
    assert!(!is_lagrangian(&w, &Subspace::coordinate(4, &[0]), &Facts::new()).unwrap());
    assert!(!is_lagrangian(&w, &Subspace::coordinate(4, &[0, 2]), &Facts::new()).unwrap());
}
