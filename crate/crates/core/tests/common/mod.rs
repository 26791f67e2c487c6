#![allow(dead_code)]

use parakahler::catalog::{builtin, parse_problem_file, Problem};
use parakahler::linalg::{kernel_vectors, Matrix};
use parakahler::para::{Endomorphism, TwoForm};
use parakahler::scalar::{parse_scalar, rat};
use parakahler::{Facts, Rational, Scalar};

pub fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

pub fn q(n: i64, d: i64) -> Scalar {
    Scalar::from_rational(Rational::new(n.into(), d.into()))
}

/// G6 with brackets supplied by the user fixture.
pub fn g6_with_brackets() -> Problem {
    let mut p = builtin("G6").unwrap();
    let file = parse_problem_file(include_str!("../fixtures/g6_brackets.json"), "fixture").unwrap();
    p.complete_brackets(&file).unwrap();
    p
}

pub fn parse(p: &Problem, text: &str) -> Scalar {
    parse_scalar(text, &p.context()).unwrap()
}

pub fn int_matrix(rows: &[&[i64]]) -> Matrix<Scalar> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| s(x)).collect()).collect())
}

/// Closed 2-forms on G21, found from the cocycle system written out by hand
/// from the brackets `[e1,e2]=e4, [e1,e4]=e6, [e2,e3]=e6`.
///
/// With `d e^4 = -e^12` and `d e^6 = -e^14 - e^23`, a form
/// `sum w_ij e^ij` is closed iff `d(w_ij e^ij)` vanishes. Only terms
/// containing `e^4` or `e^6` contribute:
/// `w_i4 d(e^i4)` and `w_i6 d(e^i6)`; collecting gives the relations below.
pub fn g21_closed_forms() -> Vec<Vec<Rational>> {
    // Unknown order: w12 w13 w14 w15 w16 w23 w24 w25 w26 w34 w35 w36 w45 w46 w56
    let idx = |i: usize, j: usize| -> usize {
        let pairs: Vec<(usize, usize)> = (1..=6).flat_map(|a| (a + 1..=6).map(move |b| (a, b))).collect();
        pairs.iter().position(|&p| p == (i, j)).unwrap()
    };
    // Cocycle: w([x,y],z) - w([x,z],y) + w([y,z],x) = 0 over i<j<k, with
    // the brackets above.
    let bracket = |i: usize, j: usize| -> Option<(usize, i64)> {
        match (i, j) {
            (1, 2) => Some((4, 1)),
            (2, 1) => Some((4, -1)),
            (1, 4) => Some((6, 1)),
            (4, 1) => Some((6, -1)),
            (2, 3) => Some((6, 1)),
            (3, 2) => Some((6, -1)),
            _ => None,
        }
    };
    let term = |row: &mut Vec<Rational>, a: usize, b: usize, sign: i64| {
        if a == b {
            return;
        }
        let (lo, hi, sg) = if a < b { (a, b, sign) } else { (b, a, -sign) };
        row[idx(lo, hi)] += rat(sg);
    };
    let mut rows = Vec::new();
    for i in 1..=6 {
        for j in i + 1..=6 {
            for k in j + 1..=6 {
                let mut row = vec![rat(0); 15];
                if let Some((m, c)) = bracket(i, j) {
                    term(&mut row, m, k, c);
                }
                if let Some((m, c)) = bracket(i, k) {
                    term(&mut row, m, j, -c);
                }
                if let Some((m, c)) = bracket(j, k) {
                    term(&mut row, m, i, c);
                }
                rows.push(row);
            }
        }
    }
    kernel_vectors(&Matrix::from_rows(rows), &Facts::new()).unwrap()
}

/// `e^16 + e^25 - e^34`.
pub fn g21_omega() -> TwoForm {
    TwoForm::from_wedges(6, &[(0, 5, s(1)), (1, 4, s(1)), (2, 3, s(-1))])
}

/// A compatible integrable nilpotent J on G21 with nonzero curvature, taken
/// from a specialization of the solver's family.
pub fn g21_curved_j() -> Endomorphism {
    Endomorphism::new(int_matrix(&[
        &[-1, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0],
        &[0, 0, -1, 1, 0, 0],
        &[0, 0, 0, 1, 0, 0],
        &[0, -2, 0, 0, -1, 0],
        &[0, 0, 0, 0, 0, 1],
    ]))
    .unwrap()
}
