use num_traits::{Signed, Zero};

use crate::field::Field;
use crate::scalar::Rational;

use super::{LinalgError, Matrix};

/// Sylvester inertia `(positive, negative, null)` of a symmetric rational
/// matrix via congruence diagonalisation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub null: usize,
}

pub fn signature<F: Field>(m: &Matrix<F>) -> Result<Inertia, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.rows(), m.cols()));
    }
    if !m.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    let mut a: Matrix<Rational> = m.try_map(|x| x.to_rational().ok_or(LinalgError::Symbolic(x.to_string())))?;
    let n = a.rows();
    let mut out = Inertia {
        positive: 0,
        negative: 0,
        null: 0,
    };
    let mut k = 0;
    while k < n {
        if let Some(p) = (k..n).find(|&i| !a[(i, i)].is_zero()) {
            swap_sym(&mut a, k, p);
        } else if let Some((i, j)) = (k..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[(i, j)].is_zero())
        {
            // Hyperbolic pair: replace e_i by e_i + e_j, whose square is
            // 2 a_ij != 0.
            add_sym(&mut a, i, j);
            swap_sym(&mut a, k, i);
        } else {
            out.null += n - k;
            break;
        }
        let d = a[(k, k)].clone();
        if d.is_positive() {
            out.positive += 1;
        } else {
            out.negative += 1;
        }
        for i in k + 1..n {
            let f = &a[(i, k)] / &d;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let v = &a[(i, j)] - &(&f * &a[(k, j)]);
                a[(i, j)] = v;
            }
            for j in k..n {
                let v = &a[(j, i)] - &(&f * &a[(j, k)]);
                a[(j, i)] = v;
            }
        }
        k += 1;
    }
    Ok(out)
}

fn swap_sym(a: &mut Matrix<Rational>, i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap_rows(i, j);
    for r in 0..a.rows() {
        let t = a[(r, i)].clone();
        a[(r, i)] = a[(r, j)].clone();
        a[(r, j)] = t;
    }
}

/// Congruence by `e_i -> e_i + e_j`.
fn add_sym(a: &mut Matrix<Rational>, i: usize, j: usize) {
    let n = a.rows();
    for c in 0..n {
        let v = &a[(i, c)] + &a[(j, c)];
        a[(i, c)] = v;
    }
    for r in 0..n {
        let v = &a[(r, i)] + &a[(r, j)];
        a[(r, i)] = v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn inertia(p: usize, n: usize, z: usize) -> Inertia {
        Inertia {
            positive: p,
            negative: n,
            null: z,
        }
    }

    #[test]
    fn diagonal_and_zero() {
        assert_eq!(signature(&Matrix::diagonal(&[rat(1), rat(-1)])).unwrap(), inertia(1, 1, 0));
        assert_eq!(signature(&Matrix::<Rational>::zeros(4, 4)).unwrap(), inertia(0, 0, 4));
    }

    #[test]
    fn hyperbolic_plane() {
        let m = Matrix::from_rows(vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]);
        assert_eq!(signature(&m).unwrap(), inertia(1, 1, 0));
    }

    #[test]
    fn rejects_bad_input() {
        let m = Matrix::from_rows(vec![vec![rat(0), rat(1)], vec![rat(2), rat(0)]]);
        assert_eq!(signature(&m), Err(LinalgError::NotSymmetric));
    }
}
