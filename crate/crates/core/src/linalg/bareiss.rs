use crate::field::Field;
use crate::scalar::{Facts, Nonzero};

use super::rref::find_pivot;
use super::{LinalgError, Matrix};

/// Determinant by Bareiss fraction-free elimination.
pub fn determinant<F: Field>(m: &Matrix<F>, facts: &Facts) -> Result<F, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.rows(), m.cols()));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut sign = F::one();
    let mut prev = F::one();
    for k in 0..n {
        let Some(p) = find_pivot(&a, k, k, facts)? else {
            return Ok(F::zero());
        };
        if p != k {
            a.swap_rows(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[(k, k)].clone() * a[(i, j)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                a[(i, j)] = v.checked_div(&prev, facts)?;
            }
            a[(i, k)] = F::zero();
        }
        prev = a[(k, k)].clone();
    }
    Ok(sign * prev)
}

/// Inverse by fraction-free Gauss-Jordan on `[m | I]`: the left block ends
/// as `d * I` and the right block as `d * m^-1`, with `d` the last pivot.
pub fn invert<F: Field>(m: &Matrix<F>, facts: &Facts) -> Result<Matrix<F>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.rows(), m.cols()));
    }
    let n = m.rows();
    let mut a = m.hstack(&Matrix::identity(n));
    let mut prev = F::one();
    for k in 0..n {
        let p = find_pivot(&a, k, k, facts)?.ok_or(LinalgError::Singular)?;
        a.swap_rows(p, k);
        let pivot = a[(k, k)].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let aik = a[(i, k)].clone();
            for j in 0..2 * n {
                if j == k {
                    continue;
                }
                let v = pivot.clone() * a[(i, j)].clone() - aik.clone() * a[(k, j)].clone();
                a[(i, j)] = v.checked_div(&prev, facts)?;
            }
            a[(i, k)] = F::zero();
        }
        // Rows already processed must be rescaled to the new pivot scale.
        prev = pivot;
    }
    let d = a[(n - 1, n - 1)].clone();
    if d.nonzero_status(facts) != Nonzero::NonZero {
        return Err(LinalgError::Singular);
    }
    let mut inv = Matrix::zeros(n, n);
    for i in 0..n {
        let di = a[(i, i)].clone();
        for j in 0..n {
            inv[(i, j)] = a[(i, n + j)].checked_div(&di, facts)?;
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio, Rational};

    fn q(rows: Vec<Vec<i64>>) -> Matrix<Rational> {
        Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(rat).collect()).collect())
    }

    #[test]
    fn determinant_small() {
        let m = q(vec![vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        assert_eq!(determinant(&m, &Facts::new()).unwrap(), rat(18));
        let s = q(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(determinant(&s, &Facts::new()).unwrap(), rat(-1));
        assert_eq!(determinant(&q(vec![vec![1, 2], vec![2, 4]]), &Facts::new()).unwrap(), rat(0));
    }

    #[test]
    fn invert_diagonal() {
        let m = Matrix::diagonal(&[rat(2), ratio(-1, 3)]);
        let inv = invert(&m, &Facts::new()).unwrap();
        assert_eq!(inv, Matrix::diagonal(&[ratio(1, 2), rat(-3)]));
    }

    #[test]
    fn invert_needs_swaps() {
        let m = q(vec![vec![0, 2, 1], vec![1, 0, 0], vec![3, 1, 5]]);
        let inv = invert(&m, &Facts::new()).unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        assert_eq!(inv.mul(&m), Matrix::identity(3));
    }

    #[test]
    fn singular_is_reported() {
        let m = q(vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(invert(&m, &Facts::new()), Err(LinalgError::Singular));
    }
}
