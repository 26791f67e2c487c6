use crate::field::Field;
use crate::scalar::{Facts, Nonzero};

use super::{LinalgError, Matrix};

/// Reduced row-echelon form with its rank and pivot columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<F> {
    pub reduced: Matrix<F>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Picks the first row at or below `from` whose entry in `col` is certified
/// nonzero. `Ok(None)` means the column is identically zero there.
pub(crate) fn find_pivot<F: Field>(
    m: &Matrix<F>,
    col: usize,
    from: usize,
    facts: &Facts,
) -> Result<Option<usize>, LinalgError> {
    let mut blocked = None;
    for r in from..m.rows() {
        match m[(r, col)].nonzero_status(facts) {
            Nonzero::NonZero => return Ok(Some(r)),
            Nonzero::Unknown if blocked.is_none() => blocked = Some(r),
            _ => {}
        }
    }
    match blocked {
        Some(r) => Err(LinalgError::UndecidablePivot {
            row: r,
            col,
            entry: m[(r, col)].to_string(),
        }),
        None => Ok(None),
    }
}

/// Gauss-Jordan reduction. Pivots are chosen by lowest column, then lowest
/// row among certified-nonzero candidates. A column whose candidates are all
/// undecided is put aside and retried once the other columns are reduced,
/// since elimination often clears it; it is an error only if that fails.
/// Rows are finally ordered by pivot column.
pub fn rref<F: Field>(m: &Matrix<F>, facts: &Facts) -> Result<Rref<F>, LinalgError> {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    let mut deferred = Vec::new();
    for col in 0..a.cols() {
        if row == a.rows() {
            break;
        }
        match find_pivot(&a, col, row, facts) {
            Ok(Some(p)) => {
                eliminate(&mut a, row, p, col, facts)?;
                pivots.push(col);
                row += 1;
            }
            Ok(None) => {}
            Err(LinalgError::UndecidablePivot { .. }) => deferred.push(col),
            Err(e) => return Err(e),
        }
    }
    loop {
        let mut progress = false;
        let mut blocked = None;
        for col in std::mem::take(&mut deferred) {
            if row == a.rows() {
                break;
            }
            match find_pivot(&a, col, row, facts) {
                Ok(Some(p)) => {
                    eliminate(&mut a, row, p, col, facts)?;
                    pivots.push(col);
                    row += 1;
                    progress = true;
                }
                Ok(None) => progress = true,
                Err(e) => {
                    blocked.get_or_insert(e);
                    deferred.push(col);
                }
            }
        }
        match blocked {
            Some(e) if !progress => return Err(e),
            Some(_) if row < a.rows() => continue,
            _ => break,
        }
    }
    // Restore echelon order when deferral reordered the pivots.
    let mut order: Vec<usize> = (0..row).collect();
    order.sort_by_key(|&k| pivots[k]);
    if order.iter().enumerate().any(|(i, &k)| i != k) {
        let old = a.clone();
        for (i, &k) in order.iter().enumerate() {
            for j in 0..a.cols() {
                a[(i, j)] = old[(k, j)].clone();
            }
        }
        pivots.sort_unstable();
    }
    Ok(Rref {
        reduced: a,
        rank: row,
        pivots,
    })
}

fn eliminate<F: Field>(a: &mut Matrix<F>, row: usize, p: usize, col: usize, facts: &Facts) -> Result<(), LinalgError> {
    a.swap_rows(row, p);
    let pivot = a[(row, col)].clone();
    for j in 0..a.cols() {
        if !a[(row, j)].is_zero() {
            a[(row, j)] = a[(row, j)].checked_div(&pivot, facts)?;
        }
    }
    for r in 0..a.rows() {
        if r == row || a[(r, col)].is_zero() {
            continue;
        }
        let factor = a[(r, col)].clone();
        for j in 0..a.cols() {
            if a[(row, j)].is_zero() {
                continue;
            }
            a[(r, j)] = a[(r, j)].clone() - factor.clone() * a[(row, j)].clone();
        }
    }
    Ok(())
}

pub fn rank<F: Field>(m: &Matrix<F>, facts: &Facts) -> Result<usize, LinalgError> {
    Ok(rref(m, facts)?.rank)
}

/// Basis vectors of the null space `{x : m x = 0}`, one per free column.
pub fn kernel_vectors<F: Field>(m: &Matrix<F>, facts: &Facts) -> Result<Vec<Vec<F>>, LinalgError> {
    let r = rref(m, facts)?;
    let n = m.cols();
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !r.pivots.contains(c)) {
        let mut v = vec![F::zero(); n];
        v[free] = F::one();
        for (k, &pc) in r.pivots.iter().enumerate() {
            v[pc] = -r.reduced[(k, free)].clone();
        }
        out.push(v);
    }
    Ok(out)
}
