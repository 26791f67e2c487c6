use crate::field::Field;
use crate::lie::LieAlgebra;
use crate::para::{check_compatible, is_integrable, j_invariant_chain, Endomorphism, ParaError, TwoForm};

/// A sign-diagonal para-Kähler structure with its `a_k(J)` chain.
#[derive(Clone, Debug)]
pub struct AnsatzHit<F = crate::Scalar> {
    pub signs: Vec<i64>,
    pub j: Endomorphism<F>,
    pub chain_dims: Vec<usize>,
    pub nilpotent: bool,
}

/// All `diag(+-1)` of size `n` with trace zero, in lexicographic order with
/// `+1` before `-1`.
pub fn sign_diagonals(n: usize) -> Vec<Vec<i64>> {
    if n % 2 == 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mask in (0u64..1 << n).rev() {
        if mask.count_ones() as usize * 2 != n {
            continue;
        }
        out.push((0..n).map(|i| if mask >> (n - 1 - i) & 1 == 1 { 1 } else { -1 }).collect());
    }
    out
}

/// Every trace-zero sign diagonal that is compatible with `w` and integrable.
pub fn ansatz_diag<F: Field>(l: &LieAlgebra<F>, w: &TwoForm<F>) -> Result<Vec<AnsatzHit<F>>, ParaError> {
    let mut out = Vec::new();
    for signs in sign_diagonals(l.dim()) {
        let entries: Vec<F> = signs.iter().map(|&s| F::from_int(s)).collect();
        let j = Endomorphism::diagonal(&entries);
        if !check_compatible(w, &j)? || !is_integrable(l, &j)?.integrable() {
            continue;
        }
        let chain = j_invariant_chain(l, &j)?;
        let nilpotent = chain.last().is_full();
        out.push(AnsatzHit {
            chain_dims: chain.dims(),
            signs,
            j,
            nilpotent,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(sign_diagonals(6).len(), 20);
        assert_eq!(sign_diagonals(2), vec![vec![1, -1], vec![-1, 1]]);
        assert!(sign_diagonals(3).is_empty());
    }
}
