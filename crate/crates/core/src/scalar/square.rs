use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{Polynomial, Rational};

/// Finds `(c, root)` with `p = c * root^2`, `c > 0`, `deg root > 0` and a
/// positive leading coefficient on `root`. When the leading coefficient of
/// `p` is a rational square, `c` is one.
///
/// Works term by term from the leading monomial: the leading term of
/// `p / c` must be the square of the leading monomial of the root, and each
/// remaining leading term fixes the next root term through `2 * lead * t`.
pub fn as_perfect_square(p: &Polynomial) -> Option<(Rational, Polynomial)> {
    let (lm, lc) = p.leading_term()?;
    if !lc.is_positive() || lm.is_one() {
        return None;
    }
    let c = lc.clone();
    let head = lm.sqrt()?;
    let target = p.scale(&c.recip());
    let mut root = Polynomial::var_monomial(head.clone());
    let two = Rational::from_integer(2.into());
    // A square root of a polynomial with t terms has at most t terms.
    for _ in 0..=p.num_terms() {
        let rem = &target - &root.pow(2);
        let Some((rm, rc)) = rem.leading_term() else {
            return Some(match rational_sqrt(&c) {
                Some(s) => (Rational::from_integer(1.into()), root.scale(&s)),
                None => (c, root),
            });
        };
        let next = rm.div(&head)?;
        if next >= head {
            return None;
        }
        if let Some((last, _)) = root.terms().last() {
            if &next >= last {
                return None;
            }
        }
        let coeff = rc / &two;
        root = &root + &Polynomial::term(coeff, next);
    }
    None
}

/// Exact square root of a nonnegative rational, when it is rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some(Rational::zero());
    }
    let n = int_sqrt(q.numer())?;
    let d = int_sqrt(q.denom())?;
    Some(Rational::new(n, d))
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Polynomial {
    pub(crate) fn var_monomial(m: super::Monomial) -> Polynomial {
        Polynomial::term(num_traits::One::one(), m)
    }
}
