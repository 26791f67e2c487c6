use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::square::{as_perfect_square, rational_sqrt};
use super::{rat, Polynomial, Rational, Var};

/// Partial factorisation over the rationals: `p = unit * prod(f^m)`, every
/// `f` monic.
///
/// Recognises monomial content, factors of the linear coefficient that
/// divide the rest, quadratics with a square discriminant, and rational
/// roots of univariate polynomials. Factors reported are not guaranteed
/// irreducible.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub unit: Rational,
    pub factors: Vec<(Polynomial, u32)>,
}

impl Factorization {
    pub fn is_trivial(&self) -> bool {
        self.factors.len() <= 1 && self.factors.iter().all(|(_, m)| *m == 1)
    }

    pub fn expand(&self) -> Polynomial {
        self.factors
            .iter()
            .fold(Polynomial::constant(self.unit.clone()), |acc, (f, m)| &acc * &f.pow(*m))
    }
}

const ROOT_SEARCH_LIMIT: u64 = 1 << 20;

pub fn factor(p: &Polynomial) -> Factorization {
    if p.is_zero() {
        return Factorization {
            unit: Rational::zero(),
            factors: Vec::new(),
        };
    }
    let (unit, monic) = p.monic();
    let mut acc: BTreeMap<Polynomial, u32> = BTreeMap::new();
    let content = monic.monomial_content();
    for (v, e) in content.powers() {
        *acc.entry(Polynomial::var(v.clone())).or_default() += e;
    }
    let rest = monic.div_exact(&Polynomial::var_monomial(content)).expect("content divides");
    let mut pending = vec![(rest, 1u32)];
    while let Some((q, m)) = pending.pop() {
        if q.is_constant() {
            continue;
        }
        match split_once(&q) {
            Some(parts) => {
                for (f, e) in parts {
                    pending.push((f.monic().1, m * e));
                }
            }
            None => *acc.entry(q).or_default() += m,
        }
    }
    let mut factors: Vec<(Polynomial, u32)> = acc.into_iter().collect();
    factors.sort_by(|a, b| b.0.cmp(&a.0));
    Factorization { unit, factors }
}

/// One splitting step of a monic, content-free polynomial.
fn split_once(q: &Polynomial) -> Option<Vec<(Polynomial, u32)>> {
    if q.degree() <= 1 {
        return None;
    }
    if let Some((_, root)) = as_perfect_square(q) {
        return Some(vec![(root, 2)]);
    }
    let vars = q.vars();
    for v in &vars {
        if let Some((a, _)) = q.linear_in(v) {
            if a.is_constant() {
                continue;
            }
            for (f, _) in factor(&a).factors {
                if let Some(rest) = q.div_exact(&f) {
                    return Some(vec![(f, 1), (rest, 1)]);
                }
            }
        }
    }
    for v in &vars {
        if q.degree_in(v) == 2 {
            if let Some(parts) = split_quadratic(q, v) {
                return Some(parts);
            }
        }
    }
    if vars.len() == 1 {
        let v = vars.iter().next().unwrap();
        if let Some(r) = rational_root(q, v) {
            let lin = &Polynomial::var(v.clone()) - &Polynomial::constant(r);
            let rest = q.div_exact(&lin)?;
            return Some(vec![(lin, 1), (rest, 1)]);
        }
    }
    None
}

/// `a v^2 + b v + c` with constant `a` and a square discriminant.
fn split_quadratic(q: &Polynomial, v: &Var) -> Option<Vec<(Polynomial, u32)>> {
    let cs = q.coefficients_in(v);
    let (c, b, a) = (&cs[0], &cs[1], &cs[2]);
    let a = a.as_constant()?;
    let disc = &b.pow(2) - &c.scale(&(&a * rat(4)));
    let d = if disc.is_zero() {
        Polynomial::zero()
    } else if let Some(k) = disc.as_constant() {
        Polynomial::constant(rational_sqrt(&k)?)
    } else {
        let (k, root) = as_perfect_square(&disc)?;
        root.scale(&rational_sqrt(&k)?)
    };
    let x = Polynomial::var(v.clone());
    let inv = (&a * rat(2)).recip();
    // v - r with r = (-b +- d) / 2a
    let r1 = (&(-b) + &d).scale(&inv);
    let r2 = (&(-b) - &d).scale(&inv);
    let f1 = &x - &r1;
    let f2 = &x - &r2;
    if f1 == f2 {
        return Some(vec![(f1, 2)]);
    }
    Some(vec![(f1, 1), (f2, 1)])
}

fn rational_root(q: &Polynomial, v: &Var) -> Option<Rational> {
    let cs = q.coefficients_in(v);
    let denom_lcm = cs
        .iter()
        .filter_map(|c| c.as_constant())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = cs
        .iter()
        .map(|c| (c.as_constant().unwrap_or_default() * Rational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let lead = ints.last()?.abs();
    let trailing = ints.iter().find(|c| !c.is_zero())?.abs();
    let (lead, trailing) = (lead.to_u64()?, trailing.to_u64()?);
    if lead > ROOT_SEARCH_LIMIT || trailing > ROOT_SEARCH_LIMIT {
        return None;
    }
    let eval = |r: &Rational| {
        ints.iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * r + Rational::from_integer(c.clone()))
    };
    if ints[0].is_zero() {
        return Some(Rational::zero());
    }
    for p in divisors(trailing) {
        for d in divisors(lead) {
            for sign in [1i64, -1] {
                let r = Rational::new(BigInt::from(p) * sign, BigInt::from(d));
                if eval(&r).is_zero() {
                    return Some(r);
                }
            }
        }
    }
    None
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 1;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            if k * k != n {
                out.push(n / k);
            }
        }
        k += 1;
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> Polynomial {
        Polynomial::var(Var::param(name))
    }

    fn check(p: &Polynomial, expected_factors: usize) {
        let f = factor(p);
        assert_eq!(&f.expand(), p, "factorisation must re-expand");
        assert_eq!(f.factors.len(), expected_factors, "{:?}", f);
    }

    #[test]
    fn difference_of_squares() {
        let x = v("x");
        check(&(&x.pow(2) - &Polynomial::one()), 2);
        let y = v("y");
        check(&(&x.pow(2) - &y.pow(2)), 2);
    }

    #[test]
    fn common_factors() {
        let (a, b, c) = (v("a"), v("b"), v("c"));
        check(&(&(&a * &b) + &(&a * &c)), 2);
        let p = &(&b + &c) * &(&a + &Polynomial::one());
        check(&p, 2);
        check(&(&(&a - &b).pow(2)).scale(&rat(-3)), 1);
    }

    #[test]
    fn irreducible_stays_whole() {
        let (x, y) = (v("x"), v("y"));
        check(&(&x.pow(2) + &Polynomial::one()), 1);
        check(&(&(&x * &y) + &Polynomial::one()), 1);
    }

    #[test]
    fn cubic_rational_root() {
        let x = v("x");
        let p = &(&x.pow(3) - &x.scale(&rat(2))) + &(&x.pow(2).scale(&rat(2)) - &Polynomial::from_int(4));
        // (x + 2)(x^2 - 2)
        check(&p, 2);
    }
}
