use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Facts, Polynomial, Rational, ScalarError, Var};

/// Whether a value is certified zero or nonzero under a set of facts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nonzero {
    Zero,
    NonZero,
    Unknown,
}

/// Element of the rational function field whose denominators are products
/// of factors certified nonzero.
///
/// Invariant: every denominator factor is monic and non-constant, and the
/// numerator is not divisible by any of them. Combined with monic factors
/// that are irreducible and pairwise coprime this makes the representation
/// canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar {
    num: Polynomial,
    den: BTreeMap<Polynomial, u32>,
}

impl Scalar {
    pub fn from_poly(p: Polynomial) -> Self {
        Scalar {
            num: p,
            den: BTreeMap::new(),
        }
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::from_poly(Polynomial::constant(q))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(Polynomial::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(Polynomial::var(v))
    }

    pub fn psi(i: usize, j: usize) -> Self {
        Self::var(Var::psi(i, j))
    }

    pub fn param(name: &str) -> Self {
        Self::var(Var::param(name))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator_factors(&self) -> &BTreeMap<Polynomial, u32> {
        &self.den
    }

    pub fn denominator(&self) -> Polynomial {
        self.den
            .iter()
            .fold(Polynomial::one(), |acc, (f, e)| &acc * &f.pow(*e))
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut vs = self.num.vars();
        for f in self.den.keys() {
            vs.extend(f.vars());
        }
        vs
    }

    fn reduce(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let mut den = BTreeMap::new();
        for (f, mut e) in std::mem::take(&mut self.den) {
            while e > 0 {
                match self.num.div_exact(&f) {
                    Some(q) => {
                        self.num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e > 0 {
                den.insert(f, e);
            }
        }
        self.den = den;
        self
    }

    pub fn nonzero_status(&self, facts: &Facts) -> Nonzero {
        if self.num.is_zero() {
            Nonzero::Zero
        } else if self.num.is_constant() || self.extended_facts(facts).certifies(&self.num) {
            Nonzero::NonZero
        } else {
            Nonzero::Unknown
        }
    }

    fn extended_facts(&self, facts: &Facts) -> Facts {
        let mut out = facts.clone();
        for f in self.den.keys() {
            out.declare(f);
        }
        out
    }

    /// Field division; the divisor's numerator must be a nonzero constant
    /// times declared-nonzero factors.
    pub fn checked_div(&self, rhs: &Scalar, facts: &Facts) -> Result<Scalar, ScalarError> {
        if rhs.num.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let facts = rhs.extended_facts(&self.extended_facts(facts));
        let stripped = facts.strip(&rhs.num);
        if !stripped.is_unit() {
            return Err(ScalarError::IllegalDivision {
                divisor: rhs.num.to_string(),
                blocking: stripped.core.to_string(),
            });
        }
        let mut num = self.num.scale(&stripped.unit.recip());
        for (f, e) in &rhs.den {
            num = &num * &f.pow(*e);
        }
        let mut den = self.den.clone();
        for (f, e) in stripped.factors {
            *den.entry(f).or_default() += e;
        }
        Ok(Scalar { num, den }.reduce())
    }

    pub fn checked_inv(&self, facts: &Facts) -> Result<Scalar, ScalarError> {
        Scalar::one().checked_div(self, facts)
    }

    pub fn pow(&self, k: u32) -> Scalar {
        Scalar {
            num: self.num.pow(k),
            den: self.den.iter().map(|(f, e)| (f.clone(), e * k)).collect(),
        }
    }

    /// Simultaneous substitution of variables by scalars.
    pub fn substitute(&self, bindings: &BTreeMap<Var, Scalar>, facts: &Facts) -> Result<Scalar, ScalarError> {
        if bindings.is_empty() || self.vars().iter().all(|v| !bindings.contains_key(v)) {
            return Ok(self.clone());
        }
        let mut facts = self.extended_facts(facts);
        for b in bindings.values() {
            facts = b.extended_facts(&facts);
        }
        let mut out = substitute_poly(&self.num, bindings);
        for (f, e) in &self.den {
            if f.vars().iter().any(|v| bindings.contains_key(v)) {
                let g = substitute_poly(f, bindings);
                if g.num.is_zero() {
                    return Err(ScalarError::ZeroDenominator {
                        factor: f.to_string(),
                    });
                }
                out = out.checked_div(&g.pow(*e), &facts)?;
            } else {
                out = out.checked_div(&Scalar::from_poly(f.pow(*e)), &facts)?;
            }
        }
        Ok(out)
    }

    pub fn eval_rational(&self, point: &BTreeMap<Var, Rational>) -> Option<Rational> {
        let num = self.num.eval_partial(point).as_constant()?;
        let den = self.denominator().eval_partial(point).as_constant()?;
        if den.is_zero() {
            return None;
        }
        Some(num / den)
    }
}

/// Polynomial substitution without denominators of its own. Works over the
/// common denominator and reduces once.
pub(crate) fn substitute_poly(p: &Polynomial, bindings: &BTreeMap<Var, Scalar>) -> Scalar {
    let mut top: BTreeMap<&Var, u32> = BTreeMap::new();
    for (m, _) in p.terms() {
        for (v, e) in m.powers() {
            if bindings.contains_key(v) {
                let slot = top.entry(v).or_default();
                *slot = (*slot).max(*e);
            }
        }
    }
    let mut den: BTreeMap<Polynomial, u32> = BTreeMap::new();
    for (v, e) in &top {
        for (f, k) in &bindings[*v].den {
            *den.entry(f.clone()).or_default() += k * e;
        }
    }
    let mut nums: BTreeMap<(&Var, u32), Polynomial> = BTreeMap::new();
    let mut dens: BTreeMap<(&Var, u32), Polynomial> = BTreeMap::new();
    let mut acc = Polynomial::zero();
    for (m, c) in p.terms() {
        let mut term = Polynomial::constant(c.clone());
        let mut rest = Vec::new();
        let mut seen: Vec<&Var> = Vec::new();
        for (v, e) in m.powers() {
            match bindings.get(v) {
                Some(b) => {
                    seen.push(v);
                    let pw = nums.entry((v, *e)).or_insert_with(|| b.num.pow(*e));
                    term = &term * &*pw;
                    let lift = top[v] - e;
                    if lift > 0 && !b.den.is_empty() {
                        let d = dens.entry((v, lift)).or_insert_with(|| b.denominator().pow(lift));
                        term = &term * &*d;
                    }
                }
                None => rest.push((v.clone(), *e)),
            }
        }
        for (v, e) in &top {
            if !seen.contains(v) && !bindings[*v].den.is_empty() {
                let d = dens.entry((*v, *e)).or_insert_with(|| bindings[*v].denominator().pow(*e));
                term = &term * &*d;
            }
        }
        if !rest.is_empty() {
            term = term.mul_monomial(&super::Monomial::from_powers(rest));
        }
        acc = &acc + &term;
    }
    let out = Scalar { num: acc, den };
    if out.den.is_empty() {
        out
    } else {
        out.reduce()
    }
}

impl From<Polynomial> for Scalar {
    fn from(p: Polynomial) -> Self {
        Scalar::from_poly(p)
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::from_rational(q)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.den == rhs.den {
            return Scalar {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            }
            .reduce();
        }
        let mut den = self.den.clone();
        for (f, e) in &rhs.den {
            let slot = den.entry(f.clone()).or_default();
            *slot = (*slot).max(*e);
        }
        let lift = |s: &Scalar| {
            den.iter().fold(s.num.clone(), |acc, (f, e)| {
                let have = s.den.get(f).copied().unwrap_or(0);
                &acc * &f.pow(e - have)
            })
        };
        Scalar {
            num: &lift(self) + &lift(rhs),
            den: den.clone(),
        }
        .reduce()
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.num.is_zero() || rhs.num.is_zero() {
            return Scalar::zero();
        }
        let mut den = self.den.clone();
        for (f, e) in &rhs.den {
            *den.entry(f.clone()).or_default() += e;
        }
        let s = Scalar {
            num: &self.num * &rhs.num,
            den,
        };
        if self.den.is_empty() && rhs.den.is_empty() {
            s
        } else {
            s.reduce()
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::from_poly(Polynomial::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::from_poly(Polynomial::one())
    }
}

fn fmt_factor(f: &Polynomial, e: u32) -> String {
    let base = if f.num_terms() > 1 {
        format!("({})", f)
    } else {
        f.to_string()
    };
    if e == 1 {
        base
    } else if f.num_terms() > 1 || f.leading_term().is_some_and(|(m, _)| m.degree() == 1) {
        format!("{}^{}", base, e)
    } else {
        format!("({})^{}", base, e)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        if self.den.len() == 1 {
            if let Some((p, 1)) = self.den.iter().next() {
                return write!(f, "({})/({})", self.num, p);
            }
        }
        let den: Vec<String> = self.den.iter().rev().map(|(p, e)| fmt_factor(p, *e)).collect();
        write!(f, "({})/({})", self.num, den.join("*"))
    }
}
