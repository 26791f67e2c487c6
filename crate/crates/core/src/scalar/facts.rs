use std::collections::BTreeSet;

use num_traits::One;

use super::{factor, Polynomial, Rational};

/// Polynomials declared nonzero (parameter side conditions).
///
/// Stored as monic factors. Declaring `1 - lambda` records `lambda - 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Facts {
    factors: BTreeSet<Polynomial>,
}

/// Decomposition `p = unit * prod(factor^mult) * core` with `core` monic.
#[derive(Clone, Debug, PartialEq)]
pub struct Stripped {
    pub unit: Rational,
    pub factors: Vec<(Polynomial, u32)>,
    pub core: Polynomial,
}

impl Stripped {
    pub fn is_unit(&self) -> bool {
        self.core.is_one_poly()
    }
}

impl Polynomial {
    pub(crate) fn is_one_poly(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }
}

impl Facts {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `p != 0`; `p` is split into its recognisable factors.
    /// Constants are accepted only when nonzero and add nothing.
    pub fn declare(&mut self, p: &Polynomial) -> bool {
        if p.is_zero() {
            return false;
        }
        for (f, _) in factor::factor(p).factors {
            if !f.is_constant() {
                self.factors.insert(f);
            }
        }
        true
    }

    pub fn with(mut self, p: &Polynomial) -> Self {
        self.declare(p);
        self
    }

    pub fn union(&self, other: &Facts) -> Facts {
        let mut out = self.clone();
        out.factors.extend(other.factors.iter().cloned());
        out
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.factors.contains(f)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Polynomial> {
        self.factors.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Divides out every declared factor as often as possible.
    pub fn strip(&self, p: &Polynomial) -> Stripped {
        if p.is_zero() {
            return Stripped {
                unit: Rational::one(),
                factors: Vec::new(),
                core: Polynomial::zero(),
            };
        }
        let mut rest = p.clone();
        let mut factors = Vec::new();
        for f in &self.factors {
            let mut mult = 0;
            while let Some(q) = rest.div_exact(f) {
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                factors.push((f.clone(), mult));
            }
        }
        let (unit, core) = rest.monic();
        Stripped {
            unit,
            factors,
            core,
        }
    }

    /// True when `p` is a nonzero constant times a product of declared factors.
    pub fn certifies(&self, p: &Polynomial) -> bool {
        !p.is_zero() && self.strip(p).is_unit()
    }

    /// Rejects substitutions that send a declared factor to zero.
    pub fn violated_by(&self, point: &std::collections::BTreeMap<super::Var, Rational>) -> Option<Polynomial> {
        self.factors
            .iter()
            .find(|f| f.eval_partial(point).is_zero())
            .cloned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Var;

    fn lambda() -> Polynomial {
        Polynomial::var(Var::param("lambda"))
    }

    #[test]
    fn declared_factors_are_normalised() {
        let mut facts = Facts::new();
        facts.declare(&(&Polynomial::one() - &lambda()));
        facts.declare(&(&lambda() - &Polynomial::one()));
        facts.declare(&lambda().scale(&Rational::from_integer(3.into())));
        assert_eq!(facts.iter().count(), 2);
        assert!(facts.contains(&(&lambda() - &Polynomial::one())));
    }

    #[test]
    fn strip_products() {
        let facts = Facts::new().with(&lambda()).with(&(&lambda() - &Polynomial::one()));
        let p = (&lambda() * &(&Polynomial::one() - &lambda())).scale(&Rational::from_integer(2.into()));
        let s = facts.strip(&p);
        assert!(s.is_unit());
        assert_eq!(s.unit, Rational::from_integer((-2).into()));
        assert!(facts.certifies(&p));
        assert!(!facts.certifies(&(&lambda() + &Polynomial::one())));
    }
}
