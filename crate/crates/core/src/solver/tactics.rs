//! Pattern tests behind the elimination rules. Each works on the core of an
//! equation: its numerator with every declared-nonzero factor removed, made
//! monic. An equation vanishes exactly when its core does.

use num_traits::{Signed, Zero};

use crate::linalg::{signature, Matrix};
use crate::scalar::{as_perfect_square, factor, Facts, Polynomial, Rational, Scalar, Var};

#[derive(Clone, Debug, PartialEq)]
pub struct Core {
    pub poly: Polynomial,
}

impl Core {
    pub fn of(value: &Scalar, facts: &Facts) -> Core {
        Core {
            poly: facts.strip(value.numerator()).core,
        }
    }

    /// A nonzero constant times declared-nonzero factors.
    pub fn is_contradiction(&self) -> bool {
        self.poly.as_constant().is_some_and(|c| !c.is_zero())
    }

    pub fn unknowns(&self) -> Vec<Var> {
        self.poly.vars().into_iter().filter(Var::is_psi).collect()
    }

    /// `core = c * root^2` with `c > 0`. The core is monic, which absorbs the
    /// sign of the original equation; a negative multiple of a square
    /// vanishes exactly where the square does.
    pub fn square_root(&self) -> Option<Polynomial> {
        let (c, root) = as_perfect_square(&self.poly)?;
        debug_assert!(c.is_positive());
        Some(root)
    }

    /// `(v, value)` solving `core = 0` for an unknown that occurs linearly
    /// with a certified coefficient. Constant coefficients are preferred,
    /// then the earliest unknown.
    pub fn linear_solution(&self, facts: &Facts) -> Option<(Var, Scalar)> {
        solve_linear(&self.poly, facts)
    }

    /// Distinct factors when the core splits nontrivially, sorted.
    pub fn split(&self) -> Option<Vec<Polynomial>> {
        let fz = factor(&self.poly);
        let mut fs: Vec<Polynomial> = fz
            .factors
            .iter()
            .filter(|(f, _)| !f.is_constant())
            .map(|(f, _)| f.clone())
            .collect();
        if fs.len() < 2 && fz.factors.iter().all(|(_, m)| *m == 1) {
            return None;
        }
        fs.sort();
        fs.dedup();
        Some(fs)
    }

    /// An unknown occurring linearly whose coefficient is not certified:
    /// `(v, coefficient)`.
    pub fn uncertified_coefficient(&self, facts: &Facts) -> Option<(Var, Polynomial)> {
        for v in self.unknowns() {
            if let Some((a, _)) = self.poly.linear_in(&v) {
                if !a.is_constant() && !facts.certifies(&a) {
                    return Some((v, a));
                }
            }
        }
        None
    }
}

pub(crate) fn solve_linear(p: &Polynomial, facts: &Facts) -> Option<(Var, Scalar)> {
    let mut fallback = None;
    for v in p.vars().into_iter().filter(Var::is_psi) {
        let Some((a, b)) = p.linear_in(&v) else {
            continue;
        };
        if a.is_constant() {
            return Some((v.clone(), linear_value(&a, &b, facts)?));
        }
        if fallback.is_none() && facts.certifies(&a) {
            fallback = Some((v.clone(), linear_value(&a, &b, facts)?));
        }
    }
    fallback
}

fn linear_value(a: &Polynomial, b: &Polynomial, facts: &Facts) -> Option<Scalar> {
    Scalar::from_poly(-b)
        .checked_div(&Scalar::from_poly(a.clone()), facts)
        .ok()
}

/// Every term an even power with positive coefficient, plus a positive
/// constant: positive at every real point.
pub fn is_sos_positive(p: &Polynomial) -> bool {
    let mut constant = Rational::zero();
    for (m, c) in p.terms() {
        if m.is_one() {
            constant = c.clone();
            continue;
        }
        if !c.is_positive() || m.powers().iter().any(|(_, e)| e % 2 == 1) {
            return false;
        }
    }
    constant.is_positive()
}

/// A rational quadratic whose homogenised Gram matrix is positive definite,
/// hence a sum of squares plus a positive constant.
pub fn is_positive_definite_quadratic(p: &Polynomial) -> bool {
    if p.degree() != 2 {
        return false;
    }
    let vars: Vec<Var> = p.vars().into_iter().collect();
    let m = vars.len();
    // Necessary: a positive constant and a positive square term per variable.
    if !p.coefficient(&crate::scalar::Monomial::one()).is_positive() {
        return false;
    }
    let squares = p
        .terms()
        .filter(|(mono, c)| c.is_positive() && mono.powers().len() == 1 && mono.powers()[0].1 == 2)
        .count();
    if squares < m {
        return false;
    }
    let half = Rational::new(1.into(), 2.into());
    let mut g = Matrix::<Rational>::zeros(m + 1, m + 1);
    for (mono, c) in p.terms() {
        let idx: Vec<(usize, u32)> = mono
            .powers()
            .iter()
            .map(|(v, e)| (vars.iter().position(|w| w == v).expect("var"), *e))
            .collect();
        match idx.as_slice() {
            [] => g[(m, m)] = c.clone(),
            [(i, 2)] => g[(*i, *i)] = c.clone(),
            [(i, 1)] => {
                g[(*i, m)] = c * &half;
                g[(m, *i)] = c * &half;
            }
            [(i, 1), (j, 1)] => {
                g[(*i, *j)] = c * &half;
                g[(*j, *i)] = c * &half;
            }
            _ => return false,
        }
    }
    signature(&g).is_ok_and(|s| s.positive == m + 1)
}

pub(crate) fn positive_everywhere(p: &Polynomial) -> bool {
    is_sos_positive(p) || is_positive_definite_quadratic(p)
}
