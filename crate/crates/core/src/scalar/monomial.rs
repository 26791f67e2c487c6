use std::cmp::Ordering;
use std::fmt;

use super::Var;

/// Power product of variables, stored sparsely and sorted by variable.
///
/// `Ord` is graded lexicographic: total degree first, then the exponent of
/// the earliest variable in the canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    powers: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { powers: Vec::new() }
    }

    pub fn var(v: Var) -> Self {
        Monomial {
            powers: vec![(v, 1)],
        }
    }

    /// Builds a monomial from arbitrary (possibly repeated) factors.
    pub fn from_powers<I: IntoIterator<Item = (Var, u32)>>(powers: I) -> Self {
        let mut v: Vec<(Var, u32)> = powers.into_iter().filter(|(_, e)| *e > 0).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(v.len());
        for (var, e) in v {
            match out.last_mut() {
                Some((last, le)) if *last == var => *le += e,
                _ => out.push((var, e)),
            }
        }
        Monomial { powers: out }
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.powers
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.powers
            .iter()
            .find(|(x, _)| x == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.powers.iter().map(|(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.powers.len() + other.powers.len());
        let (mut a, mut b) = (self.powers.iter().peekable(), other.powers.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => {
                        out.push((va.clone(), *ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((vb.clone(), *eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push((va.clone(), ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some((va, ea)), None) => {
                    out.push((va.clone(), *ea));
                    a.next();
                }
                (None, Some((vb, eb))) => {
                    out.push((vb.clone(), *eb));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial { powers: out }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.powers.len());
        let mut rest = other.powers.iter().peekable();
        for (v, e) in &self.powers {
            let mut e = *e;
            if let Some((ov, oe)) = rest.peek() {
                match ov.cmp(v) {
                    Ordering::Less => return None,
                    Ordering::Equal => {
                        if *oe > e {
                            return None;
                        }
                        e -= oe;
                        rest.next();
                    }
                    Ordering::Greater => {}
                }
            }
            if e > 0 {
                out.push((v.clone(), e));
            }
        }
        if rest.next().is_some() {
            return None;
        }
        Some(Monomial { powers: out })
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial {
            powers: self.powers.iter().map(|(v, e)| (v.clone(), e * k)).collect(),
        }
    }

    /// Componentwise minimum exponent.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let powers = self
            .powers
            .iter()
            .filter_map(|(v, e)| {
                let o = other.degree_in(v);
                (o > 0).then(|| (v.clone(), (*e).min(o)))
            })
            .collect();
        Monomial { powers }
    }

    /// Square root of a monomial with all exponents even.
    pub fn sqrt(&self) -> Option<Monomial> {
        if self.powers.iter().any(|(_, e)| e % 2 != 0) {
            return None;
        }
        Some(Monomial {
            powers: self.powers.iter().map(|(v, e)| (v.clone(), e / 2)).collect(),
        })
    }

    pub fn without(&self, v: &Var) -> Monomial {
        Monomial {
            powers: self.powers.iter().filter(|(x, _)| x != v).cloned().collect(),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.powers.iter().zip(other.powers.iter()) {
            match a.0.cmp(&b.0) {
                // `self` carries a positive power of an earlier variable.
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match a.1.cmp(&b.1) {
                    Ordering::Equal => {}
                    ord => return ord,
                },
            }
        }
        self.powers.len().cmp(&other.powers.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.powers.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.powers.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, e)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Var {
        Var::psi(1, 1)
    }
    fn y() -> Var {
        Var::psi(1, 2)
    }

    #[test]
    fn grlex_order() {
        let x2 = Monomial::from_powers([(x(), 2)]);
        let xy = Monomial::from_powers([(x(), 1), (y(), 1)]);
        let y2 = Monomial::from_powers([(y(), 2)]);
        let x1 = Monomial::var(x());
        assert!(x2 > xy && xy > y2 && y2 > x1 && x1 > Monomial::one());
    }

    #[test]
    fn division_and_gcd() {
        let a = Monomial::from_powers([(x(), 3), (y(), 1)]);
        let b = Monomial::from_powers([(x(), 1), (y(), 1)]);
        assert_eq!(a.div(&b), Some(Monomial::from_powers([(x(), 2)])));
        assert_eq!(b.div(&a), None);
        assert_eq!(a.gcd(&Monomial::from_powers([(x(), 2)])), Monomial::from_powers([(x(), 2)]));
        assert_eq!(b.mul(&b), Monomial::from_powers([(x(), 2), (y(), 2)]));
    }
}
