//! The scalar abstraction shared by the linear algebra and geometry layers.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{Facts, Nonzero, Rational, Scalar, ScalarError};

/// An exact field whose zero tests may depend on declared side conditions.
///
/// Rationals decide every test; rational functions defer to [`Facts`].
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn nonzero_status(&self, facts: &Facts) -> Nonzero;

    fn checked_div(&self, rhs: &Self, facts: &Facts) -> Result<Self, ScalarError>;

    fn from_rational(q: Rational) -> Self;

    fn to_rational(&self) -> Option<Rational>;

    fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }
}

impl Field for Rational {
    fn nonzero_status(&self, _: &Facts) -> Nonzero {
        if self.is_zero() {
            Nonzero::Zero
        } else {
            Nonzero::NonZero
        }
    }

    fn checked_div(&self, rhs: &Self, _: &Facts) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(self / rhs)
        }
    }

    fn from_rational(q: Rational) -> Self {
        q
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl Field for Scalar {
    fn nonzero_status(&self, facts: &Facts) -> Nonzero {
        Scalar::nonzero_status(self, facts)
    }

    fn checked_div(&self, rhs: &Self, facts: &Facts) -> Result<Self, ScalarError> {
        Scalar::checked_div(self, rhs, facts)
    }

    fn from_rational(q: Rational) -> Self {
        Scalar::from_rational(q)
    }

    fn to_rational(&self) -> Option<Rational> {
        self.as_rational()
    }
}
