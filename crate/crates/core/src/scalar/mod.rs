//! Exact scalars: rationals, multivariate polynomials over the rationals and
//! rational functions whose denominators are certified nonzero.

mod facts;
pub mod factor;
mod monomial;
mod parse;
mod polynomial;
pub mod square;
mod value;
mod var;

use thiserror::Error;

pub use facts::{Facts, Stripped};
pub use factor::{factor, Factorization};
pub use monomial::Monomial;
pub use parse::{parse_polynomial, parse_scalar, ParseContext};
pub use polynomial::Polynomial;
pub use square::as_perfect_square;
pub use value::{Nonzero, Scalar};
pub use var::Var;

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ScalarError {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("undeclared identifier `{name}` at {position}")]
    Undeclared { position: usize, name: String },
    #[error("division at {position} by `{divisor}` which is not certified nonzero (blocking factor `{blocking}`)")]
    UndeclaredDivisor {
        position: usize,
        divisor: String,
        blocking: String,
    },
    #[error("division by `{divisor}` which is not certified nonzero (blocking factor `{blocking}`)")]
    IllegalDivision { divisor: String, blocking: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("substitution sends denominator factor `{factor}` to zero")]
    ZeroDenominator { factor: String },
    #[error("expression `{0}` is not a polynomial")]
    NotPolynomial(String),
}
