//! Exact computation of left-invariant para-Kähler structures on Lie
//! algebras given by structure constants.

pub mod catalog;
pub mod curvature;
pub mod field;
pub mod lie;
pub mod linalg;
pub mod para;
pub mod scalar;
pub mod selfcheck;
pub mod solver;

pub use field::Field;
pub use num_traits::{One, Zero};
pub use scalar::{Facts, Polynomial, Rational, Scalar, Var};

/// Everything is generic over [`Field`]; these fix the two scalars in use.
pub type RationalAlgebra = lie::LieAlgebra<Rational>;
pub type SymbolicAlgebra = lie::LieAlgebra<Scalar>;
pub type RationalMatrix = linalg::Matrix<Rational>;
pub type SymbolicMatrix = linalg::Matrix<Scalar>;
pub type RationalTwoForm = para::TwoForm<Rational>;
pub type RationalEndomorphism = para::Endomorphism<Rational>;
