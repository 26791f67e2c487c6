//! Exact matrices and subspaces: reduction, rank, kernels, inversion,
//! inertia and subspace lattice operations.

mod bareiss;
mod matrix;
mod rref;
mod signature;
mod subspace;

use thiserror::Error;

use crate::scalar::ScalarError;

pub use bareiss::{determinant, invert};
pub use matrix::{dot, Matrix};
pub use rref::{kernel_vectors, rank, rref, Rref};
pub use signature::{signature, Inertia};
pub use subspace::{format_vector, Subspace};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("pivot candidate `{entry}` at ({row}, {col}) is neither certified nonzero nor identically zero")]
    UndecidablePivot { row: usize, col: usize, entry: String },
    #[error("matrix is singular")]
    Singular,
    #[error("expected a square matrix, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("entry `{0}` is not rational")]
    Symbolic(String),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    Ambient(usize, usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}
