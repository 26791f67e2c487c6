use std::fmt;

use serde::{Deserialize, Serialize};

/// A polynomial indeterminate.
///
/// The derived order is the canonical variable order: every `Psi(i, j)` in
/// row-major index order, then named parameters lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Var {
    /// Unknown matrix entry `J^i_j`, one-based `(i, j)`.
    Psi(u16, u16),
    /// Named parameter such as `lambda`.
    Param(String),
}

impl Var {
    pub fn psi(i: usize, j: usize) -> Self {
        Var::Psi(i as u16, j as u16)
    }

    pub fn param(name: &str) -> Self {
        Var::Param(name.to_string())
    }

    pub fn is_psi(&self) -> bool {
        matches!(self, Var::Psi(..))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Psi(i, j) => write!(f, "psi_{}_{}", i, j),
            Var::Param(name) => f.write_str(name),
        }
    }
}
