use std::fmt;

use crate::field::Field;
use crate::scalar::Facts;

use super::rref::{kernel_vectors, rref};
use super::{LinalgError, Matrix};

/// Linear subspace of `F^n` stored by its reduced row-echelon basis, so two
/// subspaces are equal exactly when their stored bases are equal.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(n: usize) -> Self {
        Subspace {
            ambient: n,
            basis: Matrix::zeros(0, n),
            pivots: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            ambient: n,
            basis: Matrix::identity(n),
            pivots: (0..n).collect(),
        }
    }

    /// Span of the zero-based coordinate vectors `e_k`, `k` in `indices`.
    pub fn coordinate(n: usize, indices: &[usize]) -> Self {
        let vectors = indices
            .iter()
            .map(|&k| {
                let mut v = vec![F::zero(); n];
                v[k] = F::one();
                v
            })
            .collect::<Vec<_>>();
        Self::span(n, &vectors, &Facts::new()).expect("coordinate vectors are rational")
    }

    pub fn span(n: usize, vectors: &[Vec<F>], facts: &Facts) -> Result<Self, LinalgError> {
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(LinalgError::Ambient(n, v.len()));
        }
        if vectors.is_empty() {
            return Ok(Self::zero(n));
        }
        let m = Matrix::from_rows(vectors.to_vec());
        let r = rref(&m, facts)?;
        let basis = Matrix::from_fn(r.rank, n, |i, j| r.reduced[(i, j)].clone());
        Ok(Subspace {
            ambient: n,
            basis,
            pivots: r.pivots,
        })
    }

    /// Null space of `m` as a subspace of `F^cols`.
    pub fn kernel(m: &Matrix<F>, facts: &Facts) -> Result<Self, LinalgError> {
        let vs = kernel_vectors(m, facts)?;
        Self::span(m.cols(), &vs, facts)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<F>> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check(&self, other: &Subspace<F>) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::Ambient(self.ambient, other.ambient));
        }
        Ok(())
    }

    /// Membership by reduction against the echelon basis.
    pub fn contains_vector(&self, v: &[F]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient {
            return Err(LinalgError::Ambient(self.ambient, v.len()));
        }
        let mut rest = v.to_vec();
        for (k, &pc) in self.pivots.iter().enumerate() {
            let c = rest[pc].clone();
            if c.is_zero() {
                continue;
            }
            for j in 0..self.ambient {
                let b = &self.basis[(k, j)];
                if !b.is_zero() {
                    rest[j] = rest[j].clone() - c.clone() * b.clone();
                }
            }
        }
        Ok(rest.iter().all(F::is_zero))
    }

    pub fn contains(&self, other: &Subspace<F>) -> Result<bool, LinalgError> {
        self.check(other)?;
        for v in other.basis_vectors() {
            if !self.contains_vector(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace<F>, facts: &Facts) -> Result<Subspace<F>, LinalgError> {
        self.check(other)?;
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Subspace::span(self.ambient, &vs, facts)
    }

    /// `U ∩ V` from the kernel of `[U^T | -V^T]`.
    pub fn intersect(&self, other: &Subspace<F>, facts: &Facts) -> Result<Subspace<F>, LinalgError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        let (du, dv) = (self.dim(), other.dim());
        let system = Matrix::from_fn(self.ambient, du + dv, |i, j| {
            if j < du {
                self.basis[(j, i)].clone()
            } else {
                -other.basis[(j - du, i)].clone()
            }
        });
        let mut vs = Vec::new();
        for coeffs in kernel_vectors(&system, facts)? {
            let mut v = vec![F::zero(); self.ambient];
            for (k, c) in coeffs.iter().take(du).enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (j, slot) in v.iter_mut().enumerate() {
                    *slot = slot.clone() + c.clone() * self.basis[(k, j)].clone();
                }
            }
            vs.push(v);
        }
        Subspace::span(self.ambient, &vs, facts)
    }

    /// `{a : a . w = 0 for all w in self}`.
    pub fn annihilator(&self, facts: &Facts) -> Result<Subspace<F>, LinalgError> {
        if self.is_zero() {
            return Ok(Subspace::full(self.ambient));
        }
        Subspace::kernel(&self.basis, facts)
    }

    /// Image under the linear map `v -> m v`.
    pub fn image(&self, m: &Matrix<F>, facts: &Facts) -> Result<Subspace<F>, LinalgError> {
        let vs: Vec<Vec<F>> = self.basis_vectors().iter().map(|v| m.mul_vec(v)).collect();
        Subspace::span(m.rows(), &vs, facts)
    }

    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> G) -> Subspace<G> {
        Subspace {
            ambient: self.ambient,
            basis: self.basis.map(f),
            pivots: self.pivots.clone(),
        }
    }
}

impl<F: Field> fmt::Display for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis_vectors()
            .iter()
            .map(|v| format_vector(v))
            .collect();
        write!(f, "span{{{}}}", rows.join(", "))
    }
}

/// Renders a vector as a combination of one-based basis vectors `e_k`.
pub fn format_vector<F: Field>(v: &[F]) -> String {
    let mut parts = Vec::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if c.is_one() {
            parts.push(format!("e{}", k + 1));
        } else {
            parts.push(format!("({})*e{}", c, k + 1));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}
