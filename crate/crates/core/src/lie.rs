//! Lie algebras given by structure constants in a fixed basis `e_1..e_n`.

use std::fmt;

use thiserror::Error;

use crate::field::Field;
use crate::linalg::{format_vector, LinalgError, Matrix, Subspace};
use crate::scalar::{Facts, Scalar};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum LieError {
    #[error("Jacobi identity fails at ({}, {}, {}): residual {residual}", .triple.0 + 1, .triple.1 + 1, .triple.2 + 1)]
    Jacobi {
        triple: (usize, usize, usize),
        residual: String,
    },
    #[error("bracket index ({}, {}) invalid for dimension {dim}", .i + 1, .j + 1)]
    Index { i: usize, j: usize, dim: usize },
    #[error("expected a vector of length {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Unverified structure constants: `[e_i, e_j] = sum_k C^k_ij e_k`.
///
/// Only pairs `i < j` are stored; the other half is implied by
/// antisymmetry.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants<F = Scalar> {
    dim: usize,
    table: Vec<Vec<F>>,
}

impl<F: Field> StructureConstants<F> {
    /// The abelian algebra of dimension `dim`.
    pub fn new(dim: usize) -> Self {
        StructureConstants {
            dim,
            table: vec![vec![F::zero(); dim]; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets `[e_i, e_j]` (zero-based) and its antisymmetric partner.
    pub fn set(&mut self, i: usize, j: usize, value: Vec<F>) -> Result<(), LieError> {
        let n = self.dim;
        if i >= n || j >= n || i == j {
            return Err(LieError::Index { i, j, dim: n });
        }
        if value.len() != n {
            return Err(LieError::Length {
                expected: n,
                got: value.len(),
            });
        }
        self.table[j * n + i] = value.iter().map(|x| -x.clone()).collect();
        self.table[i * n + j] = value;
        Ok(())
    }

    pub fn with(mut self, i: usize, j: usize, value: Vec<F>) -> Result<Self, LieError> {
        self.set(i, j, value)?;
        Ok(self)
    }

    /// Sets `[e_i, e_j] = e_k` with one-based indices, as brackets are
    /// usually written.
    pub fn with_basis(self, i: usize, j: usize, k: usize) -> Result<Self, LieError> {
        let n = self.dim;
        if k == 0 || k > n || i == 0 || j == 0 {
            return Err(LieError::Index {
                i: i.wrapping_sub(1),
                j: j.wrapping_sub(1),
                dim: n,
            });
        }
        let mut v = vec![F::zero(); n];
        v[k - 1] = F::one();
        self.with(i - 1, j - 1, v)
    }

    /// `C^k_ij`.
    pub fn c(&self, k: usize, i: usize, j: usize) -> &F {
        &self.table[i * self.dim + j][k]
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[F] {
        &self.table[i * self.dim + j]
    }

    /// Nonzero brackets `[e_i, e_j]` with `i < j`, in lexicographic order.
    pub fn nonzero_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.dim;
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.bracket_basis(i, j).iter().any(|x| !x.is_zero()))
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.nonzero_pairs().is_empty()
    }

    pub fn bracket(&self, x: &[F], y: &[F]) -> Vec<F> {
        let n = self.dim;
        let mut out = vec![F::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if i == j || y[j].is_zero() {
                    continue;
                }
                let xy = x[i].clone() * y[j].clone();
                for (k, slot) in out.iter_mut().enumerate() {
                    let c = self.c(k, i, j);
                    if !c.is_zero() {
                        *slot = slot.clone() + xy.clone() * c.clone();
                    }
                }
            }
        }
        out
    }

    /// Jacobi residuals `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]`
    /// over all `i < j < k`.
    pub fn check_jacobi(&self) -> JacobiReport<F> {
        let n = self.dim;
        let mut violations = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (ei, ej, ek) = (unit::<F>(n, i), unit::<F>(n, j), unit::<F>(n, k));
                    let a = self.bracket(self.bracket_basis(i, j), &ek);
                    let b = self.bracket(self.bracket_basis(j, k), &ei);
                    let c = self.bracket(self.bracket_basis(k, i), &ej);
                    let residual: Vec<F> = (0..n)
                        .map(|l| a[l].clone() + b[l].clone() + c[l].clone())
                        .collect();
                    if residual.iter().any(|x| !x.is_zero()) {
                        violations.push(((i, j, k), residual));
                    }
                }
            }
        }
        JacobiReport { violations }
    }

    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> G) -> StructureConstants<G> {
        StructureConstants {
            dim: self.dim,
            table: self.table.iter().map(|v| v.iter().map(&f).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobiReport<F> {
    /// Zero-based triples with their nonzero residual vectors.
    pub violations: Vec<((usize, usize, usize), Vec<F>)>,
}

impl<F: Field> JacobiReport<F> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn unit<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainKind {
    LowerCentral,
    AscendingCentral,
    JInvariant,
}

/// A chain of ideals computed until it stabilises.
///
/// Ascending kinds store `g_1, g_2, ...` (the trivial `g_0` is implied);
/// the lower central kind stores `C^0 g, C^1 g, ...`. The repeated link at
/// stabilisation is not stored twice.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealChain<F = Scalar> {
    pub kind: ChainKind,
    pub links: Vec<Subspace<F>>,
}

impl<F: Field> IdealChain<F> {
    pub fn dims(&self) -> Vec<usize> {
        self.links.iter().map(Subspace::dim).collect()
    }

    pub fn last(&self) -> &Subspace<F> {
        self.links.last().expect("chains have at least one link")
    }

    /// Link `k` in the usual numbering (`g_k`, `a_k`, `C^k`).
    pub fn get(&self, k: usize) -> Option<Subspace<F>> {
        let ambient = self.links.first()?.ambient();
        match self.kind {
            ChainKind::LowerCentral => Some(self.links.get(k).unwrap_or(self.last()).clone()),
            _ if k == 0 => Some(Subspace::zero(ambient)),
            _ => Some(self.links.get(k - 1).unwrap_or(self.last()).clone()),
        }
    }
}

impl<F: Field> fmt::Display for IdealChain<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, offset) = match self.kind {
            ChainKind::LowerCentral => ("C^", 0),
            ChainKind::AscendingCentral => ("g_", 1),
            ChainKind::JInvariant => ("a_", 1),
        };
        for (k, link) in self.links.iter().enumerate() {
            writeln!(f, "{}{} (dim {}) = {}", name, k + offset, link.dim(), link)?;
        }
        Ok(())
    }
}

/// Structure constants that satisfy the Jacobi identity, together with the
/// nonvanishing side conditions on any parameters they contain.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra<F = Scalar> {
    constants: StructureConstants<F>,
    facts: Facts,
}

impl<F: Field> LieAlgebra<F> {
    pub fn new(constants: StructureConstants<F>, facts: Facts) -> Result<Self, LieError> {
        if let Some(((i, j, k), r)) = constants.check_jacobi().violations.into_iter().next() {
            return Err(LieError::Jacobi {
                triple: (i, j, k),
                residual: format_vector(&r),
            });
        }
        Ok(LieAlgebra { constants, facts })
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            constants: StructureConstants::new(dim),
            facts: Facts::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.constants.dim
    }

    pub fn constants(&self) -> &StructureConstants<F> {
        &self.constants
    }

    pub fn facts(&self) -> &Facts {
        &self.facts
    }

    pub fn c(&self, k: usize, i: usize, j: usize) -> &F {
        self.constants.c(k, i, j)
    }

    pub fn bracket(&self, x: &[F], y: &[F]) -> Result<Vec<F>, LieError> {
        let n = self.dim();
        for v in [x, y] {
            if v.len() != n {
                return Err(LieError::Length {
                    expected: n,
                    got: v.len(),
                });
            }
        }
        Ok(self.constants.bracket(x, y))
    }

    /// Matrix of `ad_x = [x, .]`.
    pub fn ad(&self, x: &[F]) -> Matrix<F> {
        let n = self.dim();
        let cols: Vec<Vec<F>> = (0..n).map(|j| self.constants.bracket(x, &unit(n, j))).collect();
        Matrix::from_fn(n, n, |k, j| cols[j][k].clone())
    }

    /// Matrix of `X -> [X, e_j]`.
    fn right_mult(&self, j: usize) -> Matrix<F> {
        let n = self.dim();
        Matrix::from_fn(n, n, |k, i| self.c(k, i, j).clone())
    }

    /// `{X : M X in target}` for every map `M` in `maps`.
    pub fn preimage(&self, maps: &[Matrix<F>], target: &Subspace<F>) -> Result<Subspace<F>, LieError> {
        let n = self.dim();
        let ann = target.annihilator(&self.facts)?;
        let mut rows = Vec::new();
        for m in maps {
            for a in ann.basis_vectors() {
                let row: Vec<F> = (0..n)
                    .map(|i| (0..m.rows()).fold(F::zero(), |acc, k| acc + a[k].clone() * m[(k, i)].clone()))
                    .collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            return Ok(Subspace::full(n));
        }
        Ok(Subspace::kernel(&Matrix::from_rows(rows), &self.facts)?)
    }

    pub fn center(&self) -> Result<Subspace<F>, LieError> {
        let maps: Vec<_> = (0..self.dim()).map(|j| self.right_mult(j)).collect();
        self.preimage(&maps, &Subspace::zero(self.dim()))
    }

    pub fn derived_ideal(&self) -> Result<Subspace<F>, LieError> {
        let full = Subspace::full(self.dim());
        self.subspace_bracket(&full, &full)
    }

    pub fn subspace_bracket(&self, u: &Subspace<F>, v: &Subspace<F>) -> Result<Subspace<F>, LieError> {
        let n = self.dim();
        for s in [u, v] {
            if s.ambient() != n {
                return Err(LinalgError::Ambient(n, s.ambient()).into());
            }
        }
        let mut vs = Vec::new();
        for x in u.basis_vectors() {
            for y in v.basis_vectors() {
                let b = self.constants.bracket(&x, &y);
                if b.iter().any(|c| !c.is_zero()) {
                    vs.push(b);
                }
            }
        }
        Ok(Subspace::span(n, &vs, &self.facts)?)
    }

    pub fn lower_central_series(&self) -> Result<IdealChain<F>, LieError> {
        let full = Subspace::full(self.dim());
        let mut links = vec![full.clone()];
        loop {
            let next = self.subspace_bracket(&full, links.last().unwrap())?;
            if &next == links.last().unwrap() {
                break;
            }
            let done = next.is_zero();
            links.push(next);
            if done {
                break;
            }
        }
        Ok(IdealChain {
            kind: ChainKind::LowerCentral,
            links,
        })
    }

    pub fn ascending_series(&self) -> Result<IdealChain<F>, LieError> {
        let maps: Vec<_> = (0..self.dim()).map(|j| self.right_mult(j)).collect();
        self.ascending_with(&maps, ChainKind::AscendingCentral)
    }

    /// `a_k = {X : [X, g] ⊂ a_(k-1) and [JX, g] ⊂ a_(k-1)}` from `a_0 = 0`.
    pub fn j_invariant_series(&self, j: &Matrix<F>) -> Result<IdealChain<F>, LieError> {
        let mut maps: Vec<_> = (0..self.dim()).map(|k| self.right_mult(k)).collect();
        let twisted: Vec<_> = maps.iter().map(|m| m.mul(j)).collect();
        maps.extend(twisted);
        self.ascending_with(&maps, ChainKind::JInvariant)
    }

    fn ascending_with(&self, maps: &[Matrix<F>], kind: ChainKind) -> Result<IdealChain<F>, LieError> {
        let n = self.dim();
        let mut prev = Subspace::zero(n);
        let mut links: Vec<Subspace<F>> = Vec::new();
        loop {
            let next = self.preimage(maps, &prev)?;
            if next == prev && !links.is_empty() {
                break;
            }
            let full = next.is_full();
            links.push(next.clone());
            if full || next == prev {
                break;
            }
            prev = next;
        }
        Ok(IdealChain { kind, links })
    }

    /// Nilpotency class, `None` when the lower central series does not
    /// reach zero.
    pub fn nilpotency_class(&self) -> Result<Option<usize>, LieError> {
        let chain = self.lower_central_series()?;
        if chain.last().is_zero() {
            Ok(Some(chain.links.iter().filter(|l| !l.is_zero()).count()))
        } else {
            Ok(None)
        }
    }

    pub fn is_nilpotent(&self) -> Result<bool, LieError> {
        Ok(self.nilpotency_class()?.is_some())
    }

    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> G) -> LieAlgebra<G> {
        LieAlgebra {
            constants: self.constants.map_field(f),
            facts: self.facts.clone(),
        }
    }
}

impl<F: Field> fmt::Display for LieAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs = self.constants.nonzero_pairs();
        if pairs.is_empty() {
            return write!(f, "abelian, dim {}", self.dim());
        }
        let parts: Vec<String> = pairs
            .iter()
            .map(|&(i, j)| format!("[e{},e{}] = {}", i + 1, j + 1, format_vector(self.constants.bracket_basis(i, j))))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}
