//! Symplectic forms, almost para-complex structures and the relations
//! between them on a Lie algebra.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Field;
use crate::lie::{IdealChain, LieAlgebra, LieError};
use crate::linalg::{rank, LinalgError, Matrix, Subspace};
use crate::scalar::{Facts, Nonzero, Scalar};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ParaError {
    #[error("{what} is {got}x{got}, expected {expected}x{expected}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("omega(X, JY) is not symmetric; omega and J are not compatible")]
    NotSymmetric,
    #[error("cannot decide whether det omega vanishes: {0}")]
    UndecidableDeterminant(String),
    #[error("a_{link}(J) is not J-invariant")]
    NotInvariant { link: usize },
    #[error("Nijenhuis tensor and eigenspace test disagree")]
    Inconsistent,
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A 2-form `omega_ij = omega(e_i, e_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoForm<F = Scalar> {
    m: Matrix<F>,
}

impl<F: Field> TwoForm<F> {
    pub fn new(m: Matrix<F>) -> Result<Self, ParaError> {
        if !m.is_antisymmetric() {
            return Err(ParaError::NotAntisymmetric);
        }
        Ok(TwoForm { m })
    }

    /// `sum c e^i ∧ e^j` from zero-based `(i, j, c)` triples.
    pub fn from_wedges(n: usize, terms: &[(usize, usize, F)]) -> Self {
        let mut m = Matrix::<F>::zeros(n, n);
        for (i, j, c) in terms {
            m[(*i, *j)] = m[(*i, *j)].clone() + c.clone();
            m[(*j, *i)] = m[(*j, *i)].clone() - c.clone();
        }
        TwoForm { m }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.m
    }

    pub fn eval(&self, x: &[F], y: &[F]) -> F {
        self.m.pair(x, y)
    }

    /// Nonzero `(i, j, omega_ij)` with `i < j`.
    pub fn wedges(&self) -> Vec<(usize, usize, F)> {
        let n = self.dim();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.m[(i, j)].is_zero())
            .map(|(i, j)| (i, j, self.m[(i, j)].clone()))
            .collect()
    }
}

/// A linear operator `J e_j = sum_i J^i_j e_i`; row index is the upper one.
#[derive(Clone, Debug, PartialEq)]
pub struct Endomorphism<F = Scalar> {
    m: Matrix<F>,
}

impl<F: Field> Endomorphism<F> {
    pub fn new(m: Matrix<F>) -> Result<Self, ParaError> {
        if !m.is_square() {
            return Err(ParaError::Dimension {
                what: "J",
                expected: m.rows(),
                got: m.cols(),
            });
        }
        Ok(Endomorphism { m })
    }

    pub fn diagonal(entries: &[F]) -> Self {
        Endomorphism {
            m: Matrix::diagonal(entries),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.m
    }

    pub fn apply(&self, x: &[F]) -> Vec<F> {
        self.m.mul_vec(x)
    }

    /// `J^i_j`.
    pub fn get(&self, upper: usize, lower: usize) -> &F {
        &self.m[(upper, lower)]
    }

    pub fn plus_space(&self, facts: &Facts) -> Result<Subspace<F>, LinalgError> {
        Subspace::kernel(&Matrix::identity(self.dim()).sub(&self.m), facts)
    }

    pub fn minus_space(&self, facts: &Facts) -> Result<Subspace<F>, LinalgError> {
        Subspace::kernel(&Matrix::identity(self.dim()).add(&self.m), facts)
    }
}

/// A symmetric bilinear form.
#[derive(Clone, Debug, PartialEq)]
pub struct SymBilinear<F = Scalar> {
    m: Matrix<F>,
}

impl<F: Field> SymBilinear<F> {
    pub fn new(m: Matrix<F>) -> Result<Self, ParaError> {
        if !m.is_symmetric() {
            return Err(ParaError::NotSymmetric);
        }
        Ok(SymBilinear { m })
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.m
    }

    pub fn eval(&self, x: &[F], y: &[F]) -> F {
        self.m.pair(x, y)
    }
}

fn same_dim(what: &'static str, expected: usize, got: usize) -> Result<(), ParaError> {
    if expected == got {
        Ok(())
    } else {
        Err(ParaError::Dimension { what, expected, got })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymplecticReport {
    pub closed: bool,
    pub nondegenerate: bool,
    /// One-based triples where the cocycle identity fails.
    pub failures: Vec<(usize, usize, usize)>,
}

impl SymplecticReport {
    pub fn passed(&self) -> bool {
        self.closed && self.nondegenerate
    }
}

/// `omega([X,Y],Z) - omega([X,Z],Y) + omega([Y,Z],X)` on basis vectors.
pub fn cocycle<F: Field>(l: &LieAlgebra<F>, w: &TwoForm<F>, i: usize, j: usize, k: usize) -> F {
    let c = l.constants();
    let (ei, ej, ek) = (unit(l.dim(), i), unit(l.dim(), j), unit(l.dim(), k));
    w.eval(c.bracket_basis(i, j), &ek) - w.eval(c.bracket_basis(i, k), &ej) + w.eval(c.bracket_basis(j, k), &ei)
}

fn unit<F: Field>(n: usize, i: usize) -> Vec<F> {
    crate::lie::unit(n, i)
}

pub fn check_symplectic<F: Field>(l: &LieAlgebra<F>, w: &TwoForm<F>) -> Result<SymplecticReport, ParaError> {
    let n = l.dim();
    same_dim("omega", n, w.dim())?;
    let mut failures = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if !cocycle(l, w, i, j, k).is_zero() {
                    failures.push((i + 1, j + 1, k + 1));
                }
            }
        }
    }
    let det = w.matrix().determinant(l.facts())?;
    let nondegenerate = match det.nonzero_status(l.facts()) {
        Nonzero::NonZero => true,
        Nonzero::Zero => false,
        Nonzero::Unknown => return Err(ParaError::UndecidableDeterminant(det.to_string())),
    };
    Ok(SymplecticReport {
        closed: failures.is_empty(),
        nondegenerate,
        failures,
    })
}

/// A basis of the closed 2-forms: the kernel of the cocycle identity,
/// which is linear in the coefficients `omega_ab`, `a < b`.
pub fn closed_forms<F: Field>(l: &LieAlgebra<F>) -> Result<Vec<TwoForm<F>>, ParaError> {
    let n = l.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let basis: Vec<TwoForm<F>> = pairs
        .iter()
        .map(|&(a, b)| TwoForm::from_wedges(n, &[(a, b, F::one())]))
        .collect();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                rows.push(basis.iter().map(|w| cocycle(l, w, i, j, k)).collect::<Vec<F>>());
            }
        }
    }
    if rows.is_empty() {
        return Ok(basis);
    }
    let kernel = crate::linalg::kernel_vectors(&Matrix::from_rows(rows), l.facts())?;
    Ok(kernel
        .into_iter()
        .map(|v| {
            let terms: Vec<(usize, usize, F)> = pairs.iter().zip(v).map(|(&(a, b), c)| (a, b, c)).collect();
            TwoForm::from_wedges(n, &terms)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParacomplexReport {
    pub involutive: bool,
    pub rank_plus: usize,
    pub rank_minus: usize,
}

impl ParacomplexReport {
    pub fn passed(&self) -> bool {
        self.involutive && self.rank_plus == self.rank_minus && self.rank_plus + self.rank_minus > 0
    }
}

pub fn check_almost_paracomplex<F: Field>(j: &Endomorphism<F>, facts: &Facts) -> Result<ParacomplexReport, ParaError> {
    let n = j.dim();
    let involutive = j.m.mul(&j.m) == Matrix::identity(n);
    Ok(ParacomplexReport {
        involutive,
        rank_plus: j.plus_space(facts)?.dim(),
        rank_minus: j.minus_space(facts)?.dim(),
    })
}

/// Coordinate Nijenhuis tensor, `n[k][i][j] = N^k_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct Nijenhuis<F = Scalar> {
    n: Vec<Vec<Vec<F>>>,
}

impl<F: Field> Nijenhuis<F> {
    /// `N^k_ij`, zero-based.
    pub fn get(&self, k: usize, i: usize, j: usize) -> &F {
        &self.n[k][i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.n.iter().flatten().flatten().all(F::is_zero)
    }

    /// Nonzero `(k, i, j)` with `i < j`, zero-based, in lexicographic `(i, j, k)` order.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize)> {
        let d = self.n.len();
        let mut out = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                for k in 0..d {
                    if !self.n[k][i][j].is_zero() {
                        out.push((k, i, j));
                    }
                }
            }
        }
        out
    }
}

/// `N^k_ij = J^l_i J^m_j C^k_lm - J^l_i J^k_m C^m_lj - J^l_j J^k_m C^m_il + C^k_ij`.
pub fn nijenhuis_entry<F: Field>(l: &LieAlgebra<F>, j: &Endomorphism<F>, k: usize, a: usize, b: usize) -> F {
    let n = l.dim();
    let jm = &j.m;
    let mut acc = l.c(k, a, b).clone();
    for p in 0..n {
        let jpa = &jm[(p, a)];
        let jpb = &jm[(p, b)];
        for q in 0..n {
            if !jpa.is_zero() {
                let c = l.c(k, p, q);
                let jqb = &jm[(q, b)];
                if !c.is_zero() && !jqb.is_zero() {
                    acc = acc + jpa.clone() * jqb.clone() * c.clone();
                }
                let c = l.c(q, p, b);
                let jkq = &jm[(k, q)];
                if !c.is_zero() && !jkq.is_zero() {
                    acc = acc - jpa.clone() * jkq.clone() * c.clone();
                }
            }
            if !jpb.is_zero() {
                let c = l.c(q, a, p);
                let jkq = &jm[(k, q)];
                if !c.is_zero() && !jkq.is_zero() {
                    acc = acc - jpb.clone() * jkq.clone() * c.clone();
                }
            }
        }
    }
    acc
}

pub fn nijenhuis<F: Field>(l: &LieAlgebra<F>, j: &Endomorphism<F>) -> Result<Nijenhuis<F>, ParaError> {
    let d = l.dim();
    same_dim("J", d, j.dim())?;
    let mut n = vec![vec![vec![F::zero(); d]; d]; d];
    for a in 0..d {
        for b in a + 1..d {
            for (k, slab) in n.iter_mut().enumerate() {
                let v = nijenhuis_entry(l, j, k, a, b);
                slab[b][a] = -v.clone();
                slab[a][b] = v;
            }
        }
    }
    Ok(Nijenhuis { n })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegrabilityReport {
    pub nijenhuis_zero: bool,
    pub plus_subalgebra: bool,
    pub minus_subalgebra: bool,
}

impl IntegrabilityReport {
    pub fn integrable(&self) -> bool {
        self.nijenhuis_zero
    }

    pub fn consistent(&self) -> bool {
        self.nijenhuis_zero == (self.plus_subalgebra && self.minus_subalgebra)
    }
}

pub fn is_subalgebra<F: Field>(l: &LieAlgebra<F>, s: &Subspace<F>) -> Result<bool, ParaError> {
    Ok(s.contains(&l.subspace_bracket(s, s)?)?)
}

/// Integrability by the Nijenhuis tensor and, independently, by closure of
/// the two eigenspaces. For an involutive `J` the two must agree.
pub fn is_integrable<F: Field>(l: &LieAlgebra<F>, j: &Endomorphism<F>) -> Result<IntegrabilityReport, ParaError> {
    let report = IntegrabilityReport {
        nijenhuis_zero: nijenhuis(l, j)?.is_zero(),
        plus_subalgebra: is_subalgebra(l, &j.plus_space(l.facts())?)?,
        minus_subalgebra: is_subalgebra(l, &j.minus_space(l.facts())?)?,
    };
    if !report.consistent() && j.m.mul(&j.m) == Matrix::identity(l.dim()) {
        return Err(ParaError::Inconsistent);
    }
    Ok(report)
}

/// `(J^T omega + omega J)_ij = omega_kj J^k_i + omega_ik J^k_j`; vanishes
/// exactly when `omega(JX, Y) + omega(X, JY) = 0`.
pub fn compatibility_residual<F: Field>(w: &TwoForm<F>, j: &Endomorphism<F>) -> Matrix<F> {
    j.m.transpose().mul(&w.m).add(&w.m.mul(&j.m))
}

pub fn check_compatible<F: Field>(w: &TwoForm<F>, j: &Endomorphism<F>) -> Result<bool, ParaError> {
    same_dim("J", w.dim(), j.dim())?;
    Ok(compatibility_residual(w, j).is_zero())
}

/// `g(X, Y) = omega(X, JY)`, i.e. `g = omega J`.
pub fn metric_from<F: Field>(w: &TwoForm<F>, j: &Endomorphism<F>) -> Result<SymBilinear<F>, ParaError> {
    same_dim("J", w.dim(), j.dim())?;
    SymBilinear::new(w.m.mul(&j.m))
}

/// The chain `a_k(J)`, with J-invariance of every link asserted.
pub fn j_invariant_chain<F: Field>(l: &LieAlgebra<F>, j: &Endomorphism<F>) -> Result<IdealChain<F>, ParaError> {
    same_dim("J", l.dim(), j.dim())?;
    let chain = l.j_invariant_series(&j.m)?;
    for (k, link) in chain.links.iter().enumerate() {
        if !link.contains(&link.image(&j.m, l.facts())?)? {
            return Err(ParaError::NotInvariant { link: k + 1 });
        }
    }
    Ok(chain)
}

pub fn is_nilpotent_j<F: Field>(l: &LieAlgebra<F>, j: &Endomorphism<F>) -> Result<bool, ParaError> {
    Ok(j_invariant_chain(l, j)?.last().is_full())
}

/// `omega(u, v)` for all basis pairs.
fn pairing<F: Field>(form: &Matrix<F>, u: &Subspace<F>, v: &Subspace<F>) -> Matrix<F> {
    u.basis().mul(form).mul(&v.basis().transpose())
}

pub fn orthogonal<F: Field>(form: &Matrix<F>, u: &Subspace<F>, v: &Subspace<F>) -> bool {
    u.is_zero() || v.is_zero() || pairing(form, u, v).is_zero()
}

pub fn is_isotropic<F: Field>(w: &TwoForm<F>, s: &Subspace<F>) -> bool {
    orthogonal(&w.m, s, s)
}

/// `{u : omega(s, u) = 0}`.
pub fn omega_perp<F: Field>(w: &TwoForm<F>, s: &Subspace<F>, facts: &Facts) -> Result<Subspace<F>, LinalgError> {
    if s.is_zero() {
        return Ok(Subspace::full(w.dim()));
    }
    Subspace::kernel(&s.basis().mul(&w.m), facts)
}

pub fn is_lagrangian<F: Field>(w: &TwoForm<F>, s: &Subspace<F>, facts: &Facts) -> Result<bool, ParaError> {
    Ok(is_isotropic(w, s) && omega_perp(w, s, facts)? == *s)
}

/// Every nonzero `u` in `U` pairs nontrivially with some `v` in `V` and
/// vice versa: the pairing matrix has full rank on both sides.
pub fn is_omega_dual<F: Field>(w: &TwoForm<F>, u: &Subspace<F>, v: &Subspace<F>, facts: &Facts) -> Result<bool, ParaError> {
    if u.is_zero() || v.is_zero() {
        return Ok(u.is_zero() && v.is_zero());
    }
    let r = rank(&pairing(&w.m, u, v), facts)?;
    Ok(r == u.dim() && r == v.dim())
}

/// Nondegeneracy of `omega` restricted to `s`.
pub fn is_nondegenerate_on<F: Field>(w: &TwoForm<F>, s: &Subspace<F>, facts: &Facts) -> Result<bool, ParaError> {
    Ok(rank(&pairing(&w.m, s, s), facts)? == s.dim())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub name: String,
    pub holds: bool,
}

/// The structural relations between the derived ideal, the centre and the
/// `a_k(J)` chain. Those that need `J` are skipped without it.
pub fn check_subspace_relations<F: Field>(
    l: &LieAlgebra<F>,
    w: &TwoForm<F>,
    j: Option<&Endomorphism<F>>,
) -> Result<Vec<RelationCheck>, ParaError> {
    let facts = l.facts();
    let derived = l.derived_ideal()?;
    let center = l.center()?;
    let mut out = vec![RelationCheck {
        name: "omega(C1, Z) = 0".into(),
        holds: orthogonal(&w.m, &derived, &center),
    }];
    let Some(j) = j else {
        return Ok(out);
    };
    let chain = j_invariant_chain(l, j)?;
    let a1 = chain.links[0].clone();
    let dj = derived.sum(&derived.image(&j.m, facts)?, facts)?;
    out.push(RelationCheck {
        name: "a1(J) ⊂ Z".into(),
        holds: center.contains(&a1)?,
    });
    out.push(RelationCheck {
        name: "omega(C1 + J C1, a1(J)) = 0".into(),
        holds: orthogonal(&w.m, &dj, &a1),
    });
    if let Ok(g) = metric_from(w, j) {
        out.push(RelationCheck {
            name: "g(C1 + J C1, a1(J)) = 0".into(),
            holds: orthogonal(&g.m, &dj, &a1),
        });
    }
    let asc = l.ascending_series()?;
    for (k, link) in chain.links.iter().enumerate() {
        if let Some(gk) = asc.get(k + 1) {
            out.push(RelationCheck {
                name: format!("a{}(J) ⊂ g{}", k + 1, k + 1),
                holds: gk.contains(link)?,
            });
        }
    }
    if chain.last().is_full() && asc.last().is_full() {
        let p = asc.links.len();
        if let Some(ap) = chain.get(p - 1) {
            out.push(RelationCheck {
                name: format!("C1 + J C1 ⊂ a{}(J)", p - 1),
                holds: ap.contains(&dj)?,
            });
        }
    }
    if nijenhuis(l, j)?.is_zero() {
        let mut commutes = true;
        for z in center.basis_vectors() {
            let ad = l.ad(&j.apply(&z));
            commutes &= ad.mul(&j.m) == j.m.mul(&ad);
        }
        out.push(RelationCheck {
            name: "ad(JZ) J = J ad(JZ)".into(),
            holds: commutes,
        });
        for (name, space) in [("g+", j.plus_space(facts)?), ("g-", j.minus_space(facts)?)] {
            out.push(RelationCheck {
                name: format!("{} Lagrangian", name),
                holds: is_lagrangian(w, &space, facts)?,
            });
        }
    }
    Ok(out)
}

/// Checks `J^T g J = -g`.
pub fn metric_anti_invariant<F: Field>(g: &SymBilinear<F>, j: &Endomorphism<F>) -> bool {
    j.m.transpose().mul(&g.m).mul(&j.m) == g.m.neg()
}
