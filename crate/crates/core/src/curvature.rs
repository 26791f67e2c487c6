//! Levi-Civita connection of a left-invariant metric, its curvature and
//! Ricci tensors, and the structural statements they satisfy.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Field;
use crate::lie::{LieAlgebra, LieError};
use crate::linalg::{invert, LinalgError, Matrix, Subspace};
use crate::para::{
    check_almost_paracomplex, check_compatible, is_isotropic, is_nondegenerate_on, is_omega_dual, j_invariant_chain,
    metric_from, orthogonal, Endomorphism, ParaError, RelationCheck, SymBilinear, TwoForm,
};
use crate::scalar::Scalar;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum CurvatureError {
    #[error("metric is degenerate")]
    Degenerate,
    #[error("connection is not torsion-free at ({}, {}, {})", .0 + 1, .1 + 1, .2 + 1)]
    Torsion(usize, usize, usize),
    #[error("connection is not metric at ({}, {}, {})", .0 + 1, .1 + 1, .2 + 1)]
    NotMetric(usize, usize, usize),
    #[error("first Bianchi identity fails at ({}, {}, {}, {})", .0 + 1, .1 + 1, .2 + 1, .3 + 1)]
    Bianchi(usize, usize, usize, usize),
    #[error("A, B, C do not form a direct sum decomposition")]
    NotDirectSum,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Para(#[from] ParaError),
}

impl From<crate::scalar::ScalarError> for CurvatureError {
    fn from(e: crate::scalar::ScalarError) -> Self {
        CurvatureError::Linalg(e.into())
    }
}

/// `nabla_{e_i} e_j = sum_k gamma^k_ij e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection<F = Scalar> {
    n: usize,
    gamma: Vec<F>,
}

impl<F: Field> Connection<F> {
    /// `Gamma^k_ij`.
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> &F {
        &self.gamma[(k * self.n + i) * self.n + j]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.iter().all(F::is_zero)
    }

    /// `nabla_x y` for constant-coefficient fields.
    pub fn nabla(&self, x: &[F], y: &[F]) -> Vec<F> {
        let n = self.n;
        let mut out = vec![F::zero(); n];
        for i in (0..n).filter(|&i| !x[i].is_zero()) {
            for j in (0..n).filter(|&j| !y[j].is_zero()) {
                let xy = x[i].clone() * y[j].clone();
                for (k, slot) in out.iter_mut().enumerate() {
                    let g = self.gamma(k, i, j);
                    if !g.is_zero() {
                        *slot = slot.clone() + xy.clone() * g.clone();
                    }
                }
            }
        }
        out
    }

    /// `nabla_{e_i} e_j` as a vector.
    pub fn nabla_basis(&self, i: usize, j: usize) -> Vec<F> {
        (0..self.n).map(|k| self.gamma(k, i, j).clone()).collect()
    }
}

/// `R(e_i, e_j) e_k = sum_l r^l_ijk e_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct Curvature<F = Scalar> {
    n: usize,
    r: Vec<F>,
}

impl<F: Field> Curvature<F> {
    /// `R^l_ijk`.
    pub fn get(&self, l: usize, i: usize, j: usize, k: usize) -> &F {
        let n = self.n;
        &self.r[((l * n + i) * n + j) * n + k]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.r.iter().all(F::is_zero)
    }

    /// `R(x, y) z`.
    pub fn apply(&self, x: &[F], y: &[F], z: &[F]) -> Vec<F> {
        let n = self.n;
        let mut out = vec![F::zero(); n];
        for i in (0..n).filter(|&i| !x[i].is_zero()) {
            for j in (0..n).filter(|&j| !y[j].is_zero()) {
                for k in (0..n).filter(|&k| !z[k].is_zero()) {
                    let c = x[i].clone() * y[j].clone() * z[k].clone();
                    for (l, slot) in out.iter_mut().enumerate() {
                        let r = self.get(l, i, j, k);
                        if !r.is_zero() {
                            *slot = slot.clone() + c.clone() * r.clone();
                        }
                    }
                }
            }
        }
        out
    }

    /// Nonzero `(l, i, j, k)` with `i < j`, ordered by `(i, j, k, l)`.
    pub fn nonzero_components(&self) -> Vec<((usize, usize, usize, usize), F)> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = self.get(l, i, j, k);
                        if !v.is_zero() {
                            out.push(((l, i, j, k), v.clone()));
                        }
                    }
                }
            }
        }
        out
    }

    /// Components in the basis given by the columns of `p`.
    pub fn in_basis(&self, p: &Matrix<F>, facts: &crate::scalar::Facts) -> Result<Curvature<F>, CurvatureError> {
        let n = self.n;
        let pinv = invert(p, facts)?;
        let cols: Vec<Vec<F>> = (0..n).map(|j| p.column(j)).collect();
        let mut r = vec![F::zero(); n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = pinv.mul_vec(&self.apply(&cols[i], &cols[j], &cols[k]));
                    for (l, x) in v.into_iter().enumerate() {
                        r[((l * n + i) * n + j) * n + k] = x;
                    }
                }
            }
        }
        Ok(Curvature { n, r })
    }
}

fn unit<F: Field>(n: usize, i: usize) -> Vec<F> {
    crate::lie::unit(n, i)
}

/// Koszul formula, solved against `g^-1`; torsion-freeness and metric
/// compatibility of the result are verified before returning.
pub fn levi_civita<F: Field>(l: &LieAlgebra<F>, g: &SymBilinear<F>) -> Result<Connection<F>, CurvatureError> {
    let n = l.dim();
    let facts = l.facts();
    let gm = g.matrix();
    let ginv = invert(gm, facts).map_err(|e| match e {
        LinalgError::Singular => CurvatureError::Degenerate,
        other => other.into(),
    })?;
    let half = F::from_rational(crate::scalar::ratio(1, 2));
    let c = l.constants();
    // koszul[(i, j)][k] = g(nabla_i e_j, e_k)
    let mut koszul = vec![vec![F::zero(); n]; n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let t = g.eval(c.bracket_basis(i, j), &unit(n, k))
                    + g.eval(c.bracket_basis(k, i), &unit(n, j))
                    + g.eval(c.bracket_basis(k, j), &unit(n, i));
                koszul[i * n + j][k] = half.clone() * t;
            }
        }
    }
    let mut gamma = vec![F::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            let v = ginv.mul_vec(&koszul[i * n + j]);
            for (k, x) in v.into_iter().enumerate() {
                gamma[(k * n + i) * n + j] = x;
            }
        }
    }
    let conn = Connection { n, gamma };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if conn.gamma(k, i, j).clone() - conn.gamma(k, j, i).clone() != l.c(k, i, j).clone() {
                    return Err(CurvatureError::Torsion(i, j, k));
                }
                let lhs = g.eval(&conn.nabla_basis(i, j), &unit(n, k)) + g.eval(&unit(n, j), &conn.nabla_basis(i, k));
                if !lhs.is_zero() {
                    return Err(CurvatureError::NotMetric(i, j, k));
                }
            }
        }
    }
    Ok(conn)
}

/// `R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]`, with the first Bianchi
/// identity verified.
pub fn curvature_tensor<F: Field>(l: &LieAlgebra<F>, conn: &Connection<F>) -> Result<Curvature<F>, CurvatureError> {
    let n = l.dim();
    let mut r = vec![F::zero(); n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for ll in 0..n {
                    let mut acc = F::zero();
                    for m in 0..n {
                        let a = conn.gamma(m, j, k);
                        if !a.is_zero() {
                            acc = acc + a.clone() * conn.gamma(ll, i, m).clone();
                        }
                        let b = conn.gamma(m, i, k);
                        if !b.is_zero() {
                            acc = acc - b.clone() * conn.gamma(ll, j, m).clone();
                        }
                        let c = l.c(m, i, j);
                        if !c.is_zero() {
                            acc = acc - c.clone() * conn.gamma(ll, m, k).clone();
                        }
                    }
                    r[((ll * n + i) * n + j) * n + k] = acc;
                }
            }
        }
    }
    let curv = Curvature { n, r };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for ll in 0..n {
                    let s = curv.get(ll, i, j, k).clone() + curv.get(ll, j, k, i).clone() + curv.get(ll, k, i, j).clone();
                    if !s.is_zero() {
                        return Err(CurvatureError::Bianchi(ll, i, j, k));
                    }
                }
            }
        }
    }
    Ok(curv)
}

/// `Ric_jk = R^i_ijk`.
pub fn ricci<F: Field>(r: &Curvature<F>) -> Matrix<F> {
    let n = r.n;
    Matrix::from_fn(n, n, |j, k| (0..n).fold(F::zero(), |acc, i| acc + r.get(i, i, j, k).clone()))
}

/// `g(R(X,Y)Z, W) = -g(R(X,Y)JZ, JW)` on all basis quadruples.
pub fn check_parakahler_identity<F: Field>(g: &SymBilinear<F>, j: &Endomorphism<F>, r: &Curvature<F>) -> bool {
    let n = r.n;
    let gm = g.matrix();
    let jm = j.matrix();
    for a in 0..n {
        for b in a + 1..n {
            // m[(k, w)] = g(R(e_a, e_b) e_k, e_w)
            let rm = Matrix::from_fn(n, n, |l, k| r.get(l, a, b, k).clone());
            let m = rm.transpose().mul(gm);
            let twisted = jm.transpose().mul(&m).mul(jm);
            if m != twisted.neg() {
                return false;
            }
        }
    }
    true
}

fn check(name: &str, holds: bool) -> RelationCheck {
    RelationCheck {
        name: name.to_string(),
        holds,
    }
}

fn vectors_in<F: Field>(vs: &[Vec<F>], s: &Subspace<F>) -> Result<bool, CurvatureError> {
    for v in vs {
        if !s.contains_vector(v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn all_zero<F: Field>(v: &[F]) -> bool {
    v.iter().all(F::is_zero)
}

/// Statements about `nabla` and `R` along the centre and `a_1(J)`.
pub fn check_connection_relations<F: Field>(
    l: &LieAlgebra<F>,
    j: &Endomorphism<F>,
    conn: &Connection<F>,
    r: &Curvature<F>,
) -> Result<Vec<RelationCheck>, CurvatureError> {
    let n = l.dim();
    let center = l.center()?.basis_vectors();
    let a1 = j_invariant_chain(l, j)?.links[0].basis_vectors();
    let basis: Vec<Vec<F>> = (0..n).map(|i| unit(n, i)).collect();
    let mut sym = true;
    let mut central_flat = true;
    let mut central_r = true;
    for x in &center {
        for y in &basis {
            sym &= conn.nabla(x, y) == conn.nabla(y, x);
        }
        for y in &center {
            central_flat &= all_zero(&conn.nabla(x, y));
            for z in &center {
                central_r &= all_zero(&r.apply(x, y, z));
            }
        }
    }
    let mut a1_flat = true;
    let mut a1_r = true;
    for x in &a1 {
        for y in &basis {
            a1_flat &= all_zero(&conn.nabla(x, y)) && all_zero(&conn.nabla(y, x));
            for z in &basis {
                a1_r &= all_zero(&r.apply(x, y, z)) && all_zero(&r.apply(z, y, x));
            }
        }
    }
    Ok(vec![
        check("X in Z: nabla_X Y = nabla_Y X", sym),
        check("X, Y in Z: nabla_X Y = 0", central_flat),
        check("X, Y, Z in Z: R(X,Y)Z = 0", central_r),
        check("X in a1(J): nabla_X Y = nabla_Y X = 0", a1_flat),
        check("X in a1(J): R(X,Y)Z = R(Z,Y)X = 0", a1_r),
    ])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub hypotheses: Vec<RelationCheck>,
    /// Empty unless every hypothesis holds.
    pub conclusions: Vec<RelationCheck>,
    /// Nonzero curvature components `(l, i, j, k)` in the adapted basis,
    /// one-based, with `i < j`.
    pub components: Vec<(usize, usize, usize, usize)>,
}

impl DecompositionReport {
    pub fn first_failure(&self) -> Option<&str> {
        self.hypotheses
            .iter()
            .chain(&self.conclusions)
            .find(|c| !c.holds)
            .map(|c| c.name.as_str())
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|c| c.holds)
    }

    pub fn passed(&self) -> bool {
        self.first_failure().is_none() && !self.conclusions.is_empty()
    }
}

/// Checks the hypotheses for a decomposition `g = A + B + C` and, when they
/// all hold, the resulting location statements for `nabla` and `R`.
pub fn check_decomposition<F: Field>(
    l: &LieAlgebra<F>,
    w: &TwoForm<F>,
    j: &Endomorphism<F>,
    parts: (&Subspace<F>, &Subspace<F>, &Subspace<F>),
) -> Result<DecompositionReport, CurvatureError> {
    let (a, b, c) = parts;
    let n = l.dim();
    let facts = l.facts();
    let bc = b.sum(c, facts)?;
    if a.sum(&bc, facts)?.dim() != n || a.dim() + b.dim() + c.dim() != n {
        return Err(CurvatureError::NotDirectSum);
    }
    let center = l.center()?;
    let pc = check_almost_paracomplex(j, facts)?;
    let mut hyp = vec![
        check("C ⊂ Z(g)", center.contains(c)?),
        check("[A,A] ⊂ B+C", bc.contains(&l.subspace_bracket(a, a)?)?),
        check("[A,B] ⊂ C", c.contains(&l.subspace_bracket(a, b)?)?),
        check("B+C abelian", l.subspace_bracket(&bc, &bc)?.is_zero()),
        check("A omega-isotropic", is_isotropic(w, a)),
        check("C omega-isotropic", is_isotropic(w, c)),
        check("A, C omega-dual", is_omega_dual(w, a, c, facts)?),
        check("omega nondegenerate on B", is_nondegenerate_on(w, b, facts)?),
        check("omega(B+C, C) = 0", orthogonal(w.matrix(), &bc, c)),
        check("J almost para-complex", pc.passed()),
        check("J compatible with omega", check_compatible(w, j)?),
        check("B J-invariant", b.contains(&b.image(j.matrix(), facts)?)?),
        check("C J-invariant", c.contains(&c.image(j.matrix(), facts)?)?),
    ];
    let nilpotent = if pc.involutive {
        j_invariant_chain(l, j)?.last().is_full()
    } else {
        false
    };
    hyp.push(check("J nilpotent", nilpotent));
    let mut report = DecompositionReport {
        hypotheses: hyp,
        conclusions: Vec::new(),
        components: Vec::new(),
    };
    if !report.hypotheses_hold() {
        return Ok(report);
    }
    let g = metric_from(w, j)?;
    let conn = levi_civita(l, &g)?;
    let r = curvature_tensor(l, &conn)?;
    let basis: Vec<Vec<F>> = (0..n).map(|i| unit(n, i)).collect();
    let bc_vs = bc.basis_vectors();
    let mut all_nabla = Vec::new();
    for x in &basis {
        for y in &basis {
            all_nabla.push(conn.nabla(x, y));
        }
    }
    let mut into_c = Vec::new();
    let mut within_bc = Vec::new();
    for x in &basis {
        for y in &bc_vs {
            into_c.push(conn.nabla(x, y));
            into_c.push(conn.nabla(y, x));
        }
    }
    for x in &bc_vs {
        for y in &bc_vs {
            within_bc.push(conn.nabla(x, y));
        }
    }
    let mut cor4 = true;
    for x in &bc_vs {
        for y in &basis {
            for z in &basis {
                cor4 &= all_zero(&r.apply(x, y, z)) && all_zero(&r.apply(z, y, x));
            }
        }
    }
    let mut r_values = Vec::new();
    for x in &basis {
        for y in &basis {
            for z in &basis {
                r_values.push(r.apply(x, y, z));
            }
        }
    }
    let p = Matrix::from_rows(
        a.basis_vectors()
            .into_iter()
            .chain(b.basis_vectors())
            .chain(c.basis_vectors())
            .collect(),
    )
    .transpose();
    let adapted = r.in_basis(&p, facts)?;
    let (da, db) = (a.dim(), b.dim());
    let in_a = |i: usize| i < da;
    let in_c = |i: usize| i >= da + db;
    let comps = adapted.nonzero_components();
    let pattern = comps
        .iter()
        .all(|((ll, i, j, k), _)| in_a(*i) && in_a(*j) && in_a(*k) && in_c(*ll));
    report.components = comps.iter().map(|((ll, i, j, k), _)| (ll + 1, i + 1, j + 1, k + 1)).collect();
    report.conclusions = vec![
        check("nabla_X Y ∈ B+C", vectors_in(&all_nabla, &bc)?),
        check("nabla_X Y, nabla_Y X ∈ C for Y ∈ B+C", vectors_in(&into_c, c)?),
        check("nabla_X Y = 0 for X, Y ∈ B+C", within_bc.iter().all(|v| all_zero(v))),
        check("R(X,Y)Z = R(Z,Y)X = 0 for X ∈ B+C", cor4),
        check("R(X,Y)Z ∈ C", vectors_in(&r_values, c)?),
        check("nonzero R only in R^C_AAA", pattern),
        check("Ric = 0", ricci(&r).is_zero()),
    ];
    Ok(report)
}
