//! Seeded randomized checks of the library's invariants.
//!
//! Each `*_laws` function checks one instance and reports the first
//! violated identity; the suites draw instances from a ChaCha stream so a
//! seed reproduces a run exactly.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::builtin;
use crate::curvature::{curvature_tensor, levi_civita, ricci};
use crate::lie::{LieAlgebra, StructureConstants};
use crate::linalg::{invert, kernel_vectors, rank, rref, signature, Inertia, LinalgError, Matrix};
use crate::para::{
    check_compatible, closed_forms, is_integrable, is_subalgebra, metric_from, nijenhuis, Endomorphism, SymBilinear,
    TwoForm,
};
use crate::scalar::{parse_scalar, ratio, Facts, ParseContext, Polynomial, Rational, Scalar};
use crate::solver::{prepare, solve, sign_diagonals, Budget, FamilyComponent};
use crate::Field;

pub const SUITES: &[&str] = &["ring", "linalg", "lie", "center_pairing", "connection", "witness", "integrability"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub cases: usize,
    pub failed: usize,
    /// The first few failure messages.
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

type Check = Result<(), String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Commutative ring laws, exact division by certified-nonzero values, and
/// printing then parsing back.
pub fn ring_laws(a: &Scalar, b: &Scalar, c: &Scalar, ctx: &ParseContext) -> Check {
    let zero = Scalar::from_int(0);
    let one = Scalar::from_int(1);
    ensure(a.clone() + b.clone() == b.clone() + a.clone(), || format!("a+b != b+a for {a}, {b}"))?;
    ensure(a.clone() * b.clone() == b.clone() * a.clone(), || format!("ab != ba for {a}, {b}"))?;
    ensure((a.clone() + b.clone()) + c.clone() == a.clone() + (b.clone() + c.clone()), || {
        format!("+ not associative on {a}, {b}, {c}")
    })?;
    ensure((a.clone() * b.clone()) * c.clone() == a.clone() * (b.clone() * c.clone()), || {
        format!("* not associative on {a}, {b}, {c}")
    })?;
    ensure(a.clone() * (b.clone() + c.clone()) == a.clone() * b.clone() + a.clone() * c.clone(), || {
        format!("distributivity fails on {a}, {b}, {c}")
    })?;
    ensure(a.clone() - a.clone() == zero && a.clone() + zero.clone() == *a && a.clone() * one == *a, || {
        format!("identities fail on {a}")
    })?;
    let facts = &ctx.facts;
    if a.nonzero_status(facts) == crate::scalar::Nonzero::NonZero {
        let q = (a.clone() * b.clone()).checked_div(a, facts).map_err(err)?;
        ensure(q == *b, || format!("(ab)/a != b for {a}, {b}"))?;
    }
    for x in [a, b, c] {
        let back = parse_scalar(&x.to_string(), ctx).map_err(|e| format!("reparse of {x}: {e}"))?;
        ensure(back == *x, || format!("print/parse changed {x} into {back}"))?;
    }
    Ok(())
}

/// RREF idempotence, rank symmetry, kernel correctness, inversion, and
/// Sylvester's law of inertia under the congruence by `p`.
pub fn linalg_laws(m: &Matrix<Rational>, p: &Matrix<Rational>) -> Check {
    let f = Facts::new();
    let r = rref(m, &f).map_err(err)?;
    ensure(rref(&r.reduced, &f).map_err(err)?.reduced == r.reduced, || "rref is not idempotent".into())?;
    let rk = rank(m, &f).map_err(err)?;
    ensure(rk == rank(&m.transpose(), &f).map_err(err)?, || "rank(m) != rank(m^T)".into())?;
    let kernel = kernel_vectors(m, &f).map_err(err)?;
    ensure(rk + kernel.len() == m.cols(), || "rank + nullity != columns".into())?;
    for v in &kernel {
        ensure(m.mul_vec(v).iter().all(|x| *x == Rational::from_integer(0.into())), || {
            "kernel vector not annihilated".into()
        })?;
    }
    if m.is_square() {
        let n = m.rows();
        let det = m.determinant(&f).map_err(err)?;
        match invert(m, &f) {
            Ok(inv) => {
                ensure(det != Rational::from_integer(0.into()), || "inverse of a singular matrix".into())?;
                ensure(inv.mul(m) == Matrix::identity(n) && m.mul(&inv) == Matrix::identity(n), || {
                    "m^-1 m != I".into()
                })?;
                let dinv = inv.determinant(&f).map_err(err)?;
                ensure(det * dinv == Rational::from_integer(1.into()), || "det(m) det(m^-1) != 1".into())?;
            }
            Err(LinalgError::Singular) => ensure(det == Rational::from_integer(0.into()), || {
                "invertible matrix reported singular".into()
            })?,
            Err(e) => return Err(e.to_string()),
        }
        let s = m.add(&m.transpose());
        let inertia = signature(&s).map_err(err)?;
        ensure(inertia.positive + inertia.negative + inertia.null == n, || "inertia does not sum to n".into())?;
        ensure(inertia.null == n - rank(&s, &f).map_err(err)?, || "null index != corank".into())?;
        if p.determinant(&f).map_err(err)? != Rational::from_integer(0.into()) {
            let t = p.transpose().mul(&s).mul(p);
            ensure(signature(&t).map_err(err)? == inertia, || "inertia changed under congruence".into())?;
        }
    }
    Ok(())
}

/// Antisymmetry and the Jacobi identity on arbitrary vectors.
pub fn bracket_laws<F: Field>(l: &LieAlgebra<F>, x: &[F], y: &[F], z: &[F]) -> Check {
    let br = |a: &[F], b: &[F]| l.bracket(a, b).map_err(err);
    let xy = br(x, y)?;
    let yx = br(y, x)?;
    ensure(xy.iter().zip(&yx).all(|(a, b)| (a.clone() + b.clone()).is_zero()), || {
        "[x,y] != -[y,x]".into()
    })?;
    let j1 = br(&xy, z)?;
    let j2 = br(&br(y, z)?, x)?;
    let j3 = br(&br(z, x)?, y)?;
    let ok = (0..l.dim()).all(|k| (j1[k].clone() + j2[k].clone() + j3[k].clone()).is_zero());
    ensure(ok, || "Jacobi sum nonzero".into())
}

/// `omega(C^1 g, Z(g)) = 0` for a closed `omega`.
pub fn center_pairing_laws<F: Field>(l: &LieAlgebra<F>, w: &TwoForm<F>) -> Check {
    let derived = l.derived_ideal().map_err(err)?;
    let center = l.center().map_err(err)?;
    ensure(crate::para::orthogonal(w.matrix(), &derived, &center), || {
        "omega(C^1 g, Z(g)) != 0".into()
    })
}

/// Torsion-freeness, metric compatibility, first Bianchi identity, the
/// skew symmetry of `g(R(X,Y)., .)`, and symmetry of Ricci, all evaluated
/// on the given vectors.
pub fn connection_laws<F: Field>(l: &LieAlgebra<F>, g: &SymBilinear<F>, vs: [&[F]; 4]) -> Check {
    let [x, y, z, w] = vs;
    let conn = levi_civita(l, g).map_err(err)?;
    let r = curvature_tensor(l, &conn).map_err(err)?;
    let sub = |a: Vec<F>, b: Vec<F>| -> Vec<F> { a.into_iter().zip(b).map(|(p, q)| p - q).collect() };
    let add = |a: Vec<F>, b: Vec<F>| -> Vec<F> { a.into_iter().zip(b).map(|(p, q)| p + q).collect() };
    let torsion = sub(sub(conn.nabla(x, y), conn.nabla(y, x)), l.bracket(x, y).map_err(err)?);
    ensure(torsion.iter().all(F::is_zero), || "torsion nonzero".into())?;
    let metric = g.eval(&conn.nabla(x, y), z) + g.eval(y, &conn.nabla(x, z));
    ensure(metric.is_zero(), || "connection not metric".into())?;
    let bianchi = add(add(r.apply(x, y, z), r.apply(y, z, x)), r.apply(z, x, y));
    ensure(bianchi.iter().all(F::is_zero), || "first Bianchi identity fails".into())?;
    let skew = g.eval(&r.apply(x, y, z), w) + g.eval(&r.apply(x, y, w), z);
    ensure(skew.is_zero(), || "g(R(X,Y)Z,W) not skew in Z, W".into())?;
    let ric = ricci(&r);
    ensure(ric.is_symmetric(), || "Ricci not symmetric".into())?;
    Ok(())
}

/// For a para-Kaehler pair: `J^T g J = -g` and neutral signature.
pub fn witness_laws(w: &TwoForm<Rational>, j: &Endomorphism<Rational>) -> Check {
    let g = metric_from(w, j).map_err(err)?;
    let twisted = j.matrix().transpose().mul(g.matrix()).mul(j.matrix());
    ensure(twisted == g.matrix().neg(), || "g(JX,JY) != -g(X,Y)".into())?;
    let n = w.dim();
    let want = Inertia {
        positive: n / 2,
        negative: n / 2,
        null: 0,
    };
    let got = signature(g.matrix()).map_err(err)?;
    ensure(got == want, || format!("signature {:?}", got))
}

/// Nijenhuis-zero iff both eigenspaces are subalgebras, computed here
/// separately from `is_integrable`, which must agree.
pub fn integrability_laws<F: Field>(l: &LieAlgebra<F>, j: &Endomorphism<F>) -> Check {
    let facts = l.facts();
    let n_zero = nijenhuis(l, j).map_err(err)?.is_zero();
    let closed = is_subalgebra(l, &j.plus_space(facts).map_err(err)?).map_err(err)?
        && is_subalgebra(l, &j.minus_space(facts).map_err(err)?).map_err(err)?;
    ensure(n_zero == closed, || format!("Nijenhuis zero = {n_zero}, eigenspaces closed = {closed}"))?;
    let rep = is_integrable(l, j).map_err(err)?;
    ensure(rep.integrable() == n_zero && rep.consistent(), || "is_integrable disagrees".into())
}

// Instance generators.

pub fn small_rational(rng: &mut impl Rng) -> Rational {
    ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

fn small_int(rng: &mut impl Rng, bound: i64) -> Rational {
    Rational::from_integer(rng.gen_range(-bound..=bound).into())
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| small_int(rng, 3)).collect()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix<Rational> {
    // Sparse-ish entries make rank deficiency common.
    Matrix::from_fn(rows, cols, |_, _| {
        if rng.gen_bool(0.3) {
            Rational::from_integer(0.into())
        } else {
            small_rational(rng)
        }
    })
}

/// The context for [`random_scalar`]: two unknowns, `lambda`, and the facts
/// `lambda != 0`, `lambda - 1 != 0`.
pub fn ring_context() -> ParseContext {
    let base = ParseContext::new().with_dim(2).with_param("lambda");
    let lambda = Polynomial::var(crate::Var::param("lambda"));
    let facts = Facts::new().with(&lambda).with(&(lambda - Polynomial::from_int(1)));
    base.with_facts(facts)
}

pub fn random_scalar(rng: &mut impl Rng, ctx: &ParseContext) -> Scalar {
    let atoms = [Scalar::psi(1, 1), Scalar::psi(1, 2), Scalar::param("lambda")];
    let mut s = Scalar::from_rational(small_rational(rng));
    for _ in 0..rng.gen_range(0..4) {
        let mut t = Scalar::from_rational(small_rational(rng));
        for a in &atoms {
            t = t * a.pow(rng.gen_range(0..3));
        }
        s = s + t;
    }
    let lambda = Scalar::param("lambda");
    let den = match rng.gen_range(0..4) {
        0 => lambda.clone(),
        1 => lambda.clone() - Scalar::from_int(1),
        2 => lambda.clone() * (lambda - Scalar::from_int(1)),
        _ => return s,
    };
    s.checked_div(&den, &ctx.facts).expect("declared denominators")
}

fn rational_algebra(l: &LieAlgebra) -> LieAlgebra<Rational> {
    l.map_field(|x| x.as_rational().expect("rational structure constants"))
}

/// Algebras for the geometric suites: G1, G21, Heisenberg and abelian.
pub fn sample_algebras() -> Vec<LieAlgebra<Rational>> {
    let mut out: Vec<LieAlgebra<Rational>> = ["G1", "G21"]
        .iter()
        .map(|n| rational_algebra(builtin(n).expect("builtin").algebra().expect("brackets")))
        .collect();
    let h = StructureConstants::<Rational>::new(3).with_basis(1, 2, 3).expect("valid");
    out.push(LieAlgebra::new(h, Facts::new()).expect("Heisenberg"));
    out.push(LieAlgebra::abelian(4));
    out
}

pub fn random_closed_form(rng: &mut impl Rng, basis: &[TwoForm<Rational>]) -> TwoForm<Rational> {
    let n = basis.first().map_or(0, TwoForm::dim);
    let mut m = Matrix::<Rational>::zeros(n, n);
    for w in basis {
        m = m.add(&w.matrix().scale(&small_int(rng, 2)));
    }
    TwoForm::new(m).expect("antisymmetric")
}

fn random_invertible(rng: &mut impl Rng, n: usize) -> Matrix<Rational> {
    loop {
        let p = Matrix::from_fn(n, n, |_, _| small_int(rng, 2));
        if invert(&p, &Facts::new()).is_ok() {
            return p;
        }
    }
}

pub fn random_metric(rng: &mut impl Rng, n: usize) -> SymBilinear<Rational> {
    // U^T D U with U unit upper triangular keeps g^-1 integral up to D.
    let u = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => small_int(rng, 1),
        std::cmp::Ordering::Equal => Rational::from_integer(1.into()),
        std::cmp::Ordering::Greater => Rational::from_integer(0.into()),
    });
    let d: Vec<Rational> = (0..n)
        .map(|_| Rational::from_integer([-2, -1, 1, 2][rng.gen_range(0..4)].into()))
        .collect();
    SymBilinear::new(u.transpose().mul(&Matrix::diagonal(&d)).mul(&u)).expect("symmetric")
}

/// `P D P^-1` with `D` a trace-zero sign diagonal.
pub fn random_paracomplex(rng: &mut impl Rng, n: usize) -> Endomorphism<Rational> {
    let signs = sign_diagonals(n);
    let d: Vec<Rational> = signs
        .choose(rng)
        .expect("even dimension")
        .iter()
        .map(|&s| Rational::from_integer(s.into()))
        .collect();
    let p = random_invertible(rng, n);
    let pinv = invert(&p, &Facts::new()).expect("invertible");
    Endomorphism::new(p.mul(&Matrix::diagonal(&d)).mul(&pinv)).expect("square")
}

/// Para-Kaehler witnesses come from the solver's families on G21 and the
/// abelian plane.
pub struct WitnessSource {
    pub name: &'static str,
    pub algebra: LieAlgebra<Rational>,
    pub omega: TwoForm<Rational>,
    pub family: Vec<FamilyComponent>,
}

pub fn witness_sources() -> Vec<WitnessSource> {
    let r = |n: i64| Rational::from_integer(n.into());
    let g21 = builtin("G21").expect("builtin");
    let g21_omega = TwoForm::from_wedges(6, &[(0, 5, r(1)), (1, 4, r(1)), (2, 3, r(-1))]);
    let plane = LieAlgebra::<Rational>::abelian(2);
    let plane_omega = TwoForm::from_wedges(2, &[(0, 1, r(1))]);
    let mut out = Vec::new();
    for (name, l, w) in [
        ("G21", rational_algebra(g21.algebra().expect("brackets")), g21_omega),
        ("abelian-2", plane, plane_omega),
    ] {
        let ls = l.map_field(|x| Scalar::from_rational(x.clone()));
        let ws = TwoForm::new(w.matrix().map(|x| Scalar::from_rational(x.clone()))).expect("antisymmetric");
        let family = match prepare(&ls, &ws) {
            Ok(sys) => solve(&sys, &Budget::default()).family,
            Err(_) => Vec::new(),
        };
        out.push(WitnessSource {
            name,
            algebra: l,
            omega: w,
            family,
        });
    }
    out
}

/// A random rational point of a family component.
pub fn sample_witness(rng: &mut impl Rng, component: &FamilyComponent) -> Option<Endomorphism<Rational>> {
    for _ in 0..20 {
        let point: BTreeMap<_, _> = component.free.iter().map(|v| (v.clone(), small_rational(rng))).collect();
        if let Some(m) = component.specialize(&point) {
            let q = m.try_map(|x| x.as_rational().ok_or(())).ok()?;
            return Endomorphism::new(q).ok();
        }
    }
    None
}

/// Runs one suite. Unknown names give `None`.
pub fn run_suite(name: &str, seed: u64, cases: usize) -> Option<SuiteReport> {
    let index = SUITES.iter().position(|s| *s == name)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64));
    let mut report = SuiteReport {
        name: name.to_string(),
        seed,
        cases,
        failed: 0,
        failures: Vec::new(),
    };
    let algebras = if matches!(name, "lie" | "center_pairing" | "connection" | "integrability") {
        sample_algebras()
    } else {
        Vec::new()
    };
    let closed: Vec<Vec<TwoForm<Rational>>> = if name == "center_pairing" {
        algebras.iter().map(|l| closed_forms(l).expect("rational")).collect()
    } else {
        Vec::new()
    };
    let sources = if name == "witness" { witness_sources() } else { Vec::new() };
    let ctx = ring_context();
    for case in 0..cases {
        let outcome = match name {
            "ring" => {
                let (a, b, c) = (random_scalar(&mut rng, &ctx), random_scalar(&mut rng, &ctx), random_scalar(&mut rng, &ctx));
                ring_laws(&a, &b, &c, &ctx)
            }
            "linalg" => {
                let rows = rng.gen_range(1..=5);
                let cols = if rng.gen_bool(0.5) { rows } else { rng.gen_range(1..=5) };
                let m = random_matrix(&mut rng, rows, cols);
                let p = Matrix::from_fn(rows, rows, |_, _| small_int(&mut rng, 2));
                linalg_laws(&m, &p)
            }
            "lie" => {
                let l = &algebras[case % algebras.len()];
                let n = l.dim();
                let (x, y, z) = (random_vector(&mut rng, n), random_vector(&mut rng, n), random_vector(&mut rng, n));
                bracket_laws(l, &x, &y, &z)
            }
            "center_pairing" => {
                // G1 and G21 only.
                let k = case % 2;
                let w = random_closed_form(&mut rng, &closed[k]);
                center_pairing_laws(&algebras[k], &w)
            }
            "connection" => {
                let l = &algebras[case % algebras.len()];
                let n = l.dim();
                let g = random_metric(&mut rng, n);
                let vs: Vec<Vec<Rational>> = (0..4).map(|_| random_vector(&mut rng, n)).collect();
                connection_laws(l, &g, [&vs[0], &vs[1], &vs[2], &vs[3]])
            }
            "witness" => {
                let src = &sources[case % sources.len()];
                match src.family.choose(&mut rng).and_then(|c| sample_witness(&mut rng, c)) {
                    Some(j) => check_witness(&src.algebra, &src.omega, &j),
                    None => Err(format!("{}: no witness sampled", src.name)),
                }
            }
            "integrability" => {
                let l = &algebras[case % algebras.len()];
                if l.dim() % 2 == 1 {
                    continue;
                }
                let j = random_paracomplex(&mut rng, l.dim());
                integrability_laws(l, &j)
            }
            _ => unreachable!(),
        };
        if let Err(msg) = outcome {
            report.failed += 1;
            if report.failures.len() < 5 {
                report.failures.push(format!("case {}: {}", case, msg));
            }
        }
    }
    Some(report)
}

fn check_witness(l: &LieAlgebra<Rational>, w: &TwoForm<Rational>, j: &Endomorphism<Rational>) -> Check {
    ensure(check_compatible(w, j).map_err(err)?, || "sampled J not compatible".into())?;
    ensure(is_integrable(l, j).map_err(err)?.integrable(), || "sampled J not integrable".into())?;
    witness_laws(w, j)
}
