//! Spin groups of diagonal forms: membership, reflections, Cartan–Dieudonné
//! factorizations, spinor norms and the archimedean separation metric.

mod coroot;
mod witt;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{rational_sqrt, rational_to_string, squarefree_part, Rational};
use crate::clifford::{Multivector, QuadForm, TermJson, Vector};
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;

pub use coroot::{adjoint_exponent, adjoint_on_root, coroot, root_vector};
pub use witt::{witt_map, WITT_SEARCH_BOUND};

/// Why a multivector failed the spin-membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpinRejection {
    OddGrade,
    NotNormOne(String),
    NotVectorPreserving(usize),
}

impl fmt::Display for SpinRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpinRejection::OddGrade => write!(f, "has odd-grade terms"),
            SpinRejection::NotNormOne(n) => write!(f, "x x' = {n}, not 1"),
            SpinRejection::NotVectorPreserving(i) => {
                write!(f, "x e_{i} x' is not a vector")
            }
        }
    }
}

/// Spin membership: even, `x x' = 1`, and `x eᵢ x'` a vector for every `i`.
/// On success returns the matrix of `τ_x` (columns `τ_x(eᵢ)`).
pub fn is_spin(x: &Multivector) -> std::result::Result<RatMatrix, SpinRejection> {
    if !x.is_even() {
        return Err(SpinRejection::OddGrade);
    }
    let n = x
        .gp(&x.reverse())
        .expect("same form")
        .as_scalar()
        .filter(One::is_one);
    if n.is_none() {
        return Err(SpinRejection::NotNormOne(
            x.gp(&x.reverse()).unwrap().to_string(),
        ));
    }
    let dim = x.form().dim();
    let mut cols = Vec::with_capacity(dim);
    for i in 1..=dim {
        match x.twisted_action(&Vector::basis(dim, i)) {
            Ok(c) => cols.push(c),
            Err(_) => return Err(SpinRejection::NotVectorPreserving(i)),
        }
    }
    Ok(RatMatrix::from_columns(&cols))
}

/// An element of `Spin_f(Q)` together with its image in `SO_f(Q)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpinElement {
    g: Multivector,
    matrix: RatMatrix,
}

impl SpinElement {
    pub fn new(g: Multivector) -> Result<Self> {
        let matrix = is_spin(&g).map_err(|r| Error::NotSpin(r.to_string()))?;
        Ok(SpinElement { g, matrix })
    }

    pub fn identity(form: &Arc<QuadForm>) -> Self {
        SpinElement {
            g: Multivector::one(form),
            matrix: RatMatrix::identity(form.dim()),
        }
    }

    pub fn multivector(&self) -> &Multivector {
        &self.g
    }

    pub fn form(&self) -> &Arc<QuadForm> {
        self.g.form()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn mul(&self, other: &SpinElement) -> Result<SpinElement> {
        Ok(SpinElement {
            g: self.g.gp(&other.g)?,
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// `g⁻¹ = g'`.
    pub fn inverse(&self) -> SpinElement {
        SpinElement {
            g: self.g.reverse(),
            matrix: self.matrix.transpose_for(self.form()),
        }
    }

    /// The other lift of the same rotation.
    pub fn negate(&self) -> SpinElement {
        SpinElement {
            g: -&self.g,
            matrix: self.matrix.clone(),
        }
    }

    pub fn act(&self, v: &Vector) -> Vector {
        self.matrix.apply(v)
    }

    pub fn commutator(&self, other: &SpinElement) -> Result<SpinElement> {
        self.mul(other)?.mul(&self.inverse())?.mul(&other.inverse())
    }

    pub fn to_json(&self) -> SpinElementJson {
        SpinElementJson {
            terms: self.g.to_json_terms(),
            matrix: self.matrix.to_string_rows(),
        }
    }
}

impl fmt::Debug for SpinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpinElement({})", self.g)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpinElementJson {
    pub terms: Vec<TermJson>,
    pub matrix: Vec<Vec<String>>,
}

impl RatMatrix {
    /// Inverse of an `f`-orthogonal matrix: `D⁻¹ Mᵀ D`.
    pub fn transpose_for(&self, form: &QuadForm) -> RatMatrix {
        let n = self.dim();
        let d = form.diag();
        let mut t = RatMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if !self[(j, i)].is_zero() {
                    t[(i, j)] = &self[(j, i)] * &d[j] / &d[i];
                }
            }
        }
        t
    }
}

/// `Mᵀ diag(f) M = diag(f)` and `det M = 1`.
pub fn check_so(form: &QuadForm, m: &RatMatrix) -> Result<()> {
    if m.dim() != form.dim() {
        return Err(Error::NotOrthogonal(format!(
            "size {} for a form of dimension {}",
            m.dim(),
            form.dim()
        )));
    }
    check_orthogonal(form, m)?;
    if !m.det().is_one() {
        return Err(Error::NotOrthogonal(format!("det = {}", m.det())));
    }
    Ok(())
}

pub fn check_orthogonal(form: &QuadForm, m: &RatMatrix) -> Result<()> {
    let d = RatMatrix::diagonal(form.diag());
    if &(&m.transpose() * &d) * m != d {
        return Err(Error::NotOrthogonal("Mᵀ D M ≠ D".into()));
    }
    Ok(())
}

/// `τ_a(x) = x − (2 b(x, a) / f(a)) a`.
pub fn reflection_matrix(form: &QuadForm, a: &Vector) -> Result<RatMatrix> {
    form.check_vector(a)?;
    let fa = form.eval(a);
    if fa.is_zero() {
        return Err(Error::Isotropic);
    }
    let n = form.dim();
    let two = Rational::from_integer(2.into());
    let mut m = RatMatrix::identity(n);
    for j in 0..n {
        if a[j].is_zero() {
            continue;
        }
        let s = &two * &form.diag()[j] * &a[j] / &fa;
        for i in 0..n {
            if !a[i].is_zero() {
                m[(i, j)] -= &s * &a[i];
            }
        }
    }
    Ok(m)
}

/// `τ_{a₁} ⋯ τ_{a_k}`.
pub fn compose_reflections(form: &QuadForm, vs: &[Vector]) -> Result<RatMatrix> {
    let mut m = RatMatrix::identity(form.dim());
    for v in vs {
        m = &m * &reflection_matrix(form, v)?;
    }
    Ok(m)
}

fn reflect(form: &QuadForm, a: &Vector, fa: &Rational, x: &Vector) -> Vector {
    let s = Rational::from_integer(2.into()) * form.bilinear(x, a) / fa;
    x - &a.scale(&s)
}

/// `e_{v₁} ⋯ e_{v_{2k}} / r` with `r² = ∏ f(vᵢ)`, whose image is
/// `τ_{v₁} ⋯ τ_{v_{2k}}`. The sign of `r` is positive.
pub fn spin_from_vectors(form: &Arc<QuadForm>, vs: &[Vector]) -> Result<SpinElement> {
    if vs.len() % 2 == 1 {
        return Err(Error::OddLength);
    }
    let mut g = Multivector::one(form);
    let mut norm = Rational::one();
    for v in vs {
        let f = form.eval(v);
        if f.is_zero() {
            return Err(Error::Isotropic);
        }
        norm *= f;
        g = g.gp(&Multivector::embed_vector(form, v)?)?;
    }
    let r = rational_sqrt(&norm).ok_or_else(|| Error::NonSquareNorm(rational_to_string(&norm)))?;
    let g = g.scale(&r.recip());
    let matrix = compose_reflections(form, vs)?;
    let out = SpinElement { g, matrix };
    debug_assert_eq!(is_spin(&out.g).ok().as_ref(), Some(&out.matrix));
    Ok(out)
}

/// Cartan–Dieudonné factorization `M = τ_{a₁} ⋯ τ_{a_k}`, peeling the basis
/// vectors in increasing order. `k` is even; it is at most `dim` for
/// anisotropic forms and at most `2(dim − 1)` in general.
pub fn reflection_decompose(form: &QuadForm, m: &RatMatrix) -> Result<Vec<Vector>> {
    let order: Vec<usize> = (0..form.dim()).collect();
    reflection_decompose_in_order(form, m, &order)
}

/// As [`reflection_decompose`] with the basis visited in `order` (0-based).
pub fn reflection_decompose_in_order(
    form: &QuadForm,
    m: &RatMatrix,
    order: &[usize],
) -> Result<Vec<Vector>> {
    check_so(form, m)?;
    let n = form.dim();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err(Error::Precondition("order is not a permutation".into()));
    }
    // cols[j] is the current image of e_j; peeling left-multiplies by τ_w.
    let mut cols: Vec<Vector> = (0..n).map(|j| m.column(j)).collect();
    let mut out = Vec::new();
    for &i in order {
        let e = Vector::basis(n, i + 1);
        if cols[i] == e {
            continue;
        }
        let w = &cols[i] - &e;
        let fw = form.eval(&w);
        let step = if !fw.is_zero() {
            vec![w]
        } else {
            vec![&cols[i] + &e, e]
        };
        for a in &step {
            let fa = form.eval(a);
            for c in cols.iter_mut() {
                *c = reflect(form, a, &fa, c);
            }
        }
        debug_assert_eq!(cols[i], Vector::basis(n, i + 1));
        out.extend(step);
    }
    debug_assert!(out.len() % 2 == 0);
    Ok(out)
}

/// A class in `Q^×/(Q^×)²`, kept as an unreduced rational representative.
#[derive(Debug, Clone)]
pub struct SquareClass(Rational);

impl SquareClass {
    pub fn new(rep: Rational) -> Result<Self> {
        if rep.is_zero() {
            return Err(Error::Precondition("zero has no square class".into()));
        }
        Ok(SquareClass(rep))
    }

    pub fn representative(&self) -> &Rational {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        rational_sqrt(&self.0).is_some()
    }

    pub fn same_class(&self, other: &SquareClass) -> bool {
        rational_sqrt(&(&self.0 * &other.0)).is_some()
    }

    /// The squarefree integer in this class (requires factoring).
    pub fn squarefree(&self) -> num_bigint::BigInt {
        squarefree_part(&self.0)
    }
}

impl PartialEq for SquareClass {
    fn eq(&self, other: &Self) -> bool {
        self.same_class(other)
    }
}

/// `θ(M)`: the square class of `∏ f(aᵢ)` over any reflection factorization.
pub fn spinor_norm(form: &QuadForm, m: &RatMatrix) -> Result<SquareClass> {
    let vs = reflection_decompose(form, m)?;
    SquareClass::new(norm_product(form, &vs))
}

pub fn norm_product(form: &QuadForm, vs: &[Vector]) -> Rational {
    vs.iter().fold(Rational::one(), |acc, v| acc * form.eval(v))
}

/// `min_{z = ±1} σ_max(τ_g − z I)`, in floating point. Only the definite form
/// has a real place where the metric applies.
pub fn separation(g: &SpinElement) -> Result<f64> {
    if !g.form().is_definite() {
        return Err(Error::Precondition(
            "separation needs a definite form; no real place applies".into(),
        ));
    }
    Ok(separation_of_matrix(g.matrix()))
}

pub fn separation_of_matrix(m: &RatMatrix) -> f64 {
    let n = m.dim();
    let a = nalgebra::DMatrix::from_row_slice(n, n, &m.to_f64());
    [1.0, -1.0]
        .iter()
        .map(|&z| {
            let d = &a - nalgebra::DMatrix::<f64>::identity(n, n) * z;
            d.singular_values().max()
        })
        .fold(f64::INFINITY, f64::min)
}
