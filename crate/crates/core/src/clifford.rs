//! Sparse Clifford algebras of diagonal quadratic forms over `Q`.
//!
//! Blades are bitmasks over the basis `e_1, …, e_{2n}` (bit `i - 1` is `e_i`),
//! always stored with ascending indices. A multivector maps blades to nonzero
//! rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{parse_rational, rational_to_string, Rational};
use crate::error::{Error, Result};

pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadForm {
    diag: Vec<Rational>,
}

impl QuadForm {
    pub fn new(diag: Vec<Rational>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || n % 2 == 1 || n > MAX_DIM {
            return Err(Error::BadDimension(n));
        }
        if diag.iter().any(Zero::is_zero) {
            return Err(Error::Precondition("degenerate quadratic form".into()));
        }
        Ok(QuadForm { diag })
    }

    /// `Σ xᵢ²`.
    pub fn fa(dim: usize) -> Result<Self> {
        Self::new(vec![Rational::one(); dim])
    }

    /// `Σ (x₂ᵢ² − x₂ᵢ₋₁²)`: odd 1-based coordinates carry `-1`.
    pub fn fs(dim: usize) -> Result<Self> {
        Self::new(
            (0..dim)
                .map(|i| {
                    if i % 2 == 0 {
                        -Rational::one()
                    } else {
                        Rational::one()
                    }
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[Rational] {
        &self.diag
    }

    pub fn is_definite(&self) -> bool {
        self.diag.iter().all(Signed::is_positive) || self.diag.iter().all(Signed::is_negative)
    }

    pub fn is_fa(&self) -> bool {
        self.diag.iter().all(One::is_one)
    }

    /// The symmetric bilinear form with `b(v, v) = f(v)`.
    pub fn bilinear(&self, x: &Vector, y: &Vector) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..self.dim() {
            if !x[i].is_zero() && !y[i].is_zero() {
                acc += &self.diag[i] * &x[i] * &y[i];
            }
        }
        acc
    }

    pub fn eval(&self, v: &Vector) -> Rational {
        self.bilinear(v, v)
    }

    pub fn check_vector(&self, v: &Vector) -> Result<()> {
        if v.dim() != self.dim() {
            return Err(Error::LengthMismatch {
                got: v.dim(),
                want: self.dim(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Blade(pub u64);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    /// `e_{i₁}⋯e_{i_k}` from 1-based indices in any order; repeated indices
    /// are rejected.
    pub fn from_indices(idx: &[usize]) -> Option<Blade> {
        let mut mask = 0u64;
        for &i in idx {
            if i == 0 || i > MAX_DIM || mask & (1 << (i - 1)) != 0 {
                return None;
            }
            mask |= 1 << (i - 1);
        }
        Some(Blade(mask))
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    /// Ascending 1-based indices.
    pub fn indices(self) -> Vec<usize> {
        (0..64)
            .filter(|b| self.0 & (1 << b) != 0)
            .map(|b| b + 1)
            .collect()
    }

    /// Sign of reordering `e_A e_B` into ascending order, before contraction.
    pub fn reorder_sign(a: Blade, b: Blade) -> i32 {
        let mut swaps = 0u32;
        let mut rest = b.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            swaps += (a.0 >> (j + 1)).count_ones();
        }
        if swaps.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn reverse_sign(self) -> i32 {
        let k = self.grade();
        if (k * k.saturating_sub(1) / 2).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices().iter().map(usize::to_string).collect();
        write!(f, "e{{{}}}", idx.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vector(Vec<Rational>);

impl Vector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Vector(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Vector(vec![Rational::zero(); dim])
    }

    /// Standard basis vector `e_i`, 1-based.
    pub fn basis(dim: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= dim, "basis index {i} out of range");
        let mut v = Self::zero(dim);
        v.0[i - 1] = Rational::one();
        v
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Vector(
            coords
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Vector {
        Vector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(rational_to_string).collect()
    }
}

impl Index<usize> for Vector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multivector {
    form: Arc<QuadForm>,
    terms: BTreeMap<Blade, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub blade: Vec<usize>,
    pub coeff: String,
}

impl Multivector {
    pub fn zero(form: &Arc<QuadForm>) -> Self {
        Multivector {
            form: form.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(form: &Arc<QuadForm>, c: Rational) -> Self {
        Self::term(form, Blade::SCALAR, c)
    }

    pub fn one(form: &Arc<QuadForm>) -> Self {
        Self::scalar(form, Rational::one())
    }

    pub fn term(form: &Arc<QuadForm>, blade: Blade, c: Rational) -> Self {
        let mut m = Self::zero(form);
        m.add_term(blade, c);
        m
    }

    /// `e_{i₁}⋯e_{i_k}` as written, so unsorted or repeated indices pick up
    /// the corresponding sign and contraction.
    pub fn basis_product(form: &Arc<QuadForm>, idx: &[usize]) -> Result<Self> {
        let mut out = Self::one(form);
        for &i in idx {
            if i == 0 || i > form.dim() {
                return Err(Error::Precondition(format!(
                    "basis index {i} outside 1..={}",
                    form.dim()
                )));
            }
            out = out.gp(&Self::term(form, Blade(1 << (i - 1)), Rational::one()))?;
        }
        Ok(out)
    }

    pub fn from_terms(
        form: &Arc<QuadForm>,
        terms: impl IntoIterator<Item = (Blade, Rational)>,
    ) -> Result<Self> {
        let mut m = Self::zero(form);
        for (b, c) in terms {
            if form.dim() < 64 && b.0 >> form.dim() != 0 {
                return Err(Error::Precondition(format!("blade {b} outside dimension")));
            }
            m.add_term(b, c);
        }
        Ok(m)
    }

    /// `Σ vᵢ eᵢ`.
    pub fn embed_vector(form: &Arc<QuadForm>, v: &Vector) -> Result<Self> {
        form.check_vector(v)?;
        let mut m = Self::zero(form);
        for i in 0..v.dim() {
            m.add_term(Blade(1 << i), v[i].clone());
        }
        Ok(m)
    }

    pub fn form(&self) -> &Arc<QuadForm> {
        &self.form
    }

    pub fn terms(&self) -> &BTreeMap<Blade, Rational> {
        &self.terms
    }

    pub fn coeff(&self, b: Blade) -> Rational {
        self.terms.get(&b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(Blade::SCALAR).is_one()
    }

    pub fn as_scalar(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Blade::SCALAR).cloned(),
            _ => None,
        }
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|b| b.grade() % 2 == 0)
    }

    pub fn is_grade(&self, k: u32) -> bool {
        self.terms.keys().all(|b| b.grade() == k)
    }

    /// Coefficients of a grade-1 element.
    pub fn to_vector(&self) -> Result<Vector> {
        if !self.is_grade(1) {
            return Err(Error::NotGradeOne);
        }
        let mut v = Vector::zero(self.form.dim());
        for (b, c) in &self.terms {
            v[b.0.trailing_zeros() as usize] = c.clone();
        }
        Ok(v)
    }

    fn add_term(&mut self, b: Blade, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(b) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn same_form(&self, other: &Multivector) -> Result<()> {
        if Arc::ptr_eq(&self.form, &other.form) || self.form == other.form {
            Ok(())
        } else {
            Err(Error::FormMismatch)
        }
    }

    /// Product of two blades including the contraction `eᵢeᵢ = dᵢ`.
    pub fn blade_product(form: &QuadForm, a: Blade, b: Blade) -> (Blade, Rational) {
        let mut c = Rational::from_integer(Blade::reorder_sign(a, b).into());
        let mut common = a.0 & b.0;
        while common != 0 {
            let i = common.trailing_zeros() as usize;
            common &= common - 1;
            c *= &form.diag[i];
        }
        (Blade(a.0 ^ b.0), c)
    }

    /// The geometric product.
    pub fn gp(&self, other: &Multivector) -> Result<Multivector> {
        self.same_form(other)?;
        if self.form.diag.iter().all(|d| d.is_integer()) {
            return Ok(self.gp_integral(other));
        }
        let mut out = Multivector::zero(&self.form);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (blade, s) = Self::blade_product(&self.form, *a, *b);
                out.add_term(blade, s * ca * cb);
            }
        }
        Ok(out)
    }

    /// Product over a common denominator when the form has integer entries,
    /// so only the final coefficients are reduced.
    fn gp_integral(&self, other: &Multivector) -> Multivector {
        let (na, da) = self.integer_parts();
        let (nb, db) = other.integer_parts();
        let diag: Vec<BigInt> = self.form.diag.iter().map(|d| d.numer().clone()).collect();
        let mut acc: BTreeMap<Blade, BigInt> = BTreeMap::new();
        for (a, ca) in &na {
            for (b, cb) in &nb {
                let mut c = ca * cb;
                let mut common = a.0 & b.0;
                while common != 0 {
                    let i = common.trailing_zeros() as usize;
                    common &= common - 1;
                    if !diag[i].is_one() {
                        c *= &diag[i];
                    }
                }
                if Blade::reorder_sign(*a, *b) < 0 {
                    c = -c;
                }
                *acc.entry(Blade(a.0 ^ b.0)).or_default() += c;
            }
        }
        let den = da * db;
        Multivector {
            form: self.form.clone(),
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(b, c)| (b, Rational::new(c, den.clone())))
                .collect(),
        }
    }

    fn integer_parts(&self) -> (Vec<(Blade, BigInt)>, BigInt) {
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let nums = self
            .terms
            .iter()
            .map(|(b, c)| (*b, c.numer() * (&den / c.denom())))
            .collect();
        (nums, den)
    }

    /// The canonical involution `e_T ↦ e'_T` (reversal of factors).
    pub fn reverse(&self) -> Multivector {
        Multivector {
            form: self.form.clone(),
            terms: self
                .terms
                .iter()
                .map(|(b, c)| (*b, if b.reverse_sign() < 0 { -c } else { c.clone() }))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Multivector {
        if c.is_zero() {
            return Multivector::zero(&self.form);
        }
        Multivector {
            form: self.form.clone(),
            terms: self.terms.iter().map(|(b, x)| (*b, x * c)).collect(),
        }
    }

    pub fn try_add(&self, other: &Multivector) -> Result<Multivector> {
        self.same_form(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Multivector) -> Result<Multivector> {
        self.try_add(&-other)
    }

    /// `x x'` when it is a scalar.
    pub fn norm_scalar(&self) -> Option<Rational> {
        self.gp(&self.reverse()).ok()?.as_scalar()
    }

    /// `x'/(x x')` for versor-like `x` with scalar, nonzero `x x'`.
    pub fn versor_inverse(&self) -> Option<Multivector> {
        let n = self.norm_scalar()?;
        if n.is_zero() {
            return None;
        }
        Some(self.reverse().scale(&n.recip()))
    }

    /// `τ_g(v) = g v g'`, required to land back in the vector space.
    pub fn twisted_action(&self, v: &Vector) -> Result<Vector> {
        let ev = Multivector::embed_vector(&self.form, v)?;
        self.gp(&ev)?.gp(&self.reverse())?.to_vector()
    }

    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(b, c)| TermJson {
                blade: b.indices(),
                coeff: rational_to_string(c),
            })
            .collect()
    }

    pub fn from_json_terms(form: &Arc<QuadForm>, terms: &[TermJson]) -> Result<Multivector> {
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            let b = Blade::from_indices(&t.blade)
                .ok_or_else(|| Error::Parse(format!("bad blade {:?}", t.blade)))?;
            parsed.push((b, parse_rational(&t.coeff)?));
        }
        Multivector::from_terms(form, parsed)
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(&-Rational::one())
    }
}

/// Panics on mismatched forms; use [`Multivector::gp`] for a checked product.
impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.gp(rhs)
            .expect("geometric product over different forms")
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        self.try_add(rhs).expect("sum over different forms")
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self.try_sub(rhs).expect("difference over different forms")
    }
}

/// Renders as `c·e{i,j,…} + …`, blades in mask order, `0` when empty.
impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| format!("{}·{}", rational_to_string(c), b))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use proptest::prelude::*;

    fn fa(n: usize) -> Arc<QuadForm> {
        Arc::new(QuadForm::fa(n).unwrap())
    }

    fn e(form: &Arc<QuadForm>, idx: &[usize]) -> Multivector {
        Multivector::basis_product(form, idx).unwrap()
    }

    #[test]
    fn basic_products() {
        let f = fa(6);
        assert!(e(&f, &[1]).gp(&e(&f, &[1])).unwrap().is_one());
        let anti = &e(&f, &[1, 2]) + &e(&f, &[2, 1]);
        assert!(anti.is_zero());
        assert_eq!(e(&f, &[1, 2]).gp(&e(&f, &[2, 3])).unwrap(), e(&f, &[1, 3]));
        let fs = Arc::new(QuadForm::fs(6).unwrap());
        assert_eq!(
            e(&fs, &[1]).gp(&e(&fs, &[1])).unwrap(),
            Multivector::scalar(&fs, int(-1))
        );
        assert!(e(&fs, &[2]).gp(&e(&fs, &[2])).unwrap().is_one());
    }

    #[test]
    fn reverse_examples() {
        let f = fa(6);
        assert!(Multivector::one(&f).reverse().is_one());
        assert_eq!(e(&f, &[1, 2]).reverse(), -&e(&f, &[1, 2]));
        assert_eq!(e(&f, &[1, 2, 3, 4]).reverse(), e(&f, &[1, 2, 3, 4]));
    }

    #[test]
    fn embed_examples() {
        let f = fa(6);
        assert_eq!(
            Multivector::embed_vector(&f, &Vector::basis(6, 1)).unwrap(),
            e(&f, &[1])
        );
        let v = Vector::from_ints(&[3, 4, 0, 0, 0, 0]);
        let ev = Multivector::embed_vector(&f, &v).unwrap();
        assert_eq!(ev.gp(&ev).unwrap().as_scalar(), Some(int(25)));
        assert!(Multivector::embed_vector(&f, &Vector::zero(6))
            .unwrap()
            .is_zero());
        assert!(Multivector::embed_vector(&f, &Vector::zero(4)).is_err());
    }

    #[test]
    fn twisted_examples() {
        let f = fa(6);
        let v = Vector::from_ints(&[1, 2, 3, 4, 5, 6]);
        assert_eq!(Multivector::one(&f).twisted_action(&v).unwrap(), v);
        let g = e(&f, &[1, 2]);
        assert_eq!(
            g.twisted_action(&Vector::basis(6, 1)).unwrap(),
            -&Vector::basis(6, 1)
        );
        assert_eq!(
            g.twisted_action(&Vector::basis(6, 3)).unwrap(),
            Vector::basis(6, 3)
        );
        // 1 + e1e2e3 sends e4 to a grade-3 element.
        let bad = &Multivector::one(&f) + &e(&f, &[1, 2, 3]);
        assert!(matches!(
            bad.twisted_action(&Vector::basis(6, 4)),
            Err(Error::NotGradeOne)
        ));
    }

    #[test]
    fn mismatched_forms() {
        let a = e(&fa(6), &[1]);
        let b = e(&Arc::new(QuadForm::fs(6).unwrap()), &[1]);
        assert!(matches!(a.gp(&b), Err(Error::FormMismatch)));
    }

    #[test]
    fn anticommuting_basis() {
        let f = Arc::new(QuadForm::fs(8).unwrap());
        for i in 1..=8 {
            for j in 1..=8 {
                if i != j {
                    assert_eq!(e(&f, &[i, j]), -&e(&f, &[j, i]));
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let f = fa(6);
        let x = &e(&f, &[1, 2]).scale(&crate::arith::rat(-3, 4)) + &Multivector::scalar(&f, int(2));
        let back = Multivector::from_json_terms(&f, &x.to_json_terms()).unwrap();
        assert_eq!(back, x);
        assert_eq!(x.to_string(), "2/1·e{} + -3/4·e{1,2}");
    }

    fn arb_mv(form: Arc<QuadForm>) -> impl Strategy<Value = Multivector> {
        let dim = form.dim();
        prop::collection::vec((0u64..(1 << dim), -5i64..6, 1i64..4), 0..=8).prop_map(move |ts| {
            Multivector::from_terms(
                &form,
                ts.into_iter()
                    .map(|(m, n, d)| (Blade(m), crate::arith::rat(n, d))),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn associative(
            (x, y, z) in (arb_mv(Arc::new(QuadForm::fs(6).unwrap())),
                          arb_mv(Arc::new(QuadForm::fs(6).unwrap())),
                          arb_mv(Arc::new(QuadForm::fs(6).unwrap())))
        ) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        }

        #[test]
        fn reverse_is_anti_automorphism(
            (x, y) in (arb_mv(Arc::new(QuadForm::fs(8).unwrap())),
                       arb_mv(Arc::new(QuadForm::fs(8).unwrap())))
        ) {
            prop_assert_eq!((&x * &y).reverse(), &y.reverse() * &x.reverse());
        }

        #[test]
        fn vector_square_is_norm(coords in prop::collection::vec(-20i64..20, 8)) {
            let f = Arc::new(QuadForm::fs(8).unwrap());
            let v = Vector::from_ints(&coords);
            let ev = Multivector::embed_vector(&f, &v).unwrap();
            prop_assert_eq!((&ev * &ev).as_scalar(), Some(f.eval(&v)));
        }
    }
}
