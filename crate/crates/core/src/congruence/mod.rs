//! Clifford and orthogonal data modulo odd `m`: reduction maps, principal
//! congruence subgroups, isometries `f_a → f_s` mod `p^k`, and conjugacy
//! widths in small finite quotients.

pub mod width;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{reduce_rational, sqrt_mod, OIdeal, OddPrime, Rational};
use crate::clifford::{Blade, Multivector, QuadForm, TermJson, Vector};
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::spin::SpinElement;

pub use width::{
    gcl_width_bfs, run_width, run_width_cover, run_width_matrices, run_width_quotient, Convention,
    FiniteGroupSpec, WidthMode, WidthReport, WidthRun, DEFAULT_GROUP_CAP, MAX_SPEC_DIM,
    MAX_SPEC_MODULUS,
};

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// Product of blade-to-residue maps for the form with diagonal `diag` mod `m`.
pub(crate) fn gp_terms(
    diag: &[u64],
    m: u64,
    x: &BTreeMap<Blade, u64>,
    y: &BTreeMap<Blade, u64>,
) -> BTreeMap<Blade, u64> {
    let mut out: BTreeMap<Blade, u64> = BTreeMap::new();
    for (a, ca) in x {
        for (b, cb) in y {
            let mut c = mul_mod(*ca, *cb, m);
            let mut common = a.0 & b.0;
            while common != 0 {
                let i = common.trailing_zeros() as usize;
                common &= common - 1;
                c = mul_mod(c, diag[i], m);
            }
            if Blade::reorder_sign(*a, *b) < 0 && c != 0 {
                c = m - c;
            }
            let e = out.entry(Blade(a.0 ^ b.0)).or_insert(0);
            *e = (*e + c) % m;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn check_modulus(m: u64) -> Result<()> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(Error::Arith(crate::arith::ArithError::BadModulus(m.into())));
    }
    Ok(())
}

fn residue(r: &Rational, m: u64) -> Result<u64> {
    let x = reduce_rational(r, &BigInt::from(m))?;
    Ok(x.to_u64().expect("reduced below modulus"))
}

/// A Clifford element with coefficients in `Z/m`, `m` odd.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModMultivector {
    form: Arc<QuadForm>,
    modulus: u64,
    terms: BTreeMap<Blade, u64>,
}

impl ModMultivector {
    pub fn zero(form: &Arc<QuadForm>, m: u64) -> Result<Self> {
        check_modulus(m)?;
        Ok(ModMultivector {
            form: form.clone(),
            modulus: m,
            terms: BTreeMap::new(),
        })
    }

    pub fn one(form: &Arc<QuadForm>, m: u64) -> Result<Self> {
        let mut x = Self::zero(form, m)?;
        x.terms.insert(Blade::SCALAR, 1);
        Ok(x)
    }

    pub fn from_multivector(x: &Multivector, m: u64) -> Result<Self> {
        let mut out = Self::zero(x.form(), m)?;
        for (b, c) in x.terms() {
            out.add_term(*b, residue(c, m)?);
        }
        Ok(out)
    }

    pub fn form(&self) -> &Arc<QuadForm> {
        &self.form
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn terms(&self) -> &BTreeMap<Blade, u64> {
        &self.terms
    }

    pub fn coeff(&self, b: Blade) -> u64 {
        self.terms.get(&b).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(Blade::SCALAR) == 1
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|b| b.grade() % 2 == 0)
    }

    pub(crate) fn add_term(&mut self, b: Blade, c: u64) {
        let m = self.modulus;
        let e = self.terms.entry(b).or_insert(0);
        *e = (*e + c % m) % m;
        if *e == 0 {
            self.terms.remove(&b);
        }
    }

    pub(crate) fn diag_residues(&self) -> Result<Vec<u64>> {
        self.form
            .diag()
            .iter()
            .map(|d| residue(d, self.modulus))
            .collect()
    }

    fn compatible(&self, other: &ModMultivector) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::Precondition(format!(
                "moduli {} and {} differ",
                self.modulus, other.modulus
            )));
        }
        if !(Arc::ptr_eq(&self.form, &other.form) || self.form == other.form) {
            return Err(Error::FormMismatch);
        }
        Ok(())
    }

    /// The geometric product modulo `m`.
    pub fn gp_mod(&self, other: &ModMultivector) -> Result<ModMultivector> {
        self.compatible(other)?;
        let diag = self.diag_residues()?;
        Ok(ModMultivector {
            form: self.form.clone(),
            modulus: self.modulus,
            terms: gp_terms(&diag, self.modulus, &self.terms, &other.terms),
        })
    }

    pub fn reverse(&self) -> ModMultivector {
        let m = self.modulus;
        ModMultivector {
            form: self.form.clone(),
            modulus: m,
            terms: self
                .terms
                .iter()
                .map(|(b, c)| (*b, if b.reverse_sign() < 0 { m - c } else { *c }))
                .collect(),
        }
    }

    pub fn scale(&self, c: u64) -> ModMultivector {
        let m = self.modulus;
        let mut out = ModMultivector {
            form: self.form.clone(),
            modulus: m,
            terms: BTreeMap::new(),
        };
        for (b, x) in &self.terms {
            out.add_term(*b, mul_mod(*x, c % m, m));
        }
        out
    }

    pub fn neg(&self) -> ModMultivector {
        self.scale(self.modulus - 1)
    }

    /// `x x'` when it is a scalar.
    pub fn norm_scalar(&self) -> Option<u64> {
        let n = self.gp_mod(&self.reverse()).ok()?;
        if n.terms.keys().all(|b| *b == Blade::SCALAR) {
            Some(n.coeff(Blade::SCALAR))
        } else {
            None
        }
    }

    /// `x' / (x x')` for elements whose norm is a unit scalar.
    pub fn inverse(&self) -> Result<ModMultivector> {
        let n = self
            .norm_scalar()
            .ok_or_else(|| Error::NotSpin("norm is not a scalar mod m".into()))?;
        let inv = inv_mod(n, self.modulus).ok_or_else(|| {
            Error::NotSpin(format!("norm {n} is not a unit mod {}", self.modulus))
        })?;
        Ok(self.reverse().scale(inv))
    }

    /// Matrix of `v ↦ x v x⁻¹` on the grade-one part, or an error if some
    /// basis vector leaves grade one.
    pub fn action_matrix(&self) -> Result<ModMatrix> {
        let n = self.form.dim();
        let m = u32::try_from(self.modulus)
            .map_err(|_| Error::Precondition("modulus too large for matrices".into()))?;
        let inv = self.inverse()?;
        let mut out = ModMatrix::zeros(n, m)?;
        for j in 0..n {
            let e = ModMultivector {
                form: self.form.clone(),
                modulus: self.modulus,
                terms: BTreeMap::from([(Blade(1 << j), 1)]),
            };
            let image = self.gp_mod(&e)?.gp_mod(&inv)?;
            for (b, c) in &image.terms {
                if b.grade() != 1 {
                    return Err(Error::NotSpin(format!(
                        "e{} leaves grade one mod {m}",
                        j + 1
                    )));
                }
                out.set(b.0.trailing_zeros() as usize, j, *c as u32);
            }
        }
        Ok(out)
    }

    /// Spin membership mod `m`: even, `x x' ≡ 1`, and grade-one preserving.
    /// Returns the action matrix.
    pub fn check_spin(&self) -> Result<ModMatrix> {
        if !self.is_even() {
            return Err(Error::NotSpin("odd grade".into()));
        }
        if self.norm_scalar() != Some(1) {
            return Err(Error::NotSpin(format!("x x' ≢ 1 mod {}", self.modulus)));
        }
        self.action_matrix()
    }

    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(b, c)| TermJson {
                blade: b.indices(),
                coeff: c.to_string(),
            })
            .collect()
    }
}

impl fmt::Display for ModMultivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 (mod {})", self.modulus);
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| {
                if *b == Blade::SCALAR {
                    c.to_string()
                } else {
                    format!("{c}·{b}")
                }
            })
            .collect();
        write!(f, "{} (mod {})", parts.join(" + "), self.modulus)
    }
}

/// Coefficient-wise reduction of a spin element modulo odd `m`.
pub fn reduce_mod(g: &SpinElement, m: u64) -> Result<ModMultivector> {
    ModMultivector::from_multivector(g.multivector(), m)
}

/// Whether `g` lies in the kernel of reduction modulo the ideal `I`.
pub fn in_congruence_subgroup(g: &SpinElement, ideal: &OIdeal) -> bool {
    if ideal.is_unit() {
        return true;
    }
    let m = ideal.generator();
    match m.to_u64() {
        Some(m) => reduce_mod(g, m).map(|x| x.is_one()).unwrap_or(false),
        None => g.multivector().terms().iter().all(|(b, c)| {
            let c = if *b == Blade::SCALAR {
                c - Rational::from_integer(1.into())
            } else {
                c.clone()
            };
            reduce_rational(&c, &m)
                .map(|r| r.is_zero())
                .unwrap_or(false)
        }),
    }
}

/// Dense square matrix over `Z/m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModMatrix {
    n: usize,
    m: u32,
    data: Vec<u32>,
}

impl ModMatrix {
    pub fn zeros(n: usize, m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::Precondition(format!("modulus {m} too small")));
        }
        Ok(ModMatrix {
            n,
            m,
            data: vec![0; n * n],
        })
    }

    pub fn identity(n: usize, m: u32) -> Result<Self> {
        let mut out = Self::zeros(n, m)?;
        for i in 0..n {
            out.set(i, i, 1);
        }
        Ok(out)
    }

    pub fn diagonal(d: &[i64], m: u32) -> Result<Self> {
        let mut out = Self::zeros(d.len(), m)?;
        for (i, x) in d.iter().enumerate() {
            out.set(i, i, x.rem_euclid(m as i64) as u32);
        }
        Ok(out)
    }

    pub fn from_rows(rows: &[Vec<i64>], m: u32) -> Result<Self> {
        let n = rows.len();
        let mut out = Self::zeros(n, m)?;
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::LengthMismatch {
                    got: r.len(),
                    want: n,
                });
            }
            for (j, x) in r.iter().enumerate() {
                out.set(i, j, x.rem_euclid(m as i64) as u32);
            }
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u32) {
        self.data[i * self.n + j] = x % self.m;
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    pub fn mul(&self, o: &ModMatrix) -> ModMatrix {
        assert_eq!((self.n, self.m), (o.n, o.m), "matrix shapes differ");
        let n = self.n;
        let m = self.m as u64;
        let mut data = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u64;
                for k in 0..n {
                    acc += self.data[i * n + k] as u64 * o.data[k * n + j] as u64;
                    if acc >= 1 << 62 {
                        acc %= m;
                    }
                }
                data[i * n + j] = (acc % m) as u32;
            }
        }
        ModMatrix { n, m: self.m, data }
    }

    pub fn transpose(&self) -> ModMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                out.data[j * self.n + i] = self.data[i * self.n + j];
            }
        }
        out
    }

    /// Determinant of the integer representatives, reduced mod `m`.
    pub fn det(&self) -> u32 {
        let cols: Vec<Vector> = (0..self.n)
            .map(|j| {
                Vector::new(
                    (0..self.n)
                        .map(|i| Rational::from_integer(self.get(i, j).into()))
                        .collect(),
                )
            })
            .collect();
        let d = RatMatrix::from_columns(&cols).det();
        crate::arith::modp(d.numer(), &BigInt::from(self.m))
            .to_u32()
            .expect("reduced below modulus")
    }

    /// Inverse of an element orthogonal for `diag(d)`: `d⁻¹ Mᵀ d`.
    pub fn orthogonal_inverse(&self, d: &[u32]) -> Result<ModMatrix> {
        let m = self.m as u64;
        let mut out = self.transpose();
        for i in 0..self.n {
            let di = inv_mod(d[i] as u64, m)
                .ok_or_else(|| Error::Precondition(format!("form entry {} not a unit", d[i])))?;
            for j in 0..self.n {
                let x = mul_mod(mul_mod(di, out.get(i, j) as u64, m), d[j] as u64, m);
                out.set(i, j, x as u32);
            }
        }
        Ok(out)
    }

    /// `Mᵀ·diag(from)·M`.
    pub fn gram(&self, from: &[u32]) -> ModMatrix {
        let mut dm = self.clone();
        let m = self.m as u64;
        for i in 0..self.n {
            for j in 0..self.n {
                dm.set(
                    i,
                    j,
                    mul_mod(from[i] as u64, self.get(i, j) as u64, m) as u32,
                );
            }
        }
        self.transpose().mul(&dm)
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

/// Diagonal entries of a form reduced mod `m`.
pub fn form_residues(form: &QuadForm, m: u32) -> Result<Vec<u32>> {
    form.diag()
        .iter()
        .map(|d| residue(d, m as u64).map(|x| x as u32))
        .collect()
}

/// `x, y` with `x² + y² ≡ −1 (mod p^k)`, `y` the least nonnegative value for
/// which `−1 − y²` is a nonzero square mod `p`, and `x` its canonical root.
pub fn sum_of_two_squares_minus_one(p: &OddPrime, k: u32) -> Result<(BigInt, BigInt)> {
    let mut y = BigInt::zero();
    loop {
        let target = -BigInt::from(1) - &y * &y;
        if !crate::arith::modp(&target, p.value()).is_zero() {
            if let Some(x) = sqrt_mod(&target, p, k)? {
                return Ok((x, y));
            }
        }
        y += 1;
    }
}

/// `M` with `Mᵀ·diag(f_a)·M ≡ diag(f_s) (mod p^k)`.
///
/// For `p ≡ 1 (mod 4)` it is block diagonal in `2×2` blocks `[[i,0],[0,1]]`
/// with `i² ≡ −1`. For `p ≡ 3 (mod 4)` each `4×4` block sends `e₁, e₃` to the
/// orthogonal pair `(x, y), (−y, x)` of norm `−1` and `e₂, e₄` to `e₃, e₄`.
/// In that case `dim ≡ 2 (mod 4)` has no solution, since `det(M)² ≡ −1`.
pub fn isometry_mod(p: &OddPrime, k: u32, dim: usize) -> Result<ModMatrix> {
    if dim == 0 || dim % 2 == 1 {
        return Err(Error::BadDimension(dim));
    }
    if k == 0 {
        return Err(Error::Precondition("precision must be positive".into()));
    }
    let pk = p.pow(k);
    let m = pk
        .to_u32()
        .ok_or_else(|| Error::Precondition(format!("modulus {pk} exceeds 32 bits")))?;
    let one_mod_four = (p.value() % 4u32) == BigInt::from(1);
    if !one_mod_four && dim % 4 == 2 {
        return Err(Error::Precondition(format!(
            "no isometry f_a → f_s mod {p}^{k} in dimension {dim}: det² would be −1, a nonsquare mod {p}"
        )));
    }
    let (x, y) = sum_of_two_squares_minus_one(p, k)?;
    let x = x.to_i64().expect("below 2^32");
    let y = y.to_i64().expect("below 2^32");
    let mut out = ModMatrix::zeros(dim, m)?;
    let set = |out: &mut ModMatrix, i: usize, j: usize, v: i64| {
        out.set(i, j, v.rem_euclid(m as i64) as u32)
    };
    if one_mod_four {
        // y = 0 here since −1 is a square mod p.
        debug_assert_eq!(y, 0);
        for b in (0..dim).step_by(2) {
            set(&mut out, b, b, x);
            set(&mut out, b + 1, b + 1, 1);
        }
    } else {
        for b in (0..dim).step_by(4) {
            set(&mut out, b, b, x);
            set(&mut out, b + 1, b, y);
            set(&mut out, b, b + 2, -y);
            set(&mut out, b + 1, b + 2, x);
            set(&mut out, b + 2, b + 1, 1);
            set(&mut out, b + 3, b + 3, 1);
        }
    }
    let fa = form_residues(&QuadForm::fa(dim)?, m)?;
    let fs = form_residues(&QuadForm::fs(dim)?, m)?;
    let want = ModMatrix::diagonal(&fs.iter().map(|&v| v as i64).collect::<Vec<_>>(), m)?;
    if out.gram(&fa) != want {
        return Err(Error::Verification(format!(
            "isometry mod {m} failed its check"
        )));
    }
    if inv_mod(out.det() as u64, m as u64).is_none() {
        return Err(Error::Verification(format!(
            "isometry mod {m} has non-unit determinant"
        )));
    }
    Ok(out)
}

/// `e_{ij}(a)` in `SL₃(Z/m)`, 1-based indices.
fn elementary3(i: usize, j: usize, a: i64, m: u32) -> ModMatrix {
    let mut e = ModMatrix::identity(3, m).expect("m ≥ 2");
    e.set(i - 1, j - 1, a.rem_euclid(m as i64) as u32);
    e
}

/// `[e₁₂(t), e₂₃(s)]` in `SL₃(Z/m)` with `[x, y] = x y x⁻¹ y⁻¹`.
pub fn sl3_commutator(t: i64, s: i64, m: u32) -> Result<ModMatrix> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(Error::Arith(crate::arith::ArithError::BadModulus(m.into())));
    }
    let x = elementary3(1, 2, t, m);
    let y = elementary3(2, 3, s, m);
    let xi = elementary3(1, 2, -t, m);
    let yi = elementary3(2, 3, -s, m);
    Ok(x.mul(&y).mul(&xi).mul(&yi))
}

/// Checks `[e₁₂(t), e₂₃(s)] = e₁₃(ts)` in `SL₃(Z/m)`.
pub fn sl3_commutator_identity(t: i64, s: i64, m: u32) -> Result<bool> {
    let c = sl3_commutator(t, s, m)?;
    let ts = (t as i128 * s as i128).rem_euclid(m as i128) as i64;
    Ok(c == elementary3(1, 3, ts, m))
}

#[derive(Debug, Clone, Serialize)]
pub struct ModMultivectorJson {
    pub modulus: u64,
    pub terms: Vec<TermJson>,
}

impl ModMultivector {
    pub fn to_json(&self) -> ModMultivectorJson {
        ModMultivectorJson {
            modulus: self.modulus,
            terms: self.to_json_terms(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, mod_inverse, rat};
    use crate::spin::coroot;
    use crate::suites::{random_spin, rng};
    use proptest::prelude::*;

    fn fs(n: usize) -> Arc<QuadForm> {
        Arc::new(QuadForm::fs(n).unwrap())
    }

    fn fa(n: usize) -> Arc<QuadForm> {
        Arc::new(QuadForm::fa(n).unwrap())
    }

    /// `c + s·e₁e₂` over `f_s` with `c² − s² = 1`.
    fn hyperbolic(c: Rational, s: Rational) -> SpinElement {
        let f = fs(4);
        let e12 = Multivector::basis_product(&f, &[1, 2]).unwrap();
        SpinElement::new(Multivector::scalar(&f, c).try_add(&e12.scale(&s)).unwrap()).unwrap()
    }

    #[test]
    fn reduce_identity_and_coroot() {
        let one = SpinElement::identity(&fs(6));
        assert!(reduce_mod(&one, 5).unwrap().is_one());
        let h = coroot(&fs(6), 1, &int(3)).unwrap();
        let r = reduce_mod(&h, 5).unwrap();
        assert_eq!(r.terms().len(), 4);
        assert!(r.check_spin().is_ok());
        assert!(reduce_mod(&h, 4).is_err());
    }

    #[test]
    fn reduce_uses_inverse_of_denominator() {
        let t = BigInt::from(7);
        let gamma = crate::tori::TorusElem::new(t.clone(), rat(3, 4), rat(1, 4)).unwrap();
        let sp = crate::approx::torus_to_spin(&t, &gamma, &gamma, 20).unwrap();
        let r = reduce_mod(&sp.g1, 3).unwrap();
        let three = BigInt::from(3);
        for (b, c) in sp.g1.multivector().terms() {
            let d = mod_inverse(c.denom(), &three).unwrap();
            let want = crate::arith::modp(&(c.numer() * d), &three)
                .to_u64()
                .unwrap();
            assert_eq!(r.coeff(*b), want, "blade {b}");
        }
        assert_eq!(mod_inverse(&BigInt::from(4), &three), Some(BigInt::from(1)));
        assert!(r.check_spin().is_ok());
    }

    #[test]
    fn congruence_membership() {
        let ideal = |m: i64| OIdeal::new(BigInt::from(m)).unwrap();
        let one = SpinElement::identity(&fs(4));
        assert!(in_congruence_subgroup(&one, &ideal(3)));
        assert!(in_congruence_subgroup(&one, &ideal(1)));
        // (17/8)² − (15/8)² = 1; 15/8 ≡ 0 mod 3 but not mod 9.
        let g = hyperbolic(rat(17, 8), rat(15, 8));
        assert!(in_congruence_subgroup(&g, &ideal(3)));
        assert!(!in_congruence_subgroup(&g, &ideal(9)));
        assert!(in_congruence_subgroup(&g, &ideal(1)));
        // The half turn e₁e₂ over f_a.
        let fa4 = fa(4);
        let rot = SpinElement::new(Multivector::basis_product(&fa4, &[1, 2]).unwrap()).unwrap();
        assert!(!in_congruence_subgroup(&rot, &ideal(3)));
        assert!(!in_congruence_subgroup(&rot.negate(), &ideal(3)));
        // Huge moduli go through the rational path.
        let big = OIdeal::new(BigInt::from(3).pow(50)).unwrap();
        assert!(in_congruence_subgroup(&one, &big));
        assert!(!in_congruence_subgroup(&g, &big));
    }

    #[test]
    fn reduction_is_a_homomorphism() {
        let mut r = rng(17);
        let f = fs(6);
        for m in [3u64, 5, 7, 9] {
            for _ in 0..10 {
                let x = random_spin(&f, &mut r, 2).unwrap();
                let y = random_spin(&f, &mut r, 2).unwrap();
                let (Ok(rx), Ok(ry)) = (reduce_mod(&x, m), reduce_mod(&y, m)) else {
                    continue;
                };
                let rxy = reduce_mod(&x.mul(&y).unwrap(), m).unwrap();
                assert_eq!(rxy, rx.gp_mod(&ry).unwrap());
                let rev = ModMultivector::from_multivector(&x.multivector().reverse(), m).unwrap();
                assert_eq!(rev, rx.reverse());
            }
        }
    }

    #[test]
    fn filtration() {
        let mut r = rng(3);
        let f = fs(4);
        let ideals = [3i64, 5, 9, 15, 27, 45];
        let mut elems = vec![
            hyperbolic(rat(17, 8), rat(15, 8)),
            SpinElement::identity(&f),
        ];
        // (t + t⁻¹)/2 + (t − t⁻¹)/2·e₁e₂ with t = 2^k.
        for k in 1..8 {
            let t = rat(1 << k, 1);
            let ti = rat(1, 1 << k);
            elems.push(hyperbolic((&t + &ti) / int(2), (&t - &ti) / int(2)));
        }
        elems.push(random_spin(&f, &mut r, 1).unwrap());
        for g in &elems {
            for &i in &ideals {
                for &j in &ideals {
                    let ij = OIdeal::new(BigInt::from(i * j)).unwrap();
                    if in_congruence_subgroup(g, &ij) {
                        assert!(in_congruence_subgroup(
                            g,
                            &OIdeal::new(BigInt::from(i)).unwrap()
                        ));
                    }
                }
            }
        }
    }

    #[test]
    fn isometry_examples() {
        let p5 = OddPrime::new(BigInt::from(5)).unwrap();
        let m = isometry_mod(&p5, 1, 2).unwrap();
        assert_eq!(m.to_rows(), vec![vec![2, 0], vec![0, 1]]);
        // p = 7 in dimension 2: det(M)² ≡ −1 has no solution mod 7.
        let p7 = OddPrime::new(BigInt::from(7)).unwrap();
        assert!(isometry_mod(&p7, 2, 2).is_err());
        assert!((1..7u64).all(|d| d * d % 7 != 6));
        let m = isometry_mod(&p7, 2, 4).unwrap();
        assert_eq!(m.modulus(), 49);
    }

    #[test]
    fn isometry_dim20_entrywise() {
        for p in [3i64, 5, 7, 11] {
            let op = OddPrime::new(BigInt::from(p)).unwrap();
            for k in 1..=6u32 {
                let m = isometry_mod(&op, k, 20).unwrap();
                let pk = (p as u64).pow(k);
                // Independent entrywise check of Mᵀ M against ±1 on the diagonal.
                for i in 0..20 {
                    for j in 0..20 {
                        let mut acc: u128 = 0;
                        for r in 0..20 {
                            acc += m.get(r, i) as u128 * m.get(r, j) as u128;
                        }
                        let want = if i != j {
                            0
                        } else if i % 2 == 0 {
                            pk - 1
                        } else {
                            1
                        };
                        assert_eq!((acc % pk as u128) as u64, want, "p={p} k={k} ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn isometry_conjugates_spin_groups() {
        let p = OddPrime::new(BigInt::from(5)).unwrap();
        let m = isometry_mod(&p, 2, 4).unwrap();
        let d_s = form_residues(&QuadForm::fs(4).unwrap(), 25).unwrap();
        let minv = {
            // M⁻¹ = D_s⁻¹ Mᵀ since Mᵀ M = D_s.
            let mut t = m.transpose();
            for i in 0..4 {
                let di = inv_mod(d_s[i] as u64, 25).unwrap();
                for j in 0..4 {
                    t.set(i, j, mul_mod(di, t.get(i, j) as u64, 25) as u32);
                }
            }
            t
        };
        assert!(minv.mul(&m).is_identity());
        let mut r = rng(5);
        let f = fa(4);
        let mut checked = 0;
        while checked < 10 {
            let g = random_spin(&f, &mut r, 2).unwrap();
            let Ok(rg) = reduce_mod(&g, 25) else { continue };
            let a = rg.check_spin().unwrap();
            let b = minv.mul(&a).mul(&m);
            let ds = ModMatrix::diagonal(&[-1, 1, -1, 1], 25).unwrap();
            assert_eq!(b.gram(&d_s), ds);
            assert_eq!(b.det(), 1);
            checked += 1;
        }
    }

    #[test]
    fn sl3_examples() {
        let c = sl3_commutator(1, 1, 5).unwrap();
        assert!(sl3_commutator_identity(1, 1, 5).unwrap());
        assert_eq!(c.get(0, 2), 1);
        let c = sl3_commutator(2, 3, 7).unwrap();
        assert_eq!(c.get(0, 2), 6);
        assert!(sl3_commutator(0, 4, 9).unwrap().is_identity());
        assert!(sl3_commutator(1, 1, 4).is_err());
    }

    #[test]
    fn det_mod_prime_power() {
        let a = ModMatrix::from_rows(&[vec![3, 1], vec![0, 3]], 9).unwrap();
        assert_eq!(a.det(), 0);
        let b = ModMatrix::from_rows(&[vec![3, 1], vec![1, 0]], 9).unwrap();
        assert_eq!(b.det(), 8);
        let c = ModMatrix::from_rows(&[vec![2, 1, 0], vec![1, 1, 0], vec![0, 0, 4]], 7).unwrap();
        assert_eq!(c.det(), 4);
    }

    proptest! {
        #[test]
        fn sl3_identity_holds(t in -1000i64..1000, s in -1000i64..1000, h in 1u32..500) {
            let m = 2 * h + 1;
            prop_assert!(sl3_commutator_identity(t, s, m).unwrap());
        }

        #[test]
        fn det_is_multiplicative(a in proptest::collection::vec(0i64..27, 9), b in proptest::collection::vec(0i64..27, 9)) {
            let ra: Vec<Vec<i64>> = a.chunks(3).map(|r| r.to_vec()).collect();
            let rb: Vec<Vec<i64>> = b.chunks(3).map(|r| r.to_vec()).collect();
            let x = ModMatrix::from_rows(&ra, 27).unwrap();
            let y = ModMatrix::from_rows(&rb, 27).unwrap();
            prop_assert_eq!(x.mul(&y).det() as u64, mul_mod(x.det() as u64, y.det() as u64, 27));
        }
    }
}
