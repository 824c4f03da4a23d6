//! Norm-one tori `T_t = {x + y√−t : x² + t y² = 1}` over `Q`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    crt, factor, hensel_lift_sqrt, int_val, is_p_unit, legendre, mod_inverse, parse_rational,
    rational_to_string, reduce_rational, sqrt_mod, symmetric_residue, val, val_nonzero, OddPrime,
    Rational, ValOrInf,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusElem {
    t: BigInt,
    x: Rational,
    y: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusJson {
    pub t: String,
    pub x: String,
    pub y: String,
}

impl TorusElem {
    pub fn new(t: BigInt, x: Rational, y: Rational) -> Result<Self> {
        check_parameter(&t)?;
        let norm = &x * &x + Rational::from_integer(t.clone()) * &y * &y;
        if !norm.is_one() {
            return Err(Error::Precondition(format!(
                "x² + {t}y² = {} for x = {}, y = {}",
                rational_to_string(&norm),
                rational_to_string(&x),
                rational_to_string(&y)
            )));
        }
        Ok(TorusElem { t, x, y })
    }

    pub fn identity(t: BigInt) -> Self {
        TorusElem {
            t,
            x: Rational::one(),
            y: Rational::zero(),
        }
    }

    pub fn t(&self) -> &BigInt {
        &self.t
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    pub fn mul(&self, other: &TorusElem) -> Result<TorusElem> {
        if self.t != other.t {
            return Err(Error::Precondition(format!(
                "torus parameters differ: {} vs {}",
                self.t, other.t
            )));
        }
        let t = Rational::from_integer(self.t.clone());
        Ok(TorusElem {
            t: self.t.clone(),
            x: &self.x * &other.x - t * &self.y * &other.y,
            y: &self.x * &other.y + &other.x * &self.y,
        })
    }

    /// Conjugation, which is the inverse on the norm-one torus.
    pub fn inv(&self) -> TorusElem {
        TorusElem {
            t: self.t.clone(),
            x: self.x.clone(),
            y: -&self.y,
        }
    }

    pub fn pow(&self, n: i64) -> TorusElem {
        let mut base = if n < 0 { self.inv() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = TorusElem::identity(self.t.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same t");
            }
            base = base.mul(&base).expect("same t");
            e >>= 1;
        }
        acc
    }

    /// Both coordinates are `p`-integral.
    pub fn is_integral_at(&self, p: &BigInt) -> bool {
        !self.x.denom().is_multiple_of(p) && !self.y.denom().is_multiple_of(p)
    }

    /// Integrality at `p` in the maximal order: with `p^e ∥ t`, the element is
    /// `x + (y p^⌊e/2⌋)·√(−t/p^{2⌊e/2⌋})`, so `x` and `y p^⌊e/2⌋` must be `p`-integral.
    pub fn is_maximal_integral_at(&self, p: &BigInt) -> bool {
        let f = int_val(&self.t, p) / 2;
        let scaled = &self.y * Rational::from_integer(num_traits::pow(p.clone(), f as usize));
        !self.x.denom().is_multiple_of(p) && !scaled.denom().is_multiple_of(p)
    }

    /// Odd primes dividing a coordinate denominator, ascending.
    pub fn denominator_primes(&self) -> Vec<BigInt> {
        let mut d = self.x.denom().lcm(self.y.denom());
        while d.is_even() {
            d >>= 1;
        }
        if d.is_one() {
            return Vec::new();
        }
        factor(&d).into_keys().collect()
    }

    pub fn to_json(&self) -> TorusJson {
        TorusJson {
            t: self.t.to_string(),
            x: rational_to_string(&self.x),
            y: rational_to_string(&self.y),
        }
    }

    pub fn from_json(j: &TorusJson) -> Result<Self> {
        let t: BigInt =
            j.t.parse()
                .map_err(|_| Error::Parse(format!("torus parameter {:?}", j.t)))?;
        TorusElem::new(t, parse_rational(&j.x)?, parse_rational(&j.y)?)
    }
}

pub fn torus_mul(z1: &TorusElem, z2: &TorusElem) -> Result<TorusElem> {
    z1.mul(z2)
}

pub fn torus_inv(z: &TorusElem) -> TorusElem {
    z.inv()
}

fn check_parameter(t: &BigInt) -> Result<()> {
    if !t.is_positive() {
        return Err(Error::Precondition(format!(
            "torus parameter {t} must be positive"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

impl Splitting {
    pub fn as_str(self) -> &'static str {
        match self {
            Splitting::Split => "split",
            Splitting::Inert => "inert",
            Splitting::Ramified => "ramified",
        }
    }
}

/// How `p` decomposes in `Q(√−t)`. Only the squarefree part of `t` matters.
pub fn splitting(t: &BigInt, p: &OddPrime) -> Splitting {
    let e = int_val(t, p.value());
    if e % 2 == 1 {
        return Splitting::Ramified;
    }
    let unit = t / p.pow(e as u32);
    if legendre(&-unit, p.value()) == 1 {
        Splitting::Split
    } else {
        Splitting::Inert
    }
}

/// A square root `ζ = p^v w` of `−t` in `Z_p`, known modulo `p^k`, where
/// `w` is a unit and `p^{2v}` is the exact power of `p` in `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trivialization {
    t: BigInt,
    p: OddPrime,
    k: u32,
    v: u32,
    w: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivializationJson {
    pub t: String,
    pub p: String,
    pub k: u32,
    pub v: u32,
    pub w: String,
    pub zeta: String,
}

impl Trivialization {
    pub fn t(&self) -> &BigInt {
        &self.t
    }

    pub fn p(&self) -> &OddPrime {
        &self.p
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> BigInt {
        self.p.pow(self.k)
    }

    /// Valuation of `ζ`.
    pub fn zeta_val(&self) -> u32 {
        self.v
    }

    pub fn zeta(&self) -> BigInt {
        (self.p.pow(self.v) * &self.w).mod_floor(&self.modulus())
    }

    /// The other embedding, `−ζ`.
    pub fn conjugate(&self) -> Trivialization {
        Trivialization {
            w: (-&self.w).mod_floor(&self.modulus()),
            ..self.clone()
        }
    }

    /// The same root to precision `k`: Hensel lifting up, reduction down.
    pub fn at_precision(&self, k: u32) -> Result<Trivialization> {
        if k == 0 {
            return Err(Error::Precondition("precision must be positive".into()));
        }
        let unit = -(&self.t / self.p.pow(2 * self.v));
        let w = if k > self.k {
            hensel_lift_sqrt(&unit, self.p.value(), self.w.clone(), self.k, k)
        } else {
            self.w.mod_floor(&self.p.pow(k))
        };
        Ok(Trivialization {
            k,
            w,
            ..self.clone()
        })
    }

    pub fn to_json(&self) -> TrivializationJson {
        TrivializationJson {
            t: self.t.to_string(),
            p: self.p.to_string(),
            k: self.k,
            v: self.v,
            w: self.w.to_string(),
            zeta: self.zeta().to_string(),
        }
    }
}

/// The canonical trivialization at `p`, or `None` when `p` is inert.
///
/// `p | t` is accepted when `p` still splits, i.e. `t = p^{2v}·u` with `−u` a
/// square mod `p`; an odd power of `p` in `t` is the ramified case and errors.
pub fn trivialize(t: &BigInt, p: &OddPrime, k: u32) -> Result<Option<Trivialization>> {
    check_parameter(t)?;
    if k == 0 {
        return Err(Error::Precondition("precision must be positive".into()));
    }
    let e = int_val(t, p.value());
    if e % 2 == 1 {
        return Err(Error::NotSplit {
            p: p.to_string(),
            t: t.to_string(),
            kind: "ramified",
        });
    }
    let v = (e / 2) as u32;
    let unit = t / p.pow(2 * v);
    let Some(w) = sqrt_mod(&-unit, p, k)? else {
        return Ok(None);
    };
    Ok(Some(Trivialization {
        t: t.clone(),
        p: p.clone(),
        k,
        v,
        w,
    }))
}

/// `x + yζ mod p^k`.
pub fn rho_apply(z: &TorusElem, triv: &Trivialization) -> Result<BigInt> {
    if z.t != triv.t {
        return Err(Error::Precondition(format!(
            "torus parameter {} does not match trivialization for {}",
            z.t, triv.t
        )));
    }
    let p = triv.p.value();
    let y_scaled = &z.y * Rational::from_integer(triv.p.pow(triv.v));
    if z.x.denom().is_multiple_of(p) || y_scaled.denom().is_multiple_of(p) {
        return Err(Error::NonIntegral {
            p: triv.p.to_string(),
            torus_val: torus_val(z, &triv.p),
        });
    }
    let m = triv.modulus();
    let x = reduce_rational(&z.x, &m)?;
    let y = reduce_rational(&y_scaled, &m)?;
    Ok((x + y * &triv.w).mod_floor(&m))
}

/// `min(val_𝔭 z, −val_𝔭 z)` for a prime `𝔭 | p`; zero unless `p` splits.
pub fn torus_val(z: &TorusElem, p: &OddPrime) -> i64 {
    if splitting(&z.t, p) != Splitting::Split {
        return 0;
    }
    // One of x ± yζ has valuation min(val x, val yζ) and the other its negative.
    let v = (int_val(&z.t, p.value()) / 2) as i64;
    let vx = val(&z.x, p);
    let vy = val(&z.y, p) + ValOrInf::Finite(v);
    let m = vx.min(vy).finite().unwrap_or(0);
    m.min(0)
}

/// `((1 − tu²)/(1 + tu²), 2u/(1 + tu²))`.
pub fn conic_point(t: &BigInt, u: &Rational) -> Result<TorusElem> {
    check_parameter(t)?;
    let tu2 = Rational::from_integer(t.clone()) * u * u;
    let den = Rational::one() + &tu2;
    if den.is_zero() {
        return Err(Error::Precondition("1 + t·u² = 0".into()));
    }
    let two = Rational::from_integer(2.into());
    Ok(TorusElem {
        t: t.clone(),
        x: (Rational::one() - tu2) / &den,
        y: two * u / den,
    })
}

/// Inverse of [`conic_point`]; `None` at `(−1, 0)`.
pub fn conic_parameter(z: &TorusElem) -> Option<Rational> {
    let d = Rational::one() + &z.x;
    (!d.is_zero()).then(|| &z.y / d)
}

/// `ρ_p(z) ≡ target (mod p^precision)`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub triv: Trivialization,
    pub target: Rational,
    pub precision: u32,
}

#[derive(Debug, Clone)]
pub struct WeakApprox {
    pub z: TorusElem,
    /// Primes where `z` is not integral (`torus_val < 0`), ascending.
    pub support: Vec<BigInt>,
    /// Support primes that also divide `t`.
    pub overlaps: Vec<BigInt>,
}

/// A rational point of `T_t` meeting every congruence, found by CRT on the
/// conic parameter. `z` is also kept integral at each modulus in
/// `integral_at`, which must be odd and prime to the constrained primes.
pub fn weak_approx_torus(
    t: &BigInt,
    constraints: &[Constraint],
    integral_at: &[BigInt],
) -> Result<WeakApprox> {
    check_parameter(t)?;
    let mut seen = BTreeSet::new();
    let mut data = Vec::new();
    for c in constraints {
        let p = c.triv.p.value().clone();
        if c.triv.t != *t {
            return Err(Error::Precondition(format!(
                "trivialization at {p} is for t = {}",
                c.triv.t
            )));
        }
        if !seen.insert(p.clone()) {
            return Err(Error::Precondition(format!("prime {p} constrained twice")));
        }
        if c.triv.v != 0 {
            return Err(Error::Precondition(format!(
                "weak approximation needs {p} ∤ t"
            )));
        }
        if !is_p_unit(&c.target, &p) {
            return Err(Error::Precondition(format!(
                "target {} is not a {p}-unit",
                rational_to_string(&c.target)
            )));
        }
        let triv = c.triv.at_precision(c.precision)?;
        let pm = triv.modulus();
        // a = −1 is the excluded point of the parametrization.
        let mut a = c.target.clone();
        if a == -Rational::one() {
            a *= Rational::from_integer(BigInt::one() + &pm);
        }
        let e = val_nonzero(&(&a + Rational::one()), &p) as u32;
        data.push((triv, a, e));
    }
    let d: BigInt = data.iter().map(|(tr, _, e)| tr.p.pow(*e)).product();

    let mut pairs = Vec::new();
    for (triv, a, e) in &data {
        let pm = triv.modulus();
        let pe = triv.p.pow(*e);
        let a1 = (a + Rational::one()) / Rational::from_integer(pe.clone());
        let lhs = (a - Rational::one()) * Rational::from_integer(&d / &pe) / a1;
        let zeta_inv = mod_inverse(&triv.w, &pm).expect("unit root");
        pairs.push(((reduce_rational(&lhs, &pm)? * zeta_inv).mod_floor(&pm), pm));
    }
    for q in integral_at {
        let q = q.abs();
        if !q.is_one() {
            pairs.push((BigInt::zero(), q));
        }
    }
    let modulus: BigInt = pairs.iter().map(|(_, m)| m.clone()).product();
    let n = symmetric_residue(&crt(&pairs)?, &modulus);
    let u = Rational::new(n, d);
    let z = conic_point(t, &u)?;

    for (c, (triv, _, _)) in constraints.iter().zip(&data) {
        let got = rho_apply(&z, triv)?;
        let want = reduce_rational(&c.target, &triv.modulus())?;
        if got != want {
            return Err(Error::Verification(format!(
                "ρ_{}(z) = {got}, expected {want} mod {}",
                triv.p,
                triv.modulus()
            )));
        }
    }
    for q in integral_at {
        if !q.is_one() && !z.is_integral_at(q) {
            return Err(Error::Verification(format!("z not integral at {q}")));
        }
    }
    let support = z.denominator_primes();
    let overlaps = support
        .iter()
        .filter(|q| t.is_multiple_of(q))
        .cloned()
        .collect();
    Ok(WeakApprox {
        z,
        support,
        overlaps,
    })
}
