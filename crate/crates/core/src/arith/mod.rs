//! Exact arithmetic over `Q` and `O = Z[1/2]`.
//!
//! Rationals are `num_rational::BigRational`. Ideals of `O` are represented by
//! their positive odd generator, primes of `O` by odd rational primes.

mod four_squares;
mod hilbert;
mod primes;

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use four_squares::four_squares;
pub use hilbert::{hilbert_symbol, Place};
pub use primes::{factor, is_prime, next_prime, squarefree_part};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(BigInt),
    #[error("{0} is not a positive odd integer")]
    NotOddPositive(BigInt),
    #[error("{a} is divisible by {p}; factor out the p-part first")]
    DivisibleByPrime { a: BigInt, p: BigInt },
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(BigInt, BigInt),
    #[error("modulus {0} must be odd and positive")]
    BadModulus(BigInt),
    #[error("zero argument")]
    Zero,
    #[error("{0} is not invertible modulo {1}")]
    NotInvertible(String, BigInt),
    #[error("cannot parse {0:?} as a rational number")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, ArithError>;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-2/5"` or `"10/4"` (reduced on construction).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || ArithError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Canonical `"num/den"` rendering used by every JSON artifact.
pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Exact square root of a rational, if it is a square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = int_sqrt_exact(r.numer())?;
    let d = int_sqrt_exact(r.denom())?;
    Some(Rational::new(n, d))
}

pub fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    int_sqrt_exact(n).is_some()
}

/// `r` is a square in `Q` (zero counts as a square).
pub fn is_rational_square(r: &Rational) -> bool {
    rational_sqrt(r).is_some()
}

/// Least nonnegative residue of `a` modulo `m > 0`.
pub fn modp(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Reduces a rational with denominator prime to `m` into `Z/m`.
pub fn reduce_rational(r: &Rational, m: &BigInt) -> Result<BigInt> {
    let inv = mod_inverse(r.denom(), m)
        .ok_or_else(|| ArithError::NotInvertible(rational_to_string(r), m.clone()))?;
    Ok((r.numer() * inv).mod_floor(m))
}

/// Legendre symbol `(a | p)` for an odd prime `p`; returns 0 when `p | a`.
pub fn legendre(a: &BigInt, p: &BigInt) -> i8 {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return 0;
    }
    let e = (p - 1u32) >> 1;
    if a.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

/// A nonzero prime ideal of `O`, i.e. an odd rational prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct OddPrime(BigInt);

impl OddPrime {
    pub fn new(p: BigInt) -> Result<Self> {
        if p < BigInt::from(3) || p.is_even() || !is_prime(&p) {
            return Err(ArithError::NotOddPrime(p));
        }
        Ok(OddPrime(p))
    }

    pub fn from_u64(p: u64) -> Result<Self> {
        Self::new(BigInt::from(p))
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }

    pub fn pow(&self, k: u32) -> BigInt {
        num_traits::pow(self.0.clone(), k as usize)
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<String> for OddPrime {
    type Error = ArithError;
    fn try_from(s: String) -> Result<Self> {
        let p: BigInt = s.parse().map_err(|_| ArithError::Parse(s.clone()))?;
        OddPrime::new(p)
    }
}

impl From<OddPrime> for String {
    fn from(p: OddPrime) -> String {
        p.0.to_string()
    }
}

/// `Z ∪ {∞}` with `∞` above every integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValOrInf {
    Finite(i64),
    Infinite,
}

impl ValOrInf {
    pub fn finite(self) -> Option<i64> {
        match self {
            ValOrInf::Finite(v) => Some(v),
            ValOrInf::Infinite => None,
        }
    }
}

impl std::ops::Add for ValOrInf {
    type Output = ValOrInf;
    fn add(self, rhs: ValOrInf) -> ValOrInf {
        match (self, rhs) {
            (ValOrInf::Finite(a), ValOrInf::Finite(b)) => ValOrInf::Finite(a + b),
            _ => ValOrInf::Infinite,
        }
    }
}

/// Multiplicity of `p` in a nonzero integer.
pub fn int_val(n: &BigInt, p: &BigInt) -> u64 {
    debug_assert!(!n.is_zero());
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// The `p`-adic valuation of a rational.
pub fn val(r: &Rational, p: &OddPrime) -> ValOrInf {
    if r.is_zero() {
        return ValOrInf::Infinite;
    }
    let up = int_val(r.numer(), p.value()) as i64;
    let down = int_val(r.denom(), p.value()) as i64;
    ValOrInf::Finite(up - down)
}

/// Finite valuation for a nonzero rational and a raw prime.
pub fn val_nonzero(r: &Rational, p: &BigInt) -> i64 {
    int_val(r.numer(), p) as i64 - int_val(r.denom(), p) as i64
}

/// Canonical square root of `a` modulo `p^k`: the root in `(0, p^k/2)`.
///
/// Tonelli–Shanks modulo `p`, then Newton/Hensel lifting. `Ok(None)` means `a`
/// is a non-residue.
pub fn sqrt_mod(a: &BigInt, p: &OddPrime, k: u32) -> Result<Option<BigInt>> {
    let pv = p.value();
    if a.mod_floor(pv).is_zero() {
        return Err(ArithError::DivisibleByPrime {
            a: a.clone(),
            p: pv.clone(),
        });
    }
    let Some(r) = tonelli_shanks(a, pv) else {
        return Ok(None);
    };
    let root = hensel_lift_sqrt(a, pv, r, 1, k.max(1));
    let pk = p.pow(k.max(1));
    let other = &pk - &root;
    Ok(Some(root.min(other)))
}

/// Lifts a root `r` of `x² ≡ a (mod p^from)` (with `p ∤ r`) to precision `p^to`.
/// The lifted root reduces to `r` modulo `p^from`.
pub fn hensel_lift_sqrt(a: &BigInt, p: &BigInt, r: BigInt, from: u32, to: u32) -> BigInt {
    let mut prec = from.max(1);
    let mut r = r;
    while prec < to {
        prec = (2 * prec).min(to);
        let m = num_traits::pow(p.clone(), prec as usize);
        let two_r = (&r * 2u32).mod_floor(&m);
        let inv = mod_inverse(&two_r, &m).expect("2r is a unit when p does not divide r");
        let f = (&r * &r - a).mod_floor(&m);
        r = (&r - f * inv).mod_floor(&m);
    }
    let m = num_traits::pow(p.clone(), to as usize);
    r.mod_floor(&m)
}

fn tonelli_shanks(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(p);
    if legendre(&a, p) != 1 {
        return None;
    }
    let one = BigInt::one();
    let pm1: BigInt = p - 1u32;
    let mut q = pm1.clone();
    let mut s = 0u32;
    while q.is_even() {
        q >>= 1;
        s += 1;
    }
    if s == 1 {
        return Some(a.modpow(&((p + 1u32) >> 2), p));
    }
    let mut z = BigInt::from(2);
    while legendre(&z, p) != -1 {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + 1u32) >> 1), p);
    while t != one {
        let mut i = 0u32;
        let mut t2 = t.clone();
        while t2 != one {
            t2 = (&t2 * &t2).mod_floor(p);
            i += 1;
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1) as usize), p);
        m = i;
        c = (&b * &b).mod_floor(p);
        t = (&t * &c).mod_floor(p);
        r = (&r * &b).mod_floor(p);
    }
    Some(r)
}

/// Chinese remaindering for pairwise-coprime odd moduli; least nonnegative result.
pub fn crt(pairs: &[(BigInt, BigInt)]) -> Result<BigInt> {
    let mut acc = BigInt::zero();
    let mut modulus = BigInt::one();
    for (i, (_, m)) in pairs.iter().enumerate() {
        if !m.is_positive() || m.is_even() {
            return Err(ArithError::BadModulus(m.clone()));
        }
        for (_, m2) in &pairs[..i] {
            if !m.gcd(m2).is_one() {
                return Err(ArithError::NotCoprime(m2.clone(), m.clone()));
            }
        }
    }
    for (r, m) in pairs {
        // acc + modulus * s ≡ r (mod m)
        let inv = mod_inverse(&modulus, m).expect("coprime moduli");
        let s = ((r - &acc) * inv).mod_floor(m);
        acc += &modulus * s;
        modulus *= m;
        acc = acc.mod_floor(&modulus);
    }
    Ok(acc)
}

/// A nonzero ideal `mO` of `O = Z[1/2]`, stored as its positive odd generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct OIdeal(BigUint);

impl OIdeal {
    pub fn new(m: BigInt) -> Result<Self> {
        if !m.is_positive() || m.is_even() {
            return Err(ArithError::NotOddPositive(m));
        }
        Ok(OIdeal(m.to_biguint().expect("positive")))
    }

    /// The ideal generated by a nonzero integer: powers of 2 are units.
    pub fn generated_by(n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Err(ArithError::Zero);
        }
        let mut m = n.abs();
        while m.is_even() {
            m >>= 1;
        }
        Self::new(m)
    }

    pub fn unit() -> Self {
        OIdeal(BigUint::one())
    }

    pub fn generator(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.0.clone())
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_one()
    }

    pub fn product(&self, other: &OIdeal) -> OIdeal {
        OIdeal(&self.0 * &other.0)
    }

    pub fn sum(&self, other: &OIdeal) -> OIdeal {
        OIdeal(self.0.gcd(&other.0))
    }

    pub fn intersection(&self, other: &OIdeal) -> OIdeal {
        OIdeal(self.0.lcm(&other.0))
    }

    /// `I^k`; `k = 0` gives the unit ideal.
    pub fn power(&self, k: u32) -> OIdeal {
        OIdeal(num_traits::pow(self.0.clone(), k as usize))
    }

    pub fn val(&self, p: &OddPrime) -> u64 {
        int_val(&self.generator(), p.value())
    }

    pub fn contains(&self, r: &Rational) -> bool {
        r.is_zero() || {
            let m = self.generator();
            let mut d = r.denom().clone();
            while d.is_even() {
                d >>= 1;
            }
            d.is_one() && r.numer().is_multiple_of(&m)
        }
    }

    /// Primes dividing the ideal with multiplicities, ascending.
    pub fn prime_powers(&self) -> Vec<(OddPrime, u32)> {
        factor(&self.generator())
            .into_iter()
            .map(|(p, e)| (OddPrime(p), e))
            .collect()
    }
}

impl fmt::Display for OIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0)
    }
}

impl TryFrom<String> for OIdeal {
    type Error = ArithError;
    fn try_from(s: String) -> Result<Self> {
        let m: BigInt = s.parse().map_err(|_| ArithError::Parse(s.clone()))?;
        OIdeal::new(m)
    }
}

impl From<OIdeal> for String {
    fn from(i: OIdeal) -> String {
        i.0.to_string()
    }
}

/// `p`-unit test for a nonzero rational.
pub fn is_p_unit(r: &Rational, p: &BigInt) -> bool {
    !r.is_zero() && !r.numer().is_multiple_of(p) && !r.denom().is_multiple_of(p)
}

/// Smallest representative of `a mod m` in `(-m/2, m/2]`.
pub fn symmetric_residue(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if &r * 2u32 > *m {
        r - m
    } else {
        r
    }
}

pub fn to_u64(n: &BigInt) -> Option<u64> {
    n.to_u64()
}
