//! Approximation of units by norm-one torus points over `Z[1/2]`, the lift of
//! commuting torus pairs to `Spin(f_a)`, and the supporting searches.

pub mod forms;
mod spin_pair;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    factor, is_p_unit, is_perfect_square, legendre, rational_to_string, reduce_rational,
    symmetric_residue, val_nonzero, OIdeal, OddPrime, Rational,
};
use crate::error::{Error, Result};
use crate::tori::{
    rho_apply, torus_val, trivialize, weak_approx_torus, Constraint, TorusElem, TorusJson,
    Trivialization, TrivializationJson,
};

pub use forms::{
    class_number, field_discriminant, find_primes_legendre, foya_search, prime_cap,
    principal_witness, PrimeCondition,
};
pub use spin_pair::{torus_to_spin, PrimeRecord, SpinPair, SpinPairJson, MIN_DIM};

/// `ρ_p(z_element) ≡ rhs (mod p^k)`, with `lhs` the computed residue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Congruence {
    pub element: usize,
    pub p: String,
    pub k: u32,
    pub lhs: String,
    pub rhs: String,
}

/// Support primes of the second torus element split by whether `ρ_q(z₂)` is
/// a square in `Q_q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub square: Vec<String>,
    pub nonsquare: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxCertificate {
    pub kind: String,
    pub inputs: Vec<String>,
    pub ideal: String,
    pub t: String,
    pub trivializations: Vec<TrivializationJson>,
    pub torus: Vec<TorusJson>,
    pub congruences: Vec<Congruence>,
    pub support: Vec<Vec<String>>,
    pub overlaps: Vec<String>,
    pub partition: Option<Partition>,
}

/// A certificate together with the objects it describes.
#[derive(Debug, Clone)]
pub struct Approximation {
    pub t: BigInt,
    pub z: Vec<TorusElem>,
    pub trivializations: Vec<Trivialization>,
    pub certificate: ApproxCertificate,
}

fn unit_check(a: &Rational, primes: &[(OddPrime, u32)]) -> Result<()> {
    for (p, _) in primes {
        if !is_p_unit(a, p.value()) {
            return Err(Error::Precondition(format!(
                "{} is not a unit at {p}",
                rational_to_string(a)
            )));
        }
    }
    Ok(())
}

/// Smallest positive non-square `t ≡ −1 (mod m)`.
pub fn default_parameter(m: &BigInt) -> BigInt {
    let mut t = m - 1u32;
    while !t.is_positive() || is_perfect_square(&t) {
        t += m;
    }
    t
}

fn prime_strings(ps: &[BigInt]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn congruence(
    element: usize,
    z: &TorusElem,
    triv: &Trivialization,
    a: &Rational,
) -> Result<Congruence> {
    let lhs = rho_apply(z, triv)?;
    let rhs = reduce_rational(a, &triv.modulus())?;
    if lhs != rhs {
        return Err(Error::Verification(format!(
            "ρ_{}(z) = {lhs} but target is {rhs} mod {}",
            triv.p(),
            triv.modulus()
        )));
    }
    Ok(Congruence {
        element,
        p: triv.p().to_string(),
        k: triv.precision(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    })
}

/// `z ∈ T_t(O)` with `ρ_P(z) ≡ a (mod P^{val_P I})` at every `P | I`.
pub fn approx_unit(a: &Rational, ideal: &OIdeal) -> Result<Approximation> {
    let primes = ideal.prime_powers();
    unit_check(a, &primes)?;
    let one = Rational::one();
    let m = ideal.generator();

    let (t, z) = if a.is_one() || *a == -&one || ideal.is_unit() {
        let t = default_parameter(&m);
        let x = if *a == -&one && !ideal.is_unit() {
            -one.clone()
        } else {
            one.clone()
        };
        (t.clone(), TorusElem::new(t, x, Rational::zero())?)
    } else {
        let (x, k, t) = unit_parameters(a, &primes)?;
        let den = Rational::from_integer(BigInt::one() << k);
        let z = TorusElem::new(
            t.clone(),
            Rational::from_integer(x) / &den,
            one.clone() / den,
        )?;
        (t, z)
    };

    let mut trivs = Vec::new();
    let mut congruences = Vec::new();
    for (p, e) in &primes {
        let triv = trivialize(&t, p, *e)?.ok_or_else(|| Error::NotSplit {
            p: p.to_string(),
            t: t.to_string(),
            kind: "inert",
        })?;
        // The sign of ζ is the one with ζ ≡ (a − a⁻¹)/2 after scaling.
        let want = reduce_rational(a, &triv.modulus())?;
        let triv = if rho_apply(&z, &triv)? == want {
            triv
        } else {
            triv.conjugate()
        };
        congruences.push(congruence(0, &z, &triv, a)?);
        trivs.push(triv);
    }
    let certificate = ApproxCertificate {
        kind: "unit".into(),
        inputs: vec![rational_to_string(a)],
        ideal: m.to_string(),
        t: t.to_string(),
        trivializations: trivs.iter().map(|tr| tr.to_json()).collect(),
        torus: vec![z.to_json()],
        congruences,
        support: vec![prime_strings(&z.denominator_primes())],
        overlaps: Vec::new(),
        partition: None,
    };
    Ok(Approximation {
        t,
        z: vec![z],
        trivializations: trivs,
        certificate,
    })
}

/// `(x, k, t)` with `x ≡ 2^k(a + a⁻¹)/2 (mod M)`, `|x| < 2^k` and
/// `t = 4^k − x²` not a square, where `M = ∏ p^{2N_p}` is fine enough that
/// the unit part of `−t` at each `p` is a square.
fn unit_parameters(a: &Rational, primes: &[(OddPrime, u32)]) -> Result<(BigInt, u64, BigInt)> {
    let one = Rational::one();
    let mut modulus = BigInt::one();
    for (p, e) in primes {
        let lo = val_nonzero(&(a - &one), p.value()).max(val_nonzero(&(a + &one), p.value()));
        let n = lo.max(*e as i64) + 1;
        modulus *= p.pow(2 * n as u32);
    }
    let half_trace = (a + a.recip()) / Rational::from_integer(2.into());
    let k0 = modulus.bits();
    for k in k0..k0 + 64 {
        let two_k = BigInt::one() << k;
        let scaled = &half_trace * Rational::from_integer(two_k.clone());
        let x0 = symmetric_residue(&reduce_rational(&scaled, &modulus)?, &modulus);
        for x in [x0.clone(), &x0 - &modulus, &x0 + &modulus] {
            if x.abs() >= two_k {
                continue;
            }
            let t = &two_k * &two_k - &x * &x;
            if !is_perfect_square(&t) {
                return Ok((x, k, t));
            }
        }
    }
    Err(Error::SearchFailed(
        "no non-square 4^k − x² within 64 doublings".into(),
    ))
}

/// Two torus points `z₁, z₂` over a common `t` with `ρ_P(zᵢ) ≡ aᵢ` at every
/// `P | I`, such that `𝓟(I)`, the supports `𝓡₁, 𝓡₂`, and `𝓟(t)` are
/// pairwise disjoint.
pub fn approx_pair(
    a1: &Rational,
    a2: &Rational,
    ideal: &OIdeal,
    t_override: Option<BigInt>,
) -> Result<Approximation> {
    if a1.is_zero() || a2.is_zero() {
        return Err(Error::Precondition("targets must be nonzero".into()));
    }
    let primes = ideal.prime_powers();
    unit_check(a1, &primes)?;
    unit_check(a2, &primes)?;
    let m = ideal.generator();
    let t = match t_override {
        Some(t) => {
            if !t.is_positive() || !t.gcd(&m).is_one() {
                return Err(Error::Precondition(format!(
                    "t = {t} must be positive and prime to {m}"
                )));
            }
            t
        }
        None => default_parameter(&m),
    };
    let mut trivs = Vec::new();
    for (p, e) in &primes {
        trivs.push(trivialize(&t, p, *e)?.ok_or_else(|| Error::NotSplit {
            p: p.to_string(),
            t: t.to_string(),
            kind: "inert",
        })?);
    }
    let constraints = |a: &Rational| -> Vec<Constraint> {
        trivs
            .iter()
            .map(|tr| Constraint {
                triv: tr.clone(),
                target: a.clone(),
                precision: tr.precision(),
            })
            .collect()
    };
    let mut t_odd = t.clone();
    while t_odd.is_even() {
        t_odd >>= 1;
    }
    let w1 = weak_approx_torus(&t, &constraints(a1), &[t_odd.clone()])?;
    let r1: BigInt = w1.support.iter().product();
    let w2 = weak_approx_torus(&t, &constraints(a2), &[t_odd.clone(), r1])?;

    let t_primes: Vec<BigInt> = if t_odd.is_one() {
        Vec::new()
    } else {
        factor(&t_odd).into_keys().collect()
    };
    let i_primes: Vec<BigInt> = primes.iter().map(|(p, _)| p.value().clone()).collect();
    let sets = [&i_primes, &w1.support, &w2.support, &t_primes];
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let a: BTreeSet<_> = sets[i].iter().collect();
            if let Some(q) = sets[j].iter().find(|q| a.contains(q)) {
                return Err(Error::Verification(format!(
                    "prime {q} lies in two of 𝓟(I), 𝓡₁, 𝓡₂, 𝓟(t)"
                )));
            }
        }
    }

    let mut partition = Partition {
        square: Vec::new(),
        nonsquare: Vec::new(),
    };
    for q in &w2.support {
        let qp = OddPrime::new(q.clone())?;
        if rho_is_square(&w2.z, &qp)? {
            partition.square.push(q.to_string());
        } else {
            partition.nonsquare.push(q.to_string());
        }
    }

    let mut congruences = Vec::new();
    for tr in &trivs {
        congruences.push(congruence(0, &w1.z, tr, a1)?);
        congruences.push(congruence(1, &w2.z, tr, a2)?);
    }
    let overlaps: BTreeSet<BigInt> = w1.overlaps.iter().chain(&w2.overlaps).cloned().collect();
    let certificate = ApproxCertificate {
        kind: "pair".into(),
        inputs: vec![rational_to_string(a1), rational_to_string(a2)],
        ideal: m.to_string(),
        t: t.to_string(),
        trivializations: trivs.iter().map(|tr| tr.to_json()).collect(),
        torus: vec![w1.z.to_json(), w2.z.to_json()],
        congruences,
        support: vec![prime_strings(&w1.support), prime_strings(&w2.support)],
        overlaps: overlaps.iter().map(|q| q.to_string()).collect(),
        partition: Some(partition),
    };
    Ok(Approximation {
        t,
        z: vec![w1.z, w2.z],
        trivializations: trivs,
        certificate,
    })
}

/// Whether `ρ_q(z)` is a square in `Q_q` at a split prime `q ∤ t` where `z` is
/// not integral. Both embeddings agree, since they give `ρ` and `ρ⁻¹`.
pub fn rho_is_square(z: &TorusElem, q: &OddPrime) -> Result<bool> {
    let e = -torus_val(z, q);
    if e <= 0 {
        return Err(Error::Precondition(format!("z is integral at {q}")));
    }
    let triv = trivialize(z.t(), q, 2 * e as u32 + 1)?
        .ok_or_else(|| Error::Precondition(format!("{q} is not split")))?;
    if triv.zeta_val() != 0 {
        return Err(Error::Precondition(format!("{q} divides t")));
    }
    let m = triv.modulus();
    let scale = Rational::from_integer(q.pow(e as u32));
    let x = reduce_rational(&(z.x() * &scale), &m)?;
    let y = reduce_rational(&(z.y() * &scale), &m)?;
    let zeta = triv.zeta();
    // q^e(x ± yζ) is a unit at exactly one sign.
    let mut r = (&x + &y * &zeta).mod_floor(&m);
    if r.is_multiple_of(q.value()) {
        r = (&x - &y * &zeta).mod_floor(&m);
    }
    Ok(e % 2 == 0 && legendre(&r, q.value()) == 1)
}
