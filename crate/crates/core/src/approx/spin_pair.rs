//! Commuting pairs in `Spin(f_a)` built from two points of `T_t(Q)`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{factor, four_squares, OddPrime, Rational};
use crate::clifford::{Multivector, QuadForm, Vector};
use crate::error::{Error, Result};
use crate::json::format_float;
use crate::spin::{separation, SpinElement, SpinElementJson};
use crate::tori::{splitting, torus_val, Splitting, TorusElem, TorusJson};

pub const MIN_DIM: usize = 20;

/// Splitting type and maximal-order integrality of both torus factors at one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRecord {
    pub p: String,
    pub splitting: Splitting,
    pub torus_val: [i64; 2],
    pub integral: [bool; 2],
}

#[derive(Debug, Clone)]
pub struct SpinPair {
    pub t: BigInt,
    pub g1: SpinElement,
    pub g2: SpinElement,
    pub v: [Vector; 3],
    pub u: [Vector; 3],
    pub z: [TorusElem; 2],
    pub primes: Vec<PrimeRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpinPairJson {
    pub kind: String,
    pub t: String,
    pub dim: usize,
    pub g1: SpinElementJson,
    pub g2: SpinElementJson,
    pub v: Vec<Vec<String>>,
    pub u: Vec<Vec<String>>,
    pub torus: Vec<TorusJson>,
    pub primes: Vec<PrimeRecord>,
    pub commute: bool,
    /// Distance of `τ(gᵢ)` from `±1` in operator norm, 12 significant digits.
    pub separation: Vec<f64>,
}

impl SpinPair {
    pub fn to_json(&self) -> SpinPairJson {
        SpinPairJson {
            kind: "spinpair".into(),
            t: self.t.to_string(),
            dim: self.g1.form().dim(),
            g1: self.g1.to_json(),
            g2: self.g2.to_json(),
            v: self.v.iter().map(|v| v.to_strings()).collect(),
            u: self.u.iter().map(|u| u.to_strings()).collect(),
            torus: self.z.iter().map(|z| z.to_json()).collect(),
            primes: self.primes.clone(),
            commute: true,
            separation: [&self.g1, &self.g2]
                .iter()
                .map(|g| {
                    let s = separation(g).expect("f_a is definite");
                    format_float(s).parse().expect("formatted float")
                })
                .collect(),
        }
    }
}

/// `(1+x)/2 + (y/2)(P − Q) − ((1−x)/(2t))·PQ` for commuting bivectors with
/// `P² = Q² = −t`.
fn plane_pair_element(z: &TorusElem, p: &Multivector, q: &Multivector) -> Result<Multivector> {
    let form = p.form().clone();
    let one = Rational::one();
    let two = Rational::from_integer(2.into());
    let t = Rational::from_integer(z.t().clone());
    let scalar = Multivector::scalar(&form, (&one + z.x()) / &two);
    let mixed = p.try_sub(q)?.scale(&(z.y() / &two));
    let top = p.gp(q)?.scale(&(-(&one - z.x()) / (two * t)));
    scalar.try_add(&mixed)?.try_add(&top)
}

/// Lifts `(z₁, z₂) ∈ T_t(Q)²` to commuting `g₁, g₂ ∈ Spin(f_a)` in dimension
/// `dim ≥ 20`, with `vᵢ = eᵢ` and `uᵢ` four-square vectors of norm `t` on
/// coordinates `4..=7`, `8..=11`, `12..=15`.
pub fn torus_to_spin(t: &BigInt, z1: &TorusElem, z2: &TorusElem, dim: usize) -> Result<SpinPair> {
    if dim < MIN_DIM {
        return Err(Error::DimTooSmall {
            got: dim,
            need: MIN_DIM,
        });
    }
    if z1.t() != t || z2.t() != t {
        return Err(Error::Precondition(format!(
            "torus elements must both be over t = {t}"
        )));
    }
    let form = Arc::new(QuadForm::fa(dim)?);
    let t_nat: BigUint = t
        .to_biguint()
        .ok_or_else(|| Error::Precondition(format!("t = {t} must be positive")))?;
    let squares = four_squares(&t_nat);
    let v: [Vector; 3] = std::array::from_fn(|i| Vector::basis(dim, i + 1));
    let u: [Vector; 3] = std::array::from_fn(|i| {
        let mut c = vec![Rational::from_integer(0.into()); dim];
        for (j, s) in squares.iter().enumerate() {
            c[3 + 4 * i + j] = Rational::from_integer(BigInt::from(s.clone()));
        }
        Vector::new(c)
    });
    let planes = (0..3)
        .map(|i| {
            let vi = Multivector::embed_vector(&form, &v[i])?;
            let ui = Multivector::embed_vector(&form, &u[i])?;
            vi.gp(&ui)
        })
        .collect::<Result<Vec<_>>>()?;

    let g1 = SpinElement::new(plane_pair_element(z1, &planes[0], &planes[1])?)?;
    let g2 = SpinElement::new(plane_pair_element(z2, &planes[1], &planes[2])?)?;
    if g1.mul(&g2)? != g2.mul(&g1)? {
        return Err(Error::NotCommuting);
    }

    let mut ps = BTreeSet::new();
    let mut n = t.clone();
    for z in [z1, z2] {
        n *= z.x().denom().lcm(z.y().denom());
    }
    while n.is_even() {
        n >>= 1;
    }
    if !n.is_one() {
        ps.extend(factor(&n).into_keys());
    }
    let mut primes = Vec::new();
    for p in ps {
        let op = OddPrime::new(p.clone())?;
        let kind = splitting(t, &op);
        let integral = [z1.is_maximal_integral_at(&p), z2.is_maximal_integral_at(&p)];
        if kind != Splitting::Split && !(integral[0] && integral[1]) {
            return Err(Error::Verification(format!(
                "torus factor not integral at {} prime {p}",
                kind.as_str()
            )));
        }
        primes.push(PrimeRecord {
            p: p.to_string(),
            splitting: kind,
            torus_val: [torus_val(z1, &op), torus_val(z2, &op)],
            integral,
        });
    }
    Ok(SpinPair {
        t: t.clone(),
        g1,
        g2,
        v,
        u,
        z: [z1.clone(), z2.clone()],
        primes,
    })
}

impl std::fmt::Display for PrimeRecord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {} val={:?} integral={:?}",
            self.p,
            self.splitting.as_str(),
            self.torus_val,
            self.integral
        )
    }
}
