//! Re-verification of written certificates from their JSON alone.
//!
//! Approximation certificates are checked with the arithmetic and torus
//! layers only; spin-pair files additionally use the Clifford product. Nothing
//! here calls into the construction code that produced the file.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::{
    factor, int_val, legendre, parse_rational, reduce_rational, sqrt_mod, OddPrime, Rational,
};
use crate::clifford::{Multivector, QuadForm, TermJson};
use crate::error::{Error, Result};
use crate::tori::{torus_val, TorusElem, TorusJson, TrivializationJson};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyCheck {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub kind: String,
    pub checks: Vec<VerifyCheck>,
    pub passed: bool,
}

impl VerifyReport {
    fn new(kind: &str) -> Self {
        VerifyReport {
            kind: kind.into(),
            checks: Vec::new(),
            passed: true,
        }
    }

    fn record(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.passed &= ok;
        self.checks.push(VerifyCheck {
            name: name.into(),
            ok,
            detail: detail.into(),
        });
    }

    fn first_failure(&mut self, name: &str, failures: Vec<String>, what: &str) {
        match failures.first() {
            None => self.record(name, true, what),
            Some(f) => self.record(name, false, f.clone()),
        }
    }
}

#[derive(Debug, Deserialize)]
struct CongruenceFile {
    element: usize,
    p: String,
    k: u32,
    lhs: String,
    rhs: String,
}

#[derive(Debug, Deserialize)]
struct PartitionFile {
    square: Vec<String>,
    nonsquare: Vec<String>,
}

#[derive(Debug, Deserialize)]
struct CertificateFile {
    kind: String,
    inputs: Vec<String>,
    ideal: String,
    t: String,
    trivializations: Vec<TrivializationJson>,
    torus: Vec<TorusJson>,
    congruences: Vec<CongruenceFile>,
    support: Vec<Vec<String>>,
    overlaps: Vec<String>,
    partition: Option<PartitionFile>,
}

#[derive(Debug, Deserialize)]
struct SpinElementFile {
    terms: Vec<TermJson>,
    matrix: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
struct PrimeRecordFile {
    p: String,
    splitting: String,
    torus_val: [i64; 2],
    integral: [bool; 2],
}

#[derive(Debug, Deserialize)]
struct SpinPairFile {
    t: String,
    dim: usize,
    g1: SpinElementFile,
    g2: SpinElementFile,
    v: Vec<Vec<String>>,
    u: Vec<Vec<String>>,
    torus: Vec<TorusJson>,
    primes: Vec<PrimeRecordFile>,
    commute: bool,
}

fn parse_int(s: &str, what: &str) -> Result<BigInt> {
    s.parse().map_err(|_| Error::Parse(format!("{what} {s:?}")))
}

fn odd_part(n: &BigInt) -> BigInt {
    let mut n = n.abs();
    while !n.is_zero() && n.is_even() {
        n >>= 1;
    }
    n
}

fn odd_primes(n: &BigInt) -> BTreeSet<BigInt> {
    let n = odd_part(n);
    if n.is_one() || n.is_zero() {
        BTreeSet::new()
    } else {
        factor(&n).into_keys().collect()
    }
}

fn parse_primes(v: &[String]) -> Result<BTreeSet<BigInt>> {
    v.iter().map(|s| parse_int(s, "prime")).collect()
}

fn denominator_primes(x: &Rational, y: &Rational) -> BTreeSet<BigInt> {
    odd_primes(&x.denom().lcm(y.denom()))
}

/// Verifies a certificate or spin-pair file.
pub fn verify_text(text: &str) -> Result<VerifyReport> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("JSON: {e}")))?;
    let kind = value
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("missing \"kind\"".into()))?
        .to_string();
    match kind.as_str() {
        "unit" | "pair" => {
            let c: CertificateFile = serde_json::from_value(value)
                .map_err(|e| Error::Parse(format!("certificate: {e}")))?;
            verify_certificate(&c)
        }
        "spinpair" => {
            let s: SpinPairFile = serde_json::from_value(value)
                .map_err(|e| Error::Parse(format!("spin pair: {e}")))?;
            verify_spin_pair(&s)
        }
        other => Err(Error::Parse(format!("unknown certificate kind {other:?}"))),
    }
}

fn verify_certificate(c: &CertificateFile) -> Result<VerifyReport> {
    let mut rep = VerifyReport::new(&c.kind);
    let t = parse_int(&c.t, "t")?;
    let m = parse_int(&c.ideal, "ideal")?;
    let inputs: Vec<Rational> = c
        .inputs
        .iter()
        .map(|s| parse_rational(s).map_err(Error::from))
        .collect::<Result<_>>()?;
    let want_elems = if c.kind == "unit" { 1 } else { 2 };
    rep.record(
        "shape",
        inputs.len() == want_elems && c.torus.len() == want_elems && c.support.len() == want_elems,
        format!("{want_elems} target(s), torus point(s) and support list(s)"),
    );
    if !rep.passed {
        return Ok(rep);
    }
    rep.record("parameter", t.is_positive(), format!("t = {t}"));
    rep.record("ideal", m.is_positive() && m.is_odd(), format!("I = ({m})"));
    if !rep.passed {
        return Ok(rep);
    }

    // Torus points: x² + t y² = 1, computed directly.
    let mut zs = Vec::new();
    let mut failures = Vec::new();
    for (i, j) in c.torus.iter().enumerate() {
        let x = parse_rational(&j.x)?;
        let y = parse_rational(&j.y)?;
        let tj = parse_int(&j.t, "torus t")?;
        let norm = &x * &x + Rational::from_integer(t.clone()) * &y * &y;
        if tj != t || !norm.is_one() {
            failures.push(format!("z{i}: x² + t y² = {norm} over t = {tj}"));
        }
        zs.push((x, y));
    }
    rep.first_failure(
        "torus_norm",
        failures,
        "every point satisfies x² + t y² = 1",
    );

    // Trivializations: one per prime power exactly dividing m.
    let prime_powers: Vec<(BigInt, u32)> = if m.is_one() {
        Vec::new()
    } else {
        factor(&m).into_iter().collect()
    };
    let mut failures = Vec::new();
    let got: BTreeSet<String> = c.trivializations.iter().map(|tr| tr.p.clone()).collect();
    let want: BTreeSet<String> = prime_powers.iter().map(|(p, _)| p.to_string()).collect();
    if got != want || c.trivializations.len() != want.len() {
        failures.push(format!(
            "trivialization primes {got:?}, ideal primes {want:?}"
        ));
    }
    let mut roots = Vec::new();
    for tr in &c.trivializations {
        let p = parse_int(&tr.p, "p")?;
        let e = prime_powers
            .iter()
            .find(|(q, _)| *q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0);
        let pk = num_traits::pow(p.clone(), tr.k as usize);
        let w = parse_int(&tr.w, "w")?;
        let zeta = parse_int(&tr.zeta, "zeta")?;
        let pv = num_traits::pow(p.clone(), tr.v as usize);
        let tv = int_val(&t, &p);
        let unit = &t / (&pv * &pv);
        let ok = parse_int(&tr.t, "t")? == t
            && tr.k >= e
            && tv == 2 * tr.v as u64
            && !w.is_multiple_of(&p)
            && (&w * &w + &unit).mod_floor(&pk).is_zero()
            && (&pv * &w - &zeta).mod_floor(&pk).is_zero();
        if !ok {
            failures.push(format!(
                "ζ at {p}: w = {w}, v = {}, k = {} does not square to −t",
                tr.v, tr.k
            ));
        }
        roots.push((p, tr.k, pv, w, pk));
    }
    rep.first_failure(
        "trivializations",
        failures,
        "ζ = p^v w with w² ≡ −t/p^{2v} at every P | I",
    );

    // Congruences: ρ_P(zᵢ) = x + (y p^v) w ≡ aᵢ mod p^k, recomputed.
    let mut failures = Vec::new();
    let n_expected = roots.len() * want_elems;
    if c.congruences.len() != n_expected {
        failures.push(format!(
            "{} congruences, expected {n_expected}",
            c.congruences.len()
        ));
    }
    for (p, k, pv, w, pk) in &roots {
        for (i, (x, y)) in zs.iter().enumerate() {
            let Some(cg) = c
                .congruences
                .iter()
                .find(|cg| cg.element == i && cg.p == p.to_string())
            else {
                failures.push(format!("no congruence for z{i} at {p}"));
                continue;
            };
            let yv = y * Rational::from_integer(pv.clone());
            let lhs = match (reduce_rational(x, pk), reduce_rational(&yv, pk)) {
                (Ok(xr), Ok(yr)) => (xr + yr * w).mod_floor(pk),
                _ => {
                    failures.push(format!("z{i} is not integral at {p}"));
                    continue;
                }
            };
            let rhs = match reduce_rational(&inputs[i], pk) {
                Ok(r) => r,
                Err(_) => {
                    failures.push(format!("target {i} is not integral at {p}"));
                    continue;
                }
            };
            if cg.k != *k || cg.lhs != lhs.to_string() || cg.rhs != rhs.to_string() || lhs != rhs {
                failures.push(format!(
                    "z{i} at {p}^{k}: recomputed ρ = {lhs}, target {rhs}; file has {} ≡ {}",
                    cg.lhs, cg.rhs
                ));
            }
        }
    }
    rep.first_failure(
        "congruences",
        failures,
        "ρ_P(zᵢ) ≡ aᵢ recomputed at every P | I",
    );

    // Supports.
    let mut failures = Vec::new();
    let mut supports = Vec::new();
    for (i, (x, y)) in zs.iter().enumerate() {
        let s = denominator_primes(x, y);
        if parse_primes(&c.support[i])? != s {
            failures.push(format!("support of z{i} is {s:?}"));
        }
        supports.push(s);
    }
    rep.first_failure(
        "support",
        failures,
        "supports equal the odd primes of the denominators",
    );

    if c.kind == "unit" {
        rep.record(
            "integral",
            supports[0].is_empty(),
            "z ∈ T_t(O): denominators are powers of 2",
        );
    } else {
        let i_primes: BTreeSet<BigInt> = prime_powers.iter().map(|(p, _)| p.clone()).collect();
        let t_primes = odd_primes(&t);
        let sets = [&i_primes, &supports[0], &supports[1], &t_primes];
        let names = ["𝓟(I)", "𝓡₁", "𝓡₂", "𝓟(t)"];
        let mut failures = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                if let Some(q) = sets[i].intersection(sets[j]).next() {
                    failures.push(format!("{q} lies in {} and {}", names[i], names[j]));
                }
            }
        }
        rep.first_failure("disjoint", failures, "𝓟(I), 𝓡₁, 𝓡₂, 𝓟(t) pairwise disjoint");
        let overlaps: BTreeSet<BigInt> = supports[0]
            .union(&supports[1])
            .filter(|q| t_primes.contains(q))
            .cloned()
            .collect();
        rep.record(
            "overlaps",
            parse_primes(&c.overlaps)? == overlaps,
            format!("support primes dividing t: {overlaps:?}"),
        );
        match &c.partition {
            None => rep.record("partition", false, "pair certificate without partition"),
            Some(part) => {
                let square = parse_primes(&part.square)?;
                let nonsquare = parse_primes(&part.nonsquare)?;
                let mut failures = Vec::new();
                if square.union(&nonsquare).cloned().collect::<BTreeSet<_>>() != supports[1]
                    || square.intersection(&nonsquare).next().is_some()
                {
                    failures.push("partition does not split 𝓡₂".to_string());
                }
                let (x, y) = &zs[1];
                for q in &supports[1] {
                    match rho_square_class(&t, x, y, q) {
                        Ok(is_sq) if is_sq == square.contains(q) => {}
                        Ok(is_sq) => failures.push(format!("ρ_{q}(z₂) square = {is_sq}")),
                        Err(e) => failures.push(format!("{q}: {e}")),
                    }
                }
                rep.first_failure(
                    "partition",
                    failures,
                    "square classes of ρ_q(z₂) recomputed",
                );
            }
        }
    }
    Ok(rep)
}

/// Whether `ρ_q(x + y√−t)` is a square in `Q_q`, for split `q ∤ t` at which
/// the point is not integral. From `(x + yζ)(x − yζ) = 1` exactly one of
/// `q^e(x ± yζ)` is a unit, where `q^{−e}` is the largest denominator power.
fn rho_square_class(t: &BigInt, x: &Rational, y: &Rational, q: &BigInt) -> Result<bool> {
    if t.is_multiple_of(q) {
        return Err(Error::Precondition(format!("{q} divides t")));
    }
    let op = OddPrime::new(q.clone())?;
    let zeta =
        sqrt_mod(&-t, &op, 1)?.ok_or_else(|| Error::Precondition(format!("{q} is inert")))?;
    let e = int_val(x.denom(), q).max(int_val(y.denom(), q));
    if e == 0 {
        return Err(Error::Precondition(format!("point is integral at {q}")));
    }
    let scale = Rational::from_integer(num_traits::pow(q.clone(), e as usize));
    let xs = reduce_rational(&(x * &scale), q)?;
    let ys = reduce_rational(&(y * &scale), q)?;
    let mut r = (&xs + &ys * &zeta).mod_floor(q);
    if r.is_zero() {
        r = (&xs - &ys * &zeta).mod_floor(q);
    }
    Ok(e.is_multiple_of(2) && legendre(&r, q) == 1)
}

fn verify_spin_pair(s: &SpinPairFile) -> Result<VerifyReport> {
    let mut rep = VerifyReport::new("spinpair");
    let t = parse_int(&s.t, "t")?;
    let tq = Rational::from_integer(t.clone());
    let form = Arc::new(QuadForm::fa(s.dim)?);
    rep.record(
        "dimension",
        s.dim >= 20 && s.torus.len() == 2,
        format!("dim = {}", s.dim),
    );
    if !rep.passed {
        return Ok(rep);
    }
    let mut zs = Vec::new();
    let mut failures = Vec::new();
    for (i, j) in s.torus.iter().enumerate() {
        match TorusElem::from_json(j) {
            Ok(z) if *z.t() == t => zs.push(z),
            _ => failures.push(format!("z{i} is not on the conic x² + {t} y² = 1")),
        }
    }
    rep.first_failure("torus_norm", failures, "both points lie on the conic");
    if zs.len() != 2 {
        return Ok(rep);
    }

    let mut failures = Vec::new();
    for (name, vs, norm) in [("v", &s.v, Rational::one()), ("u", &s.u, tq.clone())] {
        for (i, coords) in vs.iter().enumerate() {
            let c: Vec<Rational> = coords
                .iter()
                .map(|x| parse_rational(x).map_err(Error::from))
                .collect::<Result<_>>()?;
            let n: Rational = c.iter().map(|x| x * x).sum();
            if c.len() != s.dim || n != norm {
                failures.push(format!("{name}{i} has norm {n}"));
            }
        }
    }
    rep.first_failure("frame", failures, "vᵢ unit vectors, uᵢ of norm t");

    let g1 = Multivector::from_json_terms(&form, &s.g1.terms)?;
    let g2 = Multivector::from_json_terms(&form, &s.g2.terms)?;
    let mut failures = Vec::new();
    for (name, g, file) in [("g1", &g1, &s.g1), ("g2", &g2, &s.g2)] {
        if !g.is_even() || !g.gp(&g.reverse())?.is_one() {
            failures.push(format!("{name}: not even of norm one"));
            continue;
        }
        for (col, i) in (1..=s.dim).enumerate() {
            let e = crate::clifford::Vector::basis(s.dim, i);
            let image = match g.twisted_action(&e) {
                Ok(v) => v,
                Err(_) => {
                    failures.push(format!("{name} moves e{i} out of grade one"));
                    break;
                }
            };
            let stored: Vec<&String> = file.matrix.iter().map(|row| &row[col]).collect();
            let computed = image.to_strings();
            if stored.len() != computed.len() || stored.iter().zip(&computed).any(|(a, b)| *a != b)
            {
                failures.push(format!("{name}: column {i} of the matrix disagrees"));
                break;
            }
        }
    }
    rep.first_failure(
        "spin",
        failures,
        "gᵢ gᵢ' = 1 and stored action matrices match",
    );
    let commute = g1.gp(&g2)? == g2.gp(&g1)?;
    rep.record("commute", commute && s.commute, "g₁ g₂ = g₂ g₁");

    let mut expected: BTreeSet<BigInt> = odd_primes(&t);
    for z in &zs {
        expected.extend(denominator_primes(z.x(), z.y()));
    }
    let mut failures = Vec::new();
    let listed: BTreeSet<BigInt> = s
        .primes
        .iter()
        .map(|r| parse_int(&r.p, "p"))
        .collect::<Result<_>>()?;
    if listed != expected {
        failures.push(format!("prime list {listed:?}, expected {expected:?}"));
    }
    for r in &s.primes {
        let p = parse_int(&r.p, "p")?;
        let op = OddPrime::new(p.clone())?;
        let e = int_val(&t, &p);
        let kind = if e % 2 == 1 {
            "ramified"
        } else if legendre(&-(&t / num_traits::pow(p.clone(), e as usize)), &p) == 1 {
            "split"
        } else {
            "inert"
        };
        let scale = Rational::from_integer(num_traits::pow(p.clone(), (e / 2) as usize));
        let integral =
            [0, 1].map(|i| !denominator_primes(zs[i].x(), &(zs[i].y() * &scale)).contains(&p));
        let vals = [torus_val(&zs[0], &op), torus_val(&zs[1], &op)];
        if r.splitting != kind || r.integral != integral || r.torus_val != vals {
            failures.push(format!(
                "record at {p} disagrees ({kind}, {integral:?}, {vals:?})"
            ));
        }
        if kind != "split" && !(integral[0] && integral[1]) {
            failures.push(format!("not integral at {kind} prime {p}"));
        }
    }
    rep.first_failure(
        "primes",
        failures,
        "splitting types and integrality recomputed",
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::{approx_pair, approx_unit, torus_to_spin};
    use crate::arith::{int, rat};
    use crate::json::to_canonical_string;
    use crate::OIdeal;

    fn ideal(n: i64) -> OIdeal {
        OIdeal::new(BigInt::from(n)).unwrap()
    }

    #[test]
    fn unit_certificates_verify() {
        for (a, m) in [
            (int(3), 5),
            (int(1), 5),
            (int(-1), 9),
            (int(4), 3),
            (rat(14, 11), 27),
            (int(8), 105),
        ] {
            let ap = approx_unit(&a, &ideal(m)).unwrap();
            let text = to_canonical_string(&ap.certificate).unwrap();
            let rep = verify_text(&text).unwrap();
            assert!(rep.passed, "{a} mod {m}: {rep:?}");
        }
    }

    #[test]
    fn pair_certificates_verify() {
        let ap = approx_pair(&int(4), &int(9), &ideal(11), None).unwrap();
        let rep = verify_text(&to_canonical_string(&ap.certificate).unwrap()).unwrap();
        assert!(rep.passed, "{rep:?}");
        let ap = approx_pair(&rat(2, 3), &int(-5), &ideal(7 * 13), Some(BigInt::from(10))).unwrap();
        let rep = verify_text(&to_canonical_string(&ap.certificate).unwrap()).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn tampering_is_detected() {
        let ap = approx_unit(&int(3), &ideal(5)).unwrap();
        let mut v = serde_json::to_value(&ap.certificate).unwrap();
        v["congruences"][0]["rhs"] = Value::String("4".into());
        assert!(!verify_text(&v.to_string()).unwrap().passed);
        let mut v = serde_json::to_value(&ap.certificate).unwrap();
        v["inputs"][0] = Value::String("2".into());
        assert!(!verify_text(&v.to_string()).unwrap().passed);
        let mut v = serde_json::to_value(&ap.certificate).unwrap();
        v["trivializations"][0]["w"] = Value::String("1".into());
        assert!(!verify_text(&v.to_string()).unwrap().passed);
        let mut v = serde_json::to_value(&ap.certificate).unwrap();
        v["torus"][0]["y"] = Value::String("1/3".into());
        assert!(!verify_text(&v.to_string()).unwrap().passed);
        assert!(verify_text("{}").is_err());
        assert!(verify_text("not json").is_err());
    }

    #[test]
    fn spin_pairs_verify() {
        let ap = approx_pair(&int(4), &int(9), &ideal(11), Some(BigInt::from(7))).unwrap();
        let sp = torus_to_spin(&ap.t, &ap.z[0], &ap.z[1], 20).unwrap();
        let text = to_canonical_string(&sp.to_json()).unwrap();
        let rep = verify_text(&text).unwrap();
        assert!(rep.passed, "{rep:?}");
        let mut v: Value = serde_json::from_str(&text).unwrap();
        v["g1"]["terms"][0]["coeff"] = Value::String("5/8".into());
        assert!(!verify_text(&v.to_string()).unwrap().passed);
    }

    #[test]
    fn square_class_matches_construction() {
        let ap = approx_pair(&int(4), &int(9), &ideal(11), None).unwrap();
        for q in ap.z[1].denominator_primes() {
            let a = rho_square_class(&ap.t, ap.z[1].x(), ap.z[1].y(), &q).unwrap();
            let b =
                crate::approx::rho_is_square(&ap.z[1], &OddPrime::new(q.clone()).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }
}
