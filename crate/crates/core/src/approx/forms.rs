//! Parameter searches, Legendre-conditioned prime scans, and binary
//! quadratic forms of negative discriminant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::arith::{is_perfect_square, legendre, OddPrime};
use crate::error::{Error, Result};

pub const FOYA_CAP: u32 = 64;
pub const DEFAULT_PRIME_CAP: u64 = 10_000_000;

/// Least `k ≥ 1` with `t_k = 2^{2mk} − x` positive, not a square, and `−s·t_k`
/// not a square for every `s` in `s_list`.
pub fn foya_search(x: &BigInt, m: u32, s_list: &[BigInt]) -> Result<u32> {
    if m == 0 {
        return Err(Error::Precondition("m must be positive".into()));
    }
    if let Some(s) = s_list.iter().find(|s| is_perfect_square(s)) {
        return Err(Error::Precondition(format!("{s} is a perfect square")));
    }
    for k in 1..=FOYA_CAP {
        let t = (BigInt::one() << (2 * m * k) as usize) - x;
        if foya_accepts(&t, s_list) {
            return Ok(k);
        }
    }
    Err(Error::CapExceeded(FOYA_CAP as u64))
}

/// The three defining checks on `t_k`.
pub fn foya_accepts(t: &BigInt, s_list: &[BigInt]) -> bool {
    t.is_positive() && !is_perfect_square(t) && s_list.iter().all(|s| !is_perfect_square(&(-s * t)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PrimeCondition {
    /// `p ≡ r (mod m)`.
    Residue { r: i64, m: i64 },
    /// `(a | p) = sign`.
    Legendre { a: i64, sign: i8 },
}

impl PrimeCondition {
    pub fn holds(&self, p: u64) -> bool {
        match *self {
            PrimeCondition::Residue { r, m } => (p as i64 - r).rem_euclid(m) == 0,
            PrimeCondition::Legendre { a, sign } => {
                legendre(&BigInt::from(a), &BigInt::from(p)) == sign
            }
        }
    }
}

/// The scan limit, overridable through `SPINLAB_CAP_PRIMES`.
pub fn prime_cap() -> u64 {
    std::env::var("SPINLAB_CAP_PRIMES")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_PRIME_CAP)
}

/// The first `count` odd primes satisfying every condition, ascending.
pub fn find_primes_legendre(conds: &[PrimeCondition], count: usize) -> Result<Vec<u64>> {
    find_primes_legendre_capped(conds, count, prime_cap())
}

pub fn find_primes_legendre_capped(
    conds: &[PrimeCondition],
    count: usize,
    cap: u64,
) -> Result<Vec<u64>> {
    for c in conds {
        match *c {
            PrimeCondition::Residue { m, .. } if m <= 0 => {
                return Err(Error::Precondition(format!("modulus {m} must be positive")))
            }
            PrimeCondition::Legendre { sign, .. } if sign.abs() != 1 => {
                return Err(Error::Precondition(format!(
                    "Legendre sign {sign} must be ±1"
                )))
            }
            _ => {}
        }
    }
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(out);
    }
    for p in OddPrimes::up_to(cap) {
        if conds.iter().all(|c| c.holds(p)) {
            out.push(p);
            if out.len() == count {
                return Ok(out);
            }
        }
    }
    Err(Error::CapExceeded(cap))
}

/// Odd primes up to a bound from a segmented sieve.
struct OddPrimes {
    limit: u64,
    base: Vec<u64>,
    lo: u64,
    segment: Vec<u64>,
    next: usize,
}

const SEGMENT: u64 = 1 << 16;

impl OddPrimes {
    fn up_to(limit: u64) -> Self {
        let root = (limit as f64).sqrt() as u64 + 1;
        let mut small = vec![true; root as usize + 1];
        let mut base = Vec::new();
        for i in 2..=root as usize {
            if small[i] {
                base.push(i as u64);
                for j in (i * i..=root as usize).step_by(i) {
                    small[j] = false;
                }
            }
        }
        OddPrimes {
            limit,
            base,
            lo: 3,
            segment: Vec::new(),
            next: 0,
        }
    }

    fn fill(&mut self) {
        let hi = (self.lo + SEGMENT).min(self.limit + 1);
        let mut mark = vec![true; (hi - self.lo) as usize];
        for &q in &self.base {
            if q * q >= hi {
                break;
            }
            let start = (q * q).max(self.lo.div_ceil(q) * q);
            for j in (start..hi).step_by(q as usize) {
                mark[(j - self.lo) as usize] = false;
            }
        }
        self.segment = (self.lo..hi)
            .filter(|&n| n % 2 == 1 && mark[(n - self.lo) as usize])
            .collect();
        self.next = 0;
        self.lo = hi;
    }
}

impl Iterator for OddPrimes {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.next >= self.segment.len() {
            if self.lo > self.limit {
                return None;
            }
            self.fill();
        }
        self.next += 1;
        Some(self.segment[self.next - 1])
    }
}

/// Number of reduced primitive forms `(a, b, c)` with `b² − 4ac = D < 0`.
pub fn class_number(d: i64) -> Result<u64> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::Precondition(format!(
            "{d} is not a negative discriminant"
        )));
    }
    Ok(reduced_forms(d).len() as u64)
}

/// Reduced primitive forms: `|b| ≤ a ≤ c`, with `b ≥ 0` when `|b| = a` or `a = c`.
pub fn reduced_forms(d: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    let n = -d;
    let mut a = 1;
    while 3 * a * a <= n {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || ((b.abs() == a || a == c) && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                out.push((a, b, c));
            }
        }
        a += 1;
    }
    out
}

/// Discriminant of the maximal order of `Q(√−t)` for squarefree `t > 0`.
pub fn field_discriminant(t: i64) -> i64 {
    if t % 4 == 3 {
        -t
    } else {
        -4 * t
    }
}

/// The norm form of the maximal order of `Q(√−t)` at `(x, y)`.
pub fn norm_form(t: i64, x: i64, y: i64) -> i128 {
    let (x, y, t) = (x as i128, y as i128, t as i128);
    if t % 4 == 3 {
        x * x + x * y + (1 + t) / 4 * y * y
    } else {
        x * x + t * y * y
    }
}

/// A solution of `N(x, y) = p` for the norm form of `Q(√−t)`, scanning `y`
/// upward and, for each `y`, `|x|` upward with `x ≥ 0` first. `None` means the
/// primes above `p` are not principal.
pub fn principal_witness(t: i64, p: &OddPrime) -> Result<Option<(i64, i64)>> {
    if t <= 0 || !is_squarefree(t) {
        return Err(Error::Precondition(format!(
            "{t} is not a positive squarefree integer"
        )));
    }
    if legendre(&BigInt::from(-t), p.value()) != 1 {
        return Err(Error::NotSplit {
            p: p.to_string(),
            t: t.to_string(),
            kind: "not split",
        });
    }
    let pv: i128 = p
        .value()
        .try_into()
        .map_err(|_| Error::Precondition(format!("{p} too large for the witness search")))?;
    let mut y: i64 = 0;
    // N(x, y) ≥ t·y²/4 in either normalisation.
    while (t as i128) * (y as i128) * (y as i128) <= 4 * pv {
        let mut ax: i64 = 0;
        loop {
            for x in [ax, -ax] {
                if norm_form(t, x, y) == pv {
                    return Ok(Some((x, y)));
                }
                if ax == 0 {
                    break;
                }
            }
            // Past this point both signs exceed p and keep growing with |x|.
            if (ax as i128) * (ax as i128) > pv + (ax as i128) * (y as i128) {
                break;
            }
            ax += 1;
        }
        y += 1;
    }
    Ok(None)
}

fn is_squarefree(n: i64) -> bool {
    let mut q = 2;
    while q * q <= n {
        if n % (q * q) == 0 {
            return false;
        }
        q += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn foya_examples() {
        assert_eq!(foya_search(&b(1), 1, &[b(3)]).unwrap(), 1);
        assert!(matches!(
            foya_search(&b(0), 1, &[]),
            Err(Error::CapExceeded(64))
        ));
        assert_eq!(foya_search(&b(-1), 1, &[]).unwrap(), 1);
        assert!(foya_search(&b(1), 1, &[b(4)]).is_err());
    }

    #[test]
    fn foya_outputs_pass_checks() {
        for x in -30i64..30 {
            for m in 1..4u32 {
                let s_list = [b(2), b(3), b(-1), b(7)];
                if let Ok(k) = foya_search(&b(x), m, &s_list) {
                    let t = (BigInt::one() << (2 * m * k) as usize) - b(x);
                    assert!(t.is_positive());
                    assert!(!is_perfect_square(&t));
                    for s in &s_list {
                        assert!(!is_perfect_square(&(-s * &t)));
                    }
                    for j in 1..k {
                        let tj = (BigInt::one() << (2 * m * j) as usize) - b(x);
                        assert!(!foya_accepts(&tj, &s_list));
                    }
                }
            }
        }
    }

    /// Trial division, independent of the sieve.
    fn slow_primes(limit: u64) -> Vec<u64> {
        (3..=limit)
            .step_by(2)
            .filter(|&n| {
                (3..)
                    .step_by(2)
                    .take_while(|d| d * d <= n)
                    .all(|d| n % d != 0)
            })
            .collect()
    }

    #[test]
    fn sieve_matches_trial_division() {
        let fast: Vec<u64> = OddPrimes::up_to(200_000).collect();
        assert_eq!(fast, slow_primes(200_000));
        assert_eq!(OddPrimes::up_to(2).count(), 0);
        assert_eq!(OddPrimes::up_to(3).collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn prime_search_examples() {
        let conds = [
            PrimeCondition::Residue { r: 3, m: 4 },
            PrimeCondition::Legendre { a: -7, sign: 1 },
        ];
        assert_eq!(find_primes_legendre(&conds, 1).unwrap(), vec![11]);
        let conds = [PrimeCondition::Residue { r: 1, m: 4 }];
        assert_eq!(find_primes_legendre(&conds, 2).unwrap(), vec![5, 13]);
        assert_eq!(find_primes_legendre(&[], 3).unwrap(), vec![3, 5, 7]);
        let impossible = [PrimeCondition::Residue { r: 0, m: 4 }];
        assert!(matches!(
            find_primes_legendre_capped(&impossible, 1, 1000),
            Err(Error::CapExceeded(1000))
        ));
    }

    #[test]
    fn class_number_examples() {
        assert_eq!(class_number(-7).unwrap(), 1);
        assert_eq!(class_number(-4).unwrap(), 1);
        assert_eq!(class_number(-23).unwrap(), 3);
        assert_eq!(class_number(-20).unwrap(), 2);
        assert!(class_number(-5).is_err());
        assert!(class_number(4).is_err());
    }

    #[test]
    fn class_numbers_of_known_fields() {
        // The nine imaginary quadratic fields of class number one.
        for d in [-3, -4, -7, -8, -11, -19, -43, -67, -163] {
            assert_eq!(class_number(d).unwrap(), 1, "D = {d}");
        }
        assert_eq!(class_number(-15).unwrap(), 2);
        assert_eq!(class_number(-71).unwrap(), 7);
    }

    #[test]
    fn principal_witness_examples() {
        let p = |n| OddPrime::from_u64(n).unwrap();
        assert_eq!(principal_witness(7, &p(11)).unwrap(), Some((1, 2)));
        assert_eq!(principal_witness(5, &p(3)).unwrap(), None);
        assert_eq!(principal_witness(1, &p(5)).unwrap(), Some((2, 1)));
        assert!(principal_witness(7, &p(3)).is_err());
        assert!(principal_witness(4, &p(5)).is_err());
    }

    #[test]
    fn class_number_one_gives_witnesses() {
        for t in 1..60i64 {
            if !is_squarefree(t) {
                continue;
            }
            let h = class_number(field_discriminant(t)).unwrap();
            let mut all = true;
            for q in slow_primes(500) {
                let p = OddPrime::from_u64(q).unwrap();
                if legendre(&b(-t), p.value()) != 1 {
                    continue;
                }
                match principal_witness(t, &p).unwrap() {
                    Some((x, y)) => assert_eq!(norm_form(t, x, y), q as i128),
                    None => all = false,
                }
            }
            if h == 1 {
                assert!(all, "t = {t} has class number one");
            } else {
                assert!(!all, "t = {t} has class number {h}");
            }
        }
    }
}
