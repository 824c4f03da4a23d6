//! Lagrange four-square decompositions.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;

use super::{is_prime, mod_inverse};

const BRUTE_FORCE_LIMIT: u64 = 1_000_000;

/// `(a, b, c, d)` with `a ≥ b ≥ c ≥ d ≥ 0` and `a² + b² + c² + d² = n`.
///
/// Below 10⁶ this is the lexicographically largest decomposition. Larger
/// inputs use the randomized Rabin–Shallit reduction (seeded by `n`, so still
/// deterministic) and are re-verified before returning.
pub fn four_squares(n: &BigUint) -> [BigUint; 4] {
    let out = match n.to_u64() {
        Some(small) if small < BRUTE_FORCE_LIMIT => brute_force(small).map(BigUint::from),
        _ => rabin_shallit(n),
    };
    let sum: BigUint = out.iter().map(|x| x * x).sum();
    assert_eq!(&sum, n, "four-square decomposition failed re-summation");
    out
}

fn brute_force(n: u64) -> [u64; 4] {
    let mut a = n.sqrt();
    loop {
        let ra = n - a * a;
        let mut b = a.min(ra.sqrt());
        loop {
            let rb = ra - b * b;
            let mut c = b.min(rb.sqrt());
            loop {
                let rc = rb - c * c;
                let d = rc.sqrt();
                if d * d == rc && d <= c {
                    return [a, b, c, d];
                }
                if c == 0 {
                    break;
                }
                c -= 1;
            }
            if b == 0 {
                break;
            }
            b -= 1;
        }
        // Lagrange guarantees termination before a underflows.
        a -= 1;
    }
}

fn rabin_shallit(n: &BigUint) -> [BigUint; 4] {
    // Strip factors of 4: (2a)² + ... = 4n.
    let mut m = n.clone();
    let mut shift = 0usize;
    while !m.is_zero() && (&m % 4u32).is_zero() {
        m >>= 2;
        shift += 1;
    }
    let mut out = if m.to_u64().is_some_and(|s| s < BRUTE_FORCE_LIMIT) {
        brute_force(m.to_u64().unwrap()).map(BigUint::from)
    } else {
        randomized(&m)
    };
    for x in out.iter_mut() {
        *x <<= shift;
    }
    out.sort_by(|x, y| y.cmp(x));
    out
}

fn randomized(n: &BigUint) -> [BigUint; 4] {
    let seed = n
        .iter_u64_digits()
        .fold(0x5eed_u64, |acc, d| acc.rotate_left(7) ^ d);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let root = n.sqrt();
    loop {
        let a = rng.gen_biguint_below(&(&root + 1u32));
        let rest = n - &a * &a;
        let rroot = rest.sqrt();
        let b = rng.gen_biguint_below(&(&rroot + 1u32));
        let p = &rest - &b * &b;
        if let Some((c, d)) = two_squares_prime(&p) {
            let mut out = [a, b, c, d];
            out.sort_by(|x, y| y.cmp(x));
            return out;
        }
    }
}

/// `p = c² + d²` for `p ∈ {0, 1, 2}` or `p` prime `≡ 1 (mod 4)`, via a square
/// root of -1 and the Hermite–Serret Euclidean descent.
fn two_squares_prime(p: &BigUint) -> Option<(BigUint, BigUint)> {
    if p.is_zero() {
        return Some((BigUint::zero(), BigUint::zero()));
    }
    if p.is_one() {
        return Some((BigUint::one(), BigUint::zero()));
    }
    if *p == BigUint::from(2u32) {
        return Some((BigUint::one(), BigUint::one()));
    }
    if (p % 4u32) != BigUint::one() {
        return None;
    }
    let pi = BigInt::from(p.clone());
    if !is_prime(&pi) {
        return None;
    }
    let e = (&pi - 1u32) / 4u32;
    let mut i = None;
    let mut c = BigInt::from(2);
    while i.is_none() {
        let r = c.modpow(&e, &pi);
        if (&r * &r).mod_floor(&pi) == &pi - 1u32 {
            i = Some(r);
        }
        c += 1u32;
    }
    let i = i.unwrap();
    debug_assert!(mod_inverse(&i, &pi).is_some());
    let limit = pi.sqrt();
    let (mut x, mut y) = (pi.clone(), i);
    while y > limit {
        let r = x.mod_floor(&y);
        x = y;
        y = r;
    }
    let c = y.to_biguint().unwrap();
    let d2 = p - &c * &c;
    let d = d2.sqrt();
    (&d * &d == d2).then_some((c, d))
}
