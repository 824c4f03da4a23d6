//! Quadratic Hilbert symbols over `Q`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{int_val, legendre, ArithError, OddPrime, Rational, Result};

/// A place of `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Place {
    Real,
    Two,
    Odd(OddPrime),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "inf"),
            Place::Two => write!(f, "2"),
            Place::Odd(p) => write!(f, "{p}"),
        }
    }
}

/// `(a, b)_v`: +1 iff `z² = a x² + b y²` has a nontrivial solution over `Q_v`.
pub fn hilbert_symbol(a: &Rational, b: &Rational, v: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(ArithError::Zero);
    }
    // a and num(a)·den(a) lie in the same square class.
    let a = a.numer() * a.denom();
    let b = b.numer() * b.denom();
    Ok(match v {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Two => hilbert_two(&a, &b),
        Place::Odd(p) => hilbert_odd(&a, &b, p.value()),
    })
}

fn split(n: &BigInt, p: &BigInt) -> (u64, BigInt) {
    let e = int_val(n, p);
    let u = n / num_traits::pow(p.clone(), e as usize);
    (e, u)
}

fn hilbert_odd(a: &BigInt, b: &BigInt, p: &BigInt) -> i8 {
    let (alpha, u) = split(a, p);
    let (beta, v) = split(b, p);
    let mut s: i8 = 1;
    // (-1)^{αβ(p-1)/2}
    let eps_p = ((p - 1u32) / 2u32).is_odd();
    if alpha % 2 == 1 && beta % 2 == 1 && eps_p {
        s = -s;
    }
    if beta % 2 == 1 {
        s *= legendre(&u, p);
    }
    if alpha % 2 == 1 {
        s *= legendre(&v, p);
    }
    s
}

fn hilbert_two(a: &BigInt, b: &BigInt) -> i8 {
    let two = BigInt::from(2);
    let (alpha, u) = split(a, &two);
    let (beta, v) = split(b, &two);
    let u8m = u.mod_floor(&BigInt::from(8)).to_u32().unwrap();
    let v8m = v.mod_floor(&BigInt::from(8)).to_u32().unwrap();
    let eps = |x: u32| ((x - 1) / 2) % 2;
    let omega = |x: u32| ((x * x - 1) / 8) % 2;
    let e = eps(u8m) * eps(v8m) + (alpha as u32 % 2) * omega(v8m) + (beta as u32 % 2) * omega(u8m);
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::super::{factor, int, rat};
    use super::*;
    use rand::{Rng, SeedableRng};

    /// Independent route at v = 2: a primitive solution of z² ≡ a x² + b y²
    /// modulo 2^6, with a, b reduced to 2-adic valuation 0 or 1.
    fn hilbert_two_bruteforce(a: i64, b: i64) -> i8 {
        let reduce = |mut n: i64| {
            while n % 4 == 0 {
                n /= 4;
            }
            n
        };
        let (a, b) = (reduce(a), reduce(b));
        const M: i64 = 64;
        for x in 0..M {
            for y in 0..M {
                for z in 0..M {
                    if x % 2 == 0 && y % 2 == 0 && z % 2 == 0 {
                        continue;
                    }
                    if (a * x * x + b * y * y - z * z).rem_euclid(M) == 0 {
                        return 1;
                    }
                }
            }
        }
        -1
    }

    #[test]
    fn closed_form_at_two_matches_bruteforce() {
        for alpha in 0..2 {
            for beta in 0..2 {
                for u in [1i64, 3, 5, 7] {
                    for v in [1i64, 3, 5, 7] {
                        let a = (1 << alpha) * u;
                        let b = (1 << beta) * v;
                        let formula = hilbert_symbol(&int(a), &int(b), &Place::Two).unwrap();
                        assert_eq!(formula, hilbert_two_bruteforce(a, b), "({a},{b})_2");
                        let formula = hilbert_symbol(&int(-a), &int(b), &Place::Two).unwrap();
                        assert_eq!(formula, hilbert_two_bruteforce(-a, b), "({},{b})_2", -a);
                    }
                }
            }
        }
    }

    #[test]
    fn examples() {
        let p5 = Place::Odd(OddPrime::from_u64(5).unwrap());
        assert_eq!(hilbert_symbol(&int(3), &int(5), &p5).unwrap(), -1);
        assert_eq!(
            hilbert_symbol(&int(-1), &int(-1), &Place::Real).unwrap(),
            -1
        );
        for b in [-7i64, 2, 3, 10, -1] {
            for v in [Place::Real, Place::Two, p5.clone()] {
                assert_eq!(hilbert_symbol(&int(1), &int(b), &v).unwrap(), 1);
            }
        }
        assert!(hilbert_symbol(&int(0), &int(3), &Place::Real).is_err());
        // (-1,-1)_2 = -1 (Hamilton quaternions ramify at 2 and ∞).
        assert_eq!(hilbert_symbol(&int(-1), &int(-1), &Place::Two).unwrap(), -1);
        assert_eq!(hilbert_symbol(&rat(3, 4), &rat(5, 9), &p5).unwrap(), -1);
    }

    #[test]
    fn bimultiplicative() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let places = [
            Place::Real,
            Place::Two,
            Place::Odd(OddPrime::from_u64(3).unwrap()),
            Place::Odd(OddPrime::from_u64(7).unwrap()),
        ];
        for _ in 0..300 {
            let mut r = || loop {
                let x: i64 = rng.gen_range(-300..300);
                if x != 0 {
                    return int(x);
                }
            };
            let (a, a2, b) = (r(), r(), r());
            for v in &places {
                let lhs = hilbert_symbol(&(&a * &a2), &b, v).unwrap();
                let rhs = hilbert_symbol(&a, &b, v).unwrap() * hilbert_symbol(&a2, &b, v).unwrap();
                assert_eq!(lhs, rhs);
                assert_eq!(
                    hilbert_symbol(&a, &b, v).unwrap(),
                    hilbert_symbol(&b, &a, v).unwrap()
                );
            }
        }
    }

    #[test]
    fn product_formula_small() {
        for a in -40i64..40 {
            for b in -40i64..40 {
                if a == 0 || b == 0 {
                    continue;
                }
                let mut prod = hilbert_symbol(&int(a), &int(b), &Place::Real).unwrap()
                    * hilbert_symbol(&int(a), &int(b), &Place::Two).unwrap();
                for p in factor(&BigInt::from(a * b)).keys() {
                    if *p != BigInt::from(2) {
                        let v = Place::Odd(OddPrime::new(p.clone()).unwrap());
                        prod *= hilbert_symbol(&int(a), &int(b), &v).unwrap();
                    }
                }
                assert_eq!(prod, 1, "({a},{b})");
            }
        }
    }
}
