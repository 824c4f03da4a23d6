//! Constructive Witt maps: a spin element carrying `v₁` to `v₂`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{spin_from_vectors, SpinElement};
use crate::arith::{four_squares, is_perfect_square, rational_sqrt, rational_to_string, Rational};
use crate::clifford::{QuadForm, Vector};
use crate::error::{Error, Result};

/// Coordinate bound for the repair search in `v₂^⊥ ∩ Z^{2n}`.
pub const WITT_SEARCH_BOUND: i64 = 50;
const SEARCH_VARIABLES: usize = 5;
const SEARCH_EVALUATIONS: u64 = 4_000_000;

/// `g ∈ Spin_f(Q)` with `τ_g(v₁) = v₂`, for `f(v₁) = f(v₂) ≠ 0`.
///
/// Uses `τ_u τ_{v₁−v₂}` with `u ⊥ v₂` chosen so the norm product is a square,
/// or `τ_{v₂} τ_{v₁+v₂}` when `v₁ − v₂` is isotropic.
pub fn witt_map(form: &Arc<QuadForm>, v1: &Vector, v2: &Vector) -> Result<SpinElement> {
    form.check_vector(v1)?;
    form.check_vector(v2)?;
    let n1 = form.eval(v1);
    let n2 = form.eval(v2);
    if n1 != n2 {
        return Err(Error::NormMismatch(
            rational_to_string(&n1),
            rational_to_string(&n2),
        ));
    }
    if n1.is_zero() {
        return Err(Error::Isotropic);
    }
    if v1 == v2 {
        return Ok(SpinElement::identity(form));
    }
    let w = v1 - v2;
    let fw = form.eval(&w);
    let vectors = if fw.is_zero() {
        // f(v₁ + v₂) = 4 f(v₁), so the norm product 4 f(v₁)² is a square.
        vec![v2.clone(), v1 + v2]
    } else {
        let sum = v1 + v2;
        let fsum = form.eval(&sum);
        if !fsum.is_zero() && rational_sqrt(&(&fsum * &n1)).is_some() {
            // τ_{v₁+v₂} τ_{v₁} already has trivial spinor norm.
            vec![sum, v1.clone()]
        } else {
            let u = vector_in_class(form, v2, &fw)?;
            vec![u, w]
        }
    };
    let g = spin_from_vectors(form, &vectors)?;
    if g.act(v1) != *v2 {
        return Err(Error::Verification(
            "Witt map does not carry v₁ to v₂".into(),
        ));
    }
    Ok(g)
}

/// A nonzero `u ⊥ v` with `f(u)·target` a nonzero rational square.
pub(crate) fn vector_in_class(form: &QuadForm, v: &Vector, target: &Rational) -> Result<Vector> {
    let n = form.dim();
    let d = form.diag();
    let c: Vec<Rational> = (0..n).map(|i| &d[i] * &v[i]).collect();
    let zeros: Vec<usize> = (0..n).filter(|&i| c[i].is_zero()).collect();

    // A hyperbolic pair among the free coordinates represents every value.
    for (a, &i) in zeros.iter().enumerate() {
        for &j in &zeros[a + 1..] {
            if d[i] == -&d[j] {
                let s = target / &d[j];
                let one = Rational::from_integer(1.into());
                let two = Rational::from_integer(2.into());
                let mut u = Vector::zero(n);
                u[j] = (&s + &one) / &two;
                u[i] = (&s - &one) / &two;
                return Ok(u);
            }
        }
    }

    // Four free coordinates of one positive weight: Lagrange.
    let key = |i: &usize| d[*i].clone();
    let mut by_weight = zeros.clone();
    by_weight.sort_by_key(key);
    for group in by_weight.chunk_by(|a, b| d[*a] == d[*b]) {
        let weight = &d[group[0]];
        let ratio = target / weight;
        if group.len() >= 4 && ratio.is_positive() {
            let m = (ratio.numer() * ratio.denom())
                .to_biguint()
                .expect("positive");
            let sq = four_squares(&m);
            let mut u = Vector::zero(n);
            for (k, &i) in group.iter().take(4).enumerate() {
                u[i] = Rational::from_integer(BigInt::from(sq[k].clone()));
            }
            return Ok(u);
        }
    }

    // Integer basis of v^⊥, LLL-reduced, then a bounded search over small
    // combinations of its shortest vectors.
    let den = c.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let mut ci: Vec<BigInt> = c
        .iter()
        .map(|x| (x * Rational::from_integer(den.clone())).to_integer())
        .collect();
    let g = ci.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() {
        ci.iter_mut().for_each(|x| *x /= &g);
    }
    let ci: Vec<i128> = ci
        .iter()
        .map(|x| x.to_i128())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::SearchFailed("vector entries too large".into()))?;
    let lattice = kernel_basis(&ci);
    let mut lattice = lll_reduce(lattice);
    lattice.sort_by(|a, b| norm2(a).total_cmp(&norm2(b)));
    if lattice.is_empty() {
        return Err(Error::SearchFailed("v has no orthogonal complement".into()));
    }
    let all: Vec<Vector> = lattice
        .iter()
        .map(|b| {
            Vector::new(
                b.iter()
                    .map(|&x| Rational::from_integer(x.into()))
                    .collect(),
            )
        })
        .collect();

    // An isotropic vector n with a partner m, b(n, m) ≠ 0, represents every
    // value exactly: f(αn + m) = 2α b(n, m) + f(m).
    if let Some(u) = solve_with_isotropic(form, &all, target) {
        return Ok(u);
    }

    // Otherwise search small combinations of a few short vectors, keeping
    // one of each sign when the complement is indefinite.
    let mut chosen: Vec<usize> = Vec::new();
    for sign in [1, -1] {
        if let Some(i) = (0..all.len())
            .find(|&i| form.eval(&all[i]).signum() == Rational::from_integer(sign.into()))
        {
            chosen.push(i);
        }
    }
    for i in 0..all.len() {
        if chosen.len() >= SEARCH_VARIABLES {
            break;
        }
        if !chosen.contains(&i) {
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    let basis: Vec<Vector> = chosen.iter().map(|&i| all[i].clone()).collect();
    let vars = basis.len();
    let gram: Vec<Vec<Rational>> = basis
        .iter()
        .map(|a| basis.iter().map(|b| form.bilinear(a, b)).collect())
        .collect();
    let gden = gram
        .iter()
        .flatten()
        .fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let gint: Option<Vec<Vec<i128>>> = gram
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    (x * Rational::from_integer(gden.clone()))
                        .to_integer()
                        .to_i128()
                })
                .collect()
        })
        .collect();
    let gint = gint.ok_or_else(|| Error::SearchFailed("Gram entries too large".into()))?;
    // f(u)·target = (xᵀ G x / gden)·target; its square class is that of
    // (xᵀ G x)·gden·num(target)·den(target).
    let k = gden * target.numer() * target.denom();

    let mut x = vec![0i64; vars];
    let mut evaluations = 0u64;
    for h in 1..=WITT_SEARCH_BOUND {
        // Enumerate the shell max |xᵢ| = h, first nonzero coordinate positive.
        let mut idx = vec![-h; vars];
        loop {
            if idx.iter().any(|a| a.abs() == h) && first_nonzero_positive(&idx) {
                x.copy_from_slice(&idx);
                evaluations += 1;
                if evaluations > SEARCH_EVALUATIONS {
                    return Err(Error::SearchFailed(format!(
                        "no vector of square class {} found after {SEARCH_EVALUATIONS} candidates",
                        rational_to_string(target)
                    )));
                }
                let val = quad(&gint, &x);
                if val != 0
                    && (val > 0) == k.is_positive()
                    && is_perfect_square(&(BigInt::from(val) * &k))
                {
                    let mut u = Vector::zero(n);
                    for (b, &xi) in basis.iter().zip(&x) {
                        if xi != 0 {
                            u = &u + &b.scale(&Rational::from_integer(xi.into()));
                        }
                    }
                    return Ok(u);
                }
            }
            if !advance(&mut idx, h) {
                break;
            }
        }
    }
    Err(Error::SearchFailed(format!(
        "no vector of square class {} with coordinates ≤ {WITT_SEARCH_BOUND}",
        rational_to_string(target)
    )))
}

fn solve_with_isotropic(form: &QuadForm, basis: &[Vector], target: &Rational) -> Option<Vector> {
    const COEFF: i64 = 6;
    let mut isotropic: Option<Vector> = basis.iter().find(|b| form.eval(b).is_zero()).cloned();
    'pairs: for i in 0..basis.len() {
        if isotropic.is_some() {
            break;
        }
        for j in i + 1..basis.len() {
            for x in 1..=COEFF {
                for y in -COEFF..=COEFF {
                    if y == 0 {
                        continue;
                    }
                    let cand = &basis[i].scale(&Rational::from_integer(x.into()))
                        + &basis[j].scale(&Rational::from_integer(y.into()));
                    if form.eval(&cand).is_zero() {
                        isotropic = Some(cand);
                        break 'pairs;
                    }
                }
            }
        }
    }
    let n = isotropic?;
    let m = basis.iter().find(|b| !form.bilinear(&n, b).is_zero())?;
    let two = Rational::from_integer(2.into());
    let alpha = (target - form.eval(m)) / (two * form.bilinear(&n, m));
    let u = &n.scale(&alpha) + m;
    debug_assert_eq!(&form.eval(&u), target);
    (!u.is_zero()).then_some(u)
}

/// A basis of `{x ∈ Zⁿ : Σ cᵢ xᵢ = 0}`, from unimodular column operations
/// that reduce `c` to `(gcd, 0, …, 0)`.
fn kernel_basis(c: &[i128]) -> Vec<Vec<i128>> {
    let n = c.len();
    let mut cols: Vec<Vec<i128>> = (0..n)
        .map(|j| (0..n).map(|i| i128::from(i == j)).collect())
        .collect();
    let mut r = c.to_vec();
    // Move a nonzero entry to the front first.
    if let Some(k) = r.iter().position(|&x| x != 0) {
        r.swap(0, k);
        cols.swap(0, k);
    }
    for j in 1..n {
        if r[j] == 0 {
            continue;
        }
        let (a, b) = (r[0], r[j]);
        let e = a.extended_gcd(&b);
        let (g, s, t) = (e.gcd, e.x, e.y);
        let c0: Vec<i128> = cols[0]
            .iter()
            .zip(&cols[j])
            .map(|(x, y)| s * x + t * y)
            .collect();
        let cj: Vec<i128> = cols[0]
            .iter()
            .zip(&cols[j])
            .map(|(x, y)| (-b / g) * x + (a / g) * y)
            .collect();
        cols[0] = c0;
        cols[j] = cj;
        r[0] = g;
        r[j] = 0;
    }
    cols.split_off(1)
}

fn norm2(v: &[i128]) -> f64 {
    v.iter().map(|&x| (x as f64) * (x as f64)).sum()
}

/// Floating-point LLL (δ = 0.99) on integer row vectors. Only used to shorten
/// search bases, so rounding can cost quality but never correctness.
fn lll_reduce(mut b: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
    let m = b.len();
    if m < 2 {
        return b;
    }
    let dot = |x: &[i128], y: &[f64]| -> f64 { x.iter().zip(y).map(|(a, b)| *a as f64 * b).sum() };
    let gso = |b: &[Vec<i128>]| -> (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<f64>) {
        let m = b.len();
        let mut bs: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut mu = vec![vec![0.0; m]; m];
        let mut nrm = vec![0.0; m];
        for i in 0..m {
            let mut v: Vec<f64> = b[i].iter().map(|&x| x as f64).collect();
            for j in 0..i {
                mu[i][j] = if nrm[j] > 0.0 {
                    dot(&b[i], &bs[j]) / nrm[j]
                } else {
                    0.0
                };
                for (vk, bk) in v.iter_mut().zip(&bs[j]) {
                    *vk -= mu[i][j] * bk;
                }
            }
            nrm[i] = v.iter().map(|x| x * x).sum();
            bs.push(v);
        }
        (bs, mu, nrm)
    };
    let (_, mut mu, mut nrm) = gso(&b);
    let mut k = 1;
    let mut steps = 0;
    while k < m && steps < 100_000 {
        steps += 1;
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 && q.abs() < 1e30 {
                let qi = q as i128;
                let (head, tail) = b.split_at_mut(k);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x = x.saturating_sub(qi.saturating_mul(*y));
                }
                for l in 0..=j {
                    let mjl = if l == j { 1.0 } else { mu[j][l] };
                    mu[k][l] -= q * mjl;
                }
            }
        }
        if nrm[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * nrm[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            let (_, mu2, nrm2) = gso(&b);
            mu = mu2;
            nrm = nrm2;
            k = (k - 1).max(1);
        }
    }
    b
}

fn first_nonzero_positive(x: &[i64]) -> bool {
    x.iter().find(|a| **a != 0).is_some_and(|a| *a > 0)
}

fn advance(idx: &mut [i64], h: i64) -> bool {
    for a in idx.iter_mut() {
        if *a < h {
            *a += 1;
            return true;
        }
        *a = -h;
    }
    false
}

fn quad(g: &[Vec<i128>], x: &[i64]) -> i128 {
    let mut acc = 0i128;
    for (i, row) in g.iter().enumerate() {
        if x[i] == 0 {
            continue;
        }
        for (j, gij) in row.iter().enumerate() {
            acc += gij * x[i] as i128 * x[j] as i128;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::spin::reflection_matrix;
    use rand::{Rng, SeedableRng};

    fn form(kind: &str, n: usize) -> Arc<QuadForm> {
        Arc::new(if kind == "fa" {
            QuadForm::fa(n).unwrap()
        } else {
            QuadForm::fs(n).unwrap()
        })
    }

    #[test]
    fn examples() {
        let f = form("fa", 6);
        let v = Vector::from_ints(&[1, 2, 3, 0, 0, 1]);
        assert!(witt_map(&f, &v, &v).unwrap().multivector().is_one());
        let e1 = Vector::basis(6, 1);
        let e2 = Vector::basis(6, 2);
        let g = witt_map(&f, &e1, &e2).unwrap();
        assert_eq!(g.multivector().twisted_action(&e1).unwrap(), e2);
        assert!(matches!(
            witt_map(&f, &e1, &e2.scale(&int(2))),
            Err(Error::NormMismatch(_, _))
        ));
    }

    #[test]
    fn isotropic_difference() {
        // v₂ = e1 + e3 + e4 has f_s(v₂) = -1 and v₁ - v₂ = -(e3 + e4) isotropic.
        let f = form("fs", 6);
        let v1 = Vector::basis(6, 1);
        let v2 = Vector::from_ints(&[1, 0, 1, 1, 0, 0]);
        assert!(f.eval(&(&v1 - &v2)).is_zero());
        let g = witt_map(&f, &v1, &v2).unwrap();
        assert_eq!(g.act(&v1), v2);
    }

    fn random_vector(f: &QuadForm, rng: &mut impl Rng, bound: i64) -> Vector {
        loop {
            let v = Vector::from_ints(
                &(0..f.dim())
                    .map(|_| rng.gen_range(-bound..=bound))
                    .collect::<Vec<_>>(),
            );
            if !f.eval(&v).is_zero() {
                return v;
            }
        }
    }

    #[test]
    fn random_norm_matched_pairs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let mut checked = 0;
        for kind in ["fa", "fs"] {
            for n in [6, 8, 20] {
                let f = form(kind, n);
                for _ in 0..34 {
                    let v1 = random_vector(&f, &mut rng, 3);
                    // An independent small integer vector of the same norm.
                    let v2 = loop {
                        let v = random_vector(&f, &mut rng, 3);
                        if f.eval(&v) == f.eval(&v1) {
                            break v;
                        }
                    };
                    let g = witt_map(&f, &v1, &v2)
                        .unwrap_or_else(|e| panic!("{kind} {n} {v1:?} {v2:?}: {e}"));
                    assert_eq!(g.multivector().twisted_action(&v1).unwrap(), v2);
                    checked += 1;
                }
            }
        }
        assert!(checked >= 200);
    }

    #[test]
    fn rotated_rational_pairs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(22);
        for kind in ["fa", "fs"] {
            let f = form(kind, 8);
            for _ in 0..20 {
                let v1 = random_vector(&f, &mut rng, 2);
                let a = random_vector(&f, &mut rng, 1);
                let b = random_vector(&f, &mut rng, 1);
                let v2 = reflection_matrix(&f, &b)
                    .unwrap()
                    .apply(&reflection_matrix(&f, &a).unwrap().apply(&v1));
                let g = witt_map(&f, &v1, &v2).unwrap();
                assert_eq!(g.act(&v1), v2);
            }
        }
    }

    #[test]
    fn class_search_finds_hard_classes() {
        let f = form("fa", 6);
        let v = Vector::from_ints(&[1, 1, 1, 1, 1, 1]);
        for target in [1i64, 2, 3, 5, 6, 7, 10, 11, 14, 15, 101] {
            let u = vector_in_class(&f, &v, &int(target)).unwrap();
            assert!(f.bilinear(&u, &v).is_zero());
            assert!(
                rational_sqrt(&(f.eval(&u) * int(target))).is_some(),
                "{target}"
            );
        }
        // Negative classes are impossible for a definite form.
        assert!(matches!(
            vector_in_class(&form("fa", 4), &Vector::from_ints(&[1, 1, 1, 1]), &int(-1)),
            Err(Error::SearchFailed(_))
        ));
    }
}
