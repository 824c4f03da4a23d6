//! Exit criteria. Each check prints one line; any failure fails the target.

use std::collections::{HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spinlab::approx::{approx_unit, class_number, principal_witness, torus_to_spin};
use spinlab::arith::{hilbert_symbol, Place};
use spinlab::certificate::verify_text;
use spinlab::congruence::{
    isometry_mod, run_width_matrices, sl3_commutator, sl3_commutator_identity, FiniteGroupSpec,
    ModMatrix,
};
use spinlab::json::to_canonical_string;
use spinlab::spin::{adjoint_on_root, coroot, is_spin, root_vector};
use spinlab::steinberg::{gen_symbol, symbol_property_suite, SymbolValue, ThetaElement};
use spinlab::suites::coroot_suite;
use spinlab::tori::{conic_point, TorusElem};
use spinlab::{matrix::RatMatrix, OIdeal, OddPrime, QuadForm, Rational};

type Check = std::result::Result<String, String>;

/// Number, name, time limit in seconds, body.
type Criterion = (u8, &'static str, Option<u64>, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

fn rational(rng: &mut impl Rng, bound: i64) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-bound..=bound);
        let d: i64 = rng.gen_range(1..=bound);
        if n != 0 {
            return Rational::new(n.into(), d.into());
        }
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn trial_factor(mut n: u64) -> Vec<u64> {
    let mut ps = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            ps.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        ps.push(n);
    }
    ps
}

fn primes_below(n: u64) -> Vec<u64> {
    (3..n)
        .step_by(2)
        .filter(|&p| trial_factor(p) == [p])
        .collect()
}

fn coroots() -> Check {
    let report = coroot_suite(1, 20).map_err(|e| e.to_string())?;
    ensure!(report.passed, "suite failed: {:?}", report.counterexample);
    for name in ["homomorphism", "commute", "is_spin", "pairing"] {
        ensure!(report.count(name) > 0, "no {name} checks ran");
    }

    let fs = Arc::new(QuadForm::fs(20).unwrap());
    let mut r = rng(1);
    for _ in 0..100 {
        let (t, s) = (rational(&mut r, 50), rational(&mut r, 50));
        let h = |i, x: &Rational| coroot(&fs, i, x).unwrap();
        for i in [1, 2] {
            let prod = h(i, &t).mul(&h(i, &s)).unwrap();
            ensure!(
                prod.multivector() == h(i, &(&t * &s)).multivector(),
                "h{i}(t)h{i}(s) != h{i}(ts) at t={t}, s={s}"
            );
            ensure!(
                is_spin(h(i, &t).multivector()).is_ok(),
                "is_spin rejects h{i}({t})"
            );
        }
        let a = h(1, &t).multivector().gp(h(2, &s).multivector()).unwrap();
        let b = h(2, &s).multivector().gp(h(1, &t).multivector()).unwrap();
        ensure!(a == b, "h1({t}) and h2({s}) do not commute");
        if t.abs() != Rational::one() {
            ensure!(
                adjoint_on_root(&fs, 1, &t).unwrap() == 2,
                "pairing at t={t} is not 2"
            );
            // h X h⁻¹ = t² X, computed directly.
            let g = h(1, &t);
            let x = root_vector(&fs, 1).unwrap();
            let conj = g
                .multivector()
                .gp(&x)
                .unwrap()
                .gp(g.inverse().multivector())
                .unwrap();
            ensure!(
                conj == x.scale(&(&t * &t)),
                "h1({t}) does not scale X by t²"
            );
        }
    }
    Ok("100 pairs at dim 20".into())
}

fn steinberg() -> Check {
    let report = symbol_property_suite(2).map_err(|e| e.to_string())?;
    ensure!(report.passed, "suite failed: {:?}", report.counterexample);
    for name in [
        "identity",
        "antisymmetry",
        "bimultiplicative_left",
        "bimultiplicative_right",
        "inverse",
    ] {
        ensure!(
            report.count(name) == 100,
            "{name}: {} of 100 pairs",
            report.count(name)
        );
    }

    let fa = Arc::new(QuadForm::fa(8).unwrap());
    let neg = |idx: &[usize]| {
        let mut m = RatMatrix::identity(8);
        for &i in idx {
            m[(i, i)] = -Rational::one();
        }
        ThetaElement::new(&fa, m).unwrap()
    };
    let triple = gen_symbol(&neg(&[0, 1]), &neg(&[1, 2])).map_err(|e| e.to_string())?;
    ensure!(
        triple == SymbolValue::MINUS,
        "reflection-triple symbol is {}",
        triple.sign()
    );

    let fs = Arc::new(QuadForm::fs(8).unwrap());
    let mut r = rng(2);
    let mut done = 0;
    while done < 20 {
        let a = rational(&mut r, 40);
        if a.is_one() {
            continue;
        }
        let h1 = ThetaElement::from_spin(&coroot(&fs, 1, &a).unwrap());
        let h2 = ThetaElement::from_spin(&coroot(&fs, 2, &(Rational::one() - &a)).unwrap());
        let v = gen_symbol(&h1, &h2).map_err(|e| e.to_string())?;
        ensure!(
            v == SymbolValue::PLUS,
            "[h1(a):h2(1-a)] = {} at a={a}",
            v.sign()
        );
        done += 1;
    }
    Ok("items (1)-(5) on 100 pairs, triple = -1, 20 Steinberg relations".into())
}

fn hilbert() -> Check {
    let mut r = rng(3);
    for _ in 0..500 {
        let a: i64 = loop {
            let x = r.gen_range(-10_000..=10_000);
            if x != 0 {
                break x;
            }
        };
        let b: i64 = loop {
            let x = r.gen_range(-10_000..=10_000);
            if x != 0 {
                break x;
            }
        };
        let (qa, qb) = (int(a), int(b));
        let mut places = vec![Place::Real, Place::Two];
        let mut odd: Vec<u64> = trial_factor(a.unsigned_abs())
            .into_iter()
            .chain(trial_factor(b.unsigned_abs()))
            .filter(|&p| p != 2)
            .collect();
        odd.sort_unstable();
        odd.dedup();
        places.extend(
            odd.iter()
                .map(|&p| Place::Odd(OddPrime::from_u64(p).unwrap())),
        );
        let product: i64 = places
            .iter()
            .map(|v| hilbert_symbol(&qa, &qb, v).unwrap() as i64)
            .product();
        ensure!(
            product == 1,
            "product over places of ({a},{b}) is {product}"
        );
        // Primes not dividing 2ab contribute +1.
        let clean = primes_below(100)
            .into_iter()
            .find(|p| !odd.contains(p))
            .unwrap();
        ensure!(
            hilbert_symbol(&qa, &qb, &Place::Odd(OddPrime::from_u64(clean).unwrap())).unwrap() == 1,
            "({a},{b})_{clean} != 1"
        );
    }
    Ok("500 pairs".into())
}

fn reduce(r: &Rational, m: &BigInt) -> BigInt {
    let d = r.denom().mod_floor(m);
    let inv = d.extended_gcd(m).x.mod_floor(m);
    (r.numer() * inv).mod_floor(m)
}

fn approx_units() -> Check {
    let mut r = rng(4);
    let odd_primes = primes_below(10_000);
    for n in 0..100 {
        let m: u64 = loop {
            let x = r.gen_range(1..2_000u64) * 2 + 1;
            if n % 10 != 0 || x > 1 {
                break if n % 10 == 0 {
                    3u64.pow(r.gen_range(1..6))
                } else {
                    x
                };
            }
        };
        let a = loop {
            let x = rational(&mut r, 500);
            if x.numer().gcd(&m.into()).is_one() && x.denom().gcd(&m.into()).is_one() {
                break x;
            }
        };
        let ideal = OIdeal::new(m.into()).unwrap();
        let ap = approx_unit(&a, &ideal).map_err(|e| format!("a={a}, I={m}: {e}"))?;
        let text = to_canonical_string(&ap.certificate).unwrap();
        let report = verify_text(&text).map_err(|e| e.to_string())?;
        ensure!(
            report.passed,
            "certificate for a={a}, I={m} fails re-verification"
        );

        let z = &ap.z[0];
        let t = ap.t.clone();
        ensure!(
            z.x() * z.x() + Rational::from_integer(t.clone()) * z.y() * z.y() == Rational::one(),
            "z off the conic"
        );
        for &p in &odd_primes {
            let p = BigInt::from(p);
            ensure!(
                !z.x().denom().is_multiple_of(&p) && !z.y().denom().is_multiple_of(&p),
                "z not integral at {p}"
            );
        }
        let mut den = z.x().denom().lcm(z.y().denom());
        while den.is_even() {
            den >>= 1;
        }
        ensure!(den.is_one(), "denominator of z has odd part {den}");
        // ρ(z) = x + yζ with ζ² = −t, so (a − x)² + t y² ≡ 0 at every prime power of I.
        for p in trial_factor(m) {
            let mut q = p;
            while m.is_multiple_of(q * p) {
                q *= p;
            }
            let q = BigInt::from(q);
            let (am, xm, ym) = (reduce(&a, &q), reduce(z.x(), &q), reduce(z.y(), &q));
            let lhs = ((&am - &xm) * (&am - &xm) + &t * &ym * &ym).mod_floor(&q);
            ensure!(lhs.is_zero(), "ρ(z) ≢ a mod {q} for a={a}, I={m}");
        }
    }
    Ok("100 instances, integral at every prime < 10^4".into())
}

fn spin_pairs() -> Check {
    let mut r = rng(5);
    for _ in 0..50 {
        let t = BigInt::from(r.gen_range(1..300i64));
        let z1 = conic_point(&t, &rational(&mut r, 20)).unwrap();
        let z2 = conic_point(&t, &rational(&mut r, 20)).unwrap();
        let sp = torus_to_spin(&t, &z1, &z2, 20).map_err(|e| format!("t={t}: {e}"))?;
        let (g1, g2) = (sp.g1.multivector(), sp.g2.multivector());
        ensure!(
            g1.gp(g2).unwrap() == g2.gp(g1).unwrap(),
            "g1 g2 != g2 g1 at t={t}"
        );
        for g in [g1, g2] {
            ensure!(g.gp(&g.reverse()).unwrap().is_one(), "g g' != 1 at t={t}");
            ensure!(is_spin(g).is_ok(), "is_spin rejects lift at t={t}");
        }
        let text = to_canonical_string(&sp.to_json()).unwrap();
        ensure!(
            verify_text(&text).map_err(|e| e.to_string())?.passed,
            "spin pair at t={t} fails verification"
        );
    }
    Ok("50 pairs at dim 20".into())
}

fn kronecker(d: i64, n: i64) -> i64 {
    // χ_D(n) for a fundamental discriminant D via the Jacobi symbol and χ_D(2).
    let mut n = n;
    let mut s = 1;
    while n % 2 == 0 {
        n /= 2;
        if d % 2 == 0 {
            return 0;
        }
        s *= if d.rem_euclid(8) == 1 { 1 } else { -1 };
    }
    s * jacobi(d, n)
}

fn jacobi(a: i64, n: i64) -> i64 {
    let (mut a, mut n, mut s) = (a.rem_euclid(n), n, 1);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                s = -s;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            s = -s;
        }
        a %= n;
    }
    if n == 1 {
        s
    } else {
        0
    }
}

fn analytic_class_number(d: i64) -> i64 {
    // h(D) = −(1/|D|) Σ_{a=1}^{|D|} χ_D(a)·a for fundamental D < −4.
    let n = -d;
    let s: i64 = (1..=n).map(|a| kronecker(d, a) * a).sum();
    -s / n
}

fn class_numbers() -> Check {
    ensure!(
        class_number(-7).map_err(|e| e.to_string())? == 1,
        "class_number(-7) != 1"
    );
    for d in [
        -7i64, -8, -11, -15, -19, -20, -23, -24, -31, -39, -40, -43, -47, -52, -56, -67, -71, -84,
        -163, -231,
    ] {
        let h = class_number(d).unwrap() as i64;
        ensure!(
            h == analytic_class_number(d),
            "class_number({d}) = {h}, analytic value {}",
            analytic_class_number(d)
        );
    }
    let split = |t: i64| {
        primes_below(500)
            .into_iter()
            .filter(move |&p| t % p as i64 != 0 && legendre_i(-t, p) == 1)
    };
    let mut count = 0;
    for p in split(7) {
        let w = principal_witness(7, &OddPrime::from_u64(p).unwrap()).map_err(|e| e.to_string())?;
        let (x, y) = w.ok_or(format!("no witness at p={p}"))?;
        ensure!(
            x * x + x * y + 2 * y * y == p as i64,
            "witness ({x},{y}) has wrong norm at p={p}"
        );
        count += 1;
    }
    // Class number one exactly when every split prime is principal.
    for t in [1i64, 2, 3, 5, 6, 10, 11, 13, 19, 23] {
        let d = if t % 4 == 3 { -t } else { -4 * t };
        let all = split(t).all(|p| {
            principal_witness(t, &OddPrime::from_u64(p).unwrap())
                .unwrap()
                .is_some()
        });
        ensure!(
            all == (class_number(d).unwrap() == 1),
            "t={t}: witness coverage disagrees with h({d})"
        );
    }
    Ok(format!("h(-7) = 1, {count} split primes principal"))
}

fn legendre_i(a: i64, p: u64) -> i64 {
    let p = p as i64;
    let mut r = 1i64;
    let (mut b, mut e) = (a.rem_euclid(p), (p - 1) / 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == p - 1 {
        -1
    } else {
        r
    }
}

fn gamma() -> Check {
    let t = BigInt::from(7);
    let g = TorusElem::new(
        t.clone(),
        Rational::new(3.into(), 4.into()),
        Rational::new(1.into(), 4.into()),
    )
    .map_err(|e| e.to_string())?;
    let (x, y) = (g.x().clone(), g.y().clone());
    ensure!(&x * &x + int(7) * &y * &y == Rational::one(), "N(γ) != 1");
    let inv = g.inv();
    ensure!(g.mul(&inv).unwrap().is_identity(), "γ γ⁻¹ != 1");
    // (3 + √−7)(3 − √−7) = 16, so γ⁻¹ = (3 − √−7)/4.
    ensure!(*inv.x() == x && *inv.y() == -&y, "γ⁻¹ is not the conjugate");
    for c in [&x, &y, inv.x(), inv.y()] {
        let d = c.denom().to_u64().unwrap();
        ensure!(d.is_power_of_two(), "coordinate {c} not in Z[1/2]");
    }
    ensure!(
        !g.is_identity() && !g.mul(&g).unwrap().is_identity(),
        "γ has order ≤ 2"
    );
    Ok("γ ∈ T_7(O), γ⁻¹ ∈ O[√−7]".into())
}

fn isometries() -> Check {
    let mut cases = 0;
    for p in [3u64, 5, 7, 11] {
        for k in 1..=6u32 {
            let m = p.pow(k) as u128;
            let mat = isometry_mod(&OddPrime::from_u64(p).unwrap(), k, 20)
                .map_err(|e| format!("p={p}, k={k}: {e}"))?;
            ensure!(mat.dim() == 20 && mat.modulus() as u128 == m, "shape");
            for i in 0..20 {
                for j in 0..20 {
                    let s: u128 = (0..20)
                        .map(|l| mat.get(l, i) as u128 * mat.get(l, j) as u128 % m)
                        .sum::<u128>()
                        % m;
                    let want = match (i == j, i % 2) {
                        (false, _) => 0,
                        (true, 0) => m - 1,
                        (true, _) => 1,
                    };
                    ensure!(s == want, "p={p}, k={k}: (MᵀM)[{i}][{j}] = {s}");
                }
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} moduli at dim 20"))
}

type Mat = Vec<u32>;

fn mat_mul(a: &Mat, b: &Mat, n: usize, m: u64) -> Mat {
    let mut c = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            let s: u64 = (0..n)
                .map(|l| a[i * n + l] as u64 * b[l * n + j] as u64 % m)
                .sum();
            c[i * n + j] = (s % m) as u32;
        }
    }
    c
}

fn closure(gens: &[Mat], n: usize, m: u64) -> HashSet<Mat> {
    let mut id = vec![0u32; n * n];
    for i in 0..n {
        id[i * n + i] = 1;
    }
    let mut seen = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = mat_mul(&x, g, n, m);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

fn widths() -> Check {
    let form = Arc::new(QuadForm::fs(4).unwrap());
    let spec = FiniteGroupSpec::standard(&form, 3).map_err(|e| e.to_string())?;
    let (n, m) = (4usize, 3u64);
    let gens: Vec<Mat> = spec
        .quotient_generators()
        .unwrap()
        .iter()
        .map(|g| g.entries().to_vec())
        .collect();
    let group: Vec<Mat> = closure(&gens, n, m).into_iter().collect();
    let index: HashMap<&Mat, usize> = group.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let id = (0..n * n)
        .map(|i| (i % (n + 1) == 0) as u32)
        .collect::<Mat>();
    let inv: Vec<usize> = group
        .iter()
        .map(|g| {
            group
                .iter()
                .position(|h| mat_mul(g, h, n, m) == id)
                .unwrap()
        })
        .collect();

    let mut class_of = vec![usize::MAX; group.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..group.len() {
        if class_of[x] != usize::MAX {
            continue;
        }
        let mut class: Vec<usize> = group
            .iter()
            .enumerate()
            .map(|(l, g)| index[&mat_mul(&mat_mul(g, &group[x], n, m), &group[inv[l]], n, m)])
            .collect();
        class.sort_unstable();
        class.dedup();
        for &c in &class {
            class_of[c] = classes.len();
        }
        classes.push(class);
    }

    let mut worst = 0;
    let mut tested = 0;
    for class in classes.iter().filter(|c| c.len() > 1) {
        let rep = ModMatrix::from_rows(
            &group[class[0]]
                .chunks(n)
                .map(|r| r.iter().map(|&v| v as i64).collect())
                .collect::<Vec<_>>(),
            m as u32,
        )
        .unwrap();
        let run = run_width_matrices(&spec, &[rep], 10).map_err(|e| e.to_string())?;
        ensure!(
            run.report.group_order as usize == group.len(),
            "group order {} vs {}",
            run.report.group_order,
            group.len()
        );
        let w = run.report.width.ok_or("width exceeds 10".to_string())?;
        worst = worst.max(w);

        let mut gcl: Vec<Mat> = class.iter().map(|&c| group[c].clone()).collect();
        gcl.extend(class.iter().map(|&c| group[inv[c]].clone()));
        gcl.push(id.clone());
        let sub = closure(&gcl, n, m);
        let reached: HashSet<Mat> = run.reached.iter().map(|g| g.entries().to_vec()).collect();
        let lib_gcl: HashSet<Mat> = run.gcl.iter().map(|g| g.entries().to_vec()).collect();
        ensure!(
            lib_gcl == gcl.iter().cloned().collect(),
            "gcl differs from the oracle class"
        );
        ensure!(
            reached == sub,
            "BFS closure has {} elements, oracle {}",
            reached.len(),
            sub.len()
        );
        ensure!(
            run.report.subgroup_order as usize == sub.len(),
            "reported subgroup order {}",
            run.report.subgroup_order
        );
        tested += 1;
    }
    ensure!(tested > 0, "no non-central classes");
    Ok(format!(
        "{tested} non-central classes of {}, max width {worst}",
        group.len()
    ))
}

fn sl3() -> Check {
    let mut r = rng(10);
    for _ in 0..1000 {
        let m: u32 = r.gen_range(1..(1u32 << 30)) * 2 + 1;
        let (t, s): (i64, i64) = (
            r.gen_range(-1_000_000_000..1_000_000_000),
            r.gen_range(-1_000_000_000..1_000_000_000),
        );
        ensure!(
            sl3_commutator_identity(t, s, m).map_err(|e| e.to_string())?,
            "identity fails at t={t}, s={s}, m={m}"
        );
        // Direct: e12(t) e23(s) e12(−t) e23(−s) with the product expanded.
        let mm = m as i128;
        let e = |i: usize, j: usize, a: i64| {
            let mut x = [[0i128; 3]; 3];
            for (d, row) in x.iter_mut().enumerate() {
                row[d] = 1;
            }
            x[i][j] = (a as i128).rem_euclid(mm);
            x
        };
        let mul = |a: [[i128; 3]; 3], b: [[i128; 3]; 3]| {
            let mut c = [[0i128; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    c[i][j] = (0..3).map(|l| a[i][l] * b[l][j] % mm).sum::<i128>() % mm;
                }
            }
            c
        };
        let c = mul(mul(mul(e(0, 1, t), e(1, 2, s)), e(0, 1, -t)), e(1, 2, -s));
        let lib = sl3_commutator(t, s, m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                ensure!(
                    c[i][j] == lib.get(i, j) as i128,
                    "entry ({i},{j}) at t={t}, s={s}, m={m}"
                );
            }
        }
        ensure!(
            c[0][2] == (t as i128 * s as i128).rem_euclid(mm),
            "corner is not ts"
        );
    }
    Ok("1000 random (t, s, m)".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "coroot suite", Some(5), coroots),
        (2, "steinberg suite", Some(10), steinberg),
        (3, "hilbert product formula", Some(5), hilbert),
        (4, "approx_unit end-to-end", Some(60), approx_units),
        (5, "torus_to_spin", Some(60), spin_pairs),
        (6, "class number of -7", None, class_numbers),
        (7, "gamma norm-one unit", None, gamma),
        (8, "isometry_mod", Some(10), isometries),
        (9, "width bfs sanity", Some(120), widths),
        (10, "sl3 commutator identity", None, sl3),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failures = 0;
    for (id, name, limit, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|s| name.contains(s.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let over = limit.is_some_and(|l| elapsed > Duration::from_secs(l));
        let limit_text = limit.map_or("no limit".to_string(), |l| format!("limit {l} s"));
        let (ok, detail) = match outcome {
            Ok(d) if over => (false, format!("{d}; over time")),
            Ok(d) => (true, d),
            Err(e) => (false, e),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} #{id:<2} {name:<26} {:>7.2} s ({limit_text})  {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
