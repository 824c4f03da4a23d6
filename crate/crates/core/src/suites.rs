//! Seeded verification suites and the random generators they share.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{rat, rational_to_string, reduce_rational, OddPrime, Rational};
use crate::clifford::{Blade, Multivector, QuadForm, Vector};
use crate::error::{Error, Result};
use crate::spin::{
    adjoint_on_root, coroot, is_spin, norm_product, reflection_decompose,
    reflection_decompose_in_order, reflection_matrix, spin_from_vectors, spinor_norm, SpinElement,
    SquareClass,
};
use crate::tori::{conic_point, rho_apply, trivialize, weak_approx_torus, Constraint, TorusElem};

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct CheckCount {
    pub passed: u64,
    pub failed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub dim: Option<usize>,
    pub checks: BTreeMap<String, CheckCount>,
    pub counterexample: Option<Value>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn new(suite: &str, seed: u64, dim: Option<usize>) -> Self {
        SuiteReport {
            suite: suite.into(),
            seed,
            dim,
            checks: BTreeMap::new(),
            counterexample: None,
            passed: true,
        }
    }

    /// Counts one check; the first failure is kept as the counterexample.
    pub fn check(&mut self, name: &str, ok: bool, ce: impl FnOnce() -> Value) -> bool {
        let c = self.checks.entry(name.into()).or_default();
        if ok {
            c.passed += 1;
        } else {
            c.failed += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(json!({ "check": name, "data": ce() }));
            }
            self.passed = false;
        }
        ok
    }

    pub fn count(&self, name: &str) -> u64 {
        self.checks.get(name).map_or(0, |c| c.passed)
    }
}

/// Records a check and returns the report early on failure.
#[macro_export]
#[doc(hidden)]
macro_rules! suite_check {
    ($report:expr, $name:expr, $ok:expr, $ce:expr) => {
        if !$report.check($name, $ok, || $ce) {
            return Ok($report);
        }
    };
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nonzero rational with numerator and denominator bounded by `bound`.
pub fn random_rational(rng: &mut impl Rng, bound: i64) -> Rational {
    loop {
        let n = rng.gen_range(-bound..=bound);
        if n != 0 {
            return rat(n, rng.gen_range(1..=bound));
        }
    }
}

/// A random anisotropic integer vector supported on `support` (1-based).
pub fn random_vector_on(
    form: &QuadForm,
    rng: &mut impl Rng,
    support: &[usize],
    bound: i64,
) -> Vector {
    loop {
        let mut v = Vector::zero(form.dim());
        for &i in support {
            v[i - 1] = Rational::from_integer(rng.gen_range(-bound..=bound).into());
        }
        if !form.eval(&v).is_zero() {
            return v;
        }
    }
}

pub fn random_vector(form: &QuadForm, rng: &mut impl Rng, bound: i64) -> Vector {
    let all: Vec<usize> = (1..=form.dim()).collect();
    random_vector_on(form, rng, &all, bound)
}

/// A product of `pairs` lifts of `τ_v τ_{τ_u v}` with `u, v` supported on
/// `support`; each factor has norm product `f(v)²`.
pub fn random_spin_on(
    form: &Arc<QuadForm>,
    rng: &mut impl Rng,
    support: &[usize],
    pairs: usize,
) -> Result<SpinElement> {
    let mut g = SpinElement::identity(form);
    for _ in 0..pairs {
        let v = random_vector_on(form, rng, support, 2);
        let u = random_vector_on(form, rng, support, 2);
        let w = reflection_matrix(form, &u)?.apply(&v);
        g = g.mul(&spin_from_vectors(form, &[v, w])?)?;
    }
    Ok(g)
}

pub fn random_spin(form: &Arc<QuadForm>, rng: &mut impl Rng, pairs: usize) -> Result<SpinElement> {
    let all: Vec<usize> = (1..=form.dim()).collect();
    random_spin_on(form, rng, &all, pairs)
}

fn mv_json(m: &Multivector) -> Value {
    json!(m.to_json_terms())
}

fn check_dim(dim: usize, need: usize) -> Result<()> {
    if dim % 2 == 1 || dim == 0 {
        return Err(Error::BadDimension(dim));
    }
    if dim < need {
        return Err(Error::DimTooSmall { got: dim, need });
    }
    Ok(())
}

/// Coroot identities over `f_s` on 100 random pairs of rationals.
pub fn coroot_suite(seed: u64, dim: usize) -> Result<SuiteReport> {
    check_dim(dim, 6)?;
    let form = Arc::new(QuadForm::fs(dim)?);
    let mut rng = rng(seed);
    let mut report = SuiteReport::new("coroots", seed, Some(dim));
    for _ in 0..100 {
        let t = random_rational(&mut rng, 50);
        let s = random_rational(&mut rng, 50);
        let ts = &t * &s;
        for i in [1u8, 2] {
            let (ht, hs, hts) = (
                coroot(&form, i, &t)?,
                coroot(&form, i, &s)?,
                coroot(&form, i, &ts)?,
            );
            let prod = ht.mul(&hs)?;
            suite_check!(
                report,
                "homomorphism",
                prod == hts,
                json!({
                    "i": i, "t": rational_to_string(&t), "s": rational_to_string(&s),
                    "product": mv_json(prod.multivector()), "expected": mv_json(hts.multivector()),
                })
            );
            let verified = is_spin(ht.multivector()).is_ok_and(|m| &m == ht.matrix());
            suite_check!(
                report,
                "is_spin",
                verified,
                json!({ "i": i, "t": rational_to_string(&t) })
            );
        }
        let h1 = coroot(&form, 1, &t)?;
        let h2 = coroot(&form, 2, &s)?;
        let ab = h1.mul(&h2)?;
        let ba = h2.mul(&h1)?;
        suite_check!(
            report,
            "commute",
            ab == ba,
            json!({
                "t": rational_to_string(&t), "s": rational_to_string(&s),
            })
        );
        if !(t.is_one() || t == -Rational::one()) {
            let e = adjoint_on_root(&form, 1, &t)?;
            suite_check!(
                report,
                "pairing",
                e == 2,
                json!({
                    "t": rational_to_string(&t), "exponent": e,
                })
            );
        }
    }
    Ok(report)
}

/// Clifford product laws and the spin/SO machinery over `f_a` and `f_s`.
pub fn clifford_suite(seed: u64, dim: usize) -> Result<SuiteReport> {
    check_dim(dim, 2)?;
    let mut rng = rng(seed);
    let mut report = SuiteReport::new("clifford", seed, Some(dim));
    for form in [Arc::new(QuadForm::fa(dim)?), Arc::new(QuadForm::fs(dim)?)] {
        let label = if form.is_fa() { "fa" } else { "fs" };
        for _ in 0..50 {
            let [x, y, z] = std::array::from_fn(|_| random_multivector(&form, &mut rng, 6));
            let lhs = x.gp(&y)?.gp(&z)?;
            let rhs = x.gp(&y.gp(&z)?)?;
            suite_check!(
                report,
                "associativity",
                lhs == rhs,
                json!({
                    "form": label, "x": mv_json(&x), "y": mv_json(&y), "z": mv_json(&z),
                })
            );
            let rev = x.gp(&y)?.reverse() == y.reverse().gp(&x.reverse())?;
            suite_check!(
                report,
                "reverse_antiautomorphism",
                rev,
                json!({
                    "form": label, "x": mv_json(&x), "y": mv_json(&y),
                })
            );
            let v = random_vector(&form, &mut rng, 3);
            let ev = Multivector::embed_vector(&form, &v)?;
            let sq = ev.gp(&ev)?.as_scalar() == Some(form.eval(&v));
            suite_check!(
                report,
                "vector_square",
                sq,
                json!({ "form": label, "v": v.to_strings() })
            );
        }
        for _ in 0..20 {
            let g = random_spin(&form, &mut rng, 2)?;
            let h = random_spin(&form, &mut rng, 1)?;
            let gm = is_spin(g.multivector()).map_err(|r| Error::NotSpin(r.to_string()))?;
            suite_check!(
                report,
                "is_spin",
                &gm == g.matrix(),
                json!({ "g": mv_json(g.multivector()) })
            );
            let gh = g.mul(&h)?;
            let hom = is_spin(gh.multivector()).is_ok_and(|m| &m == gh.matrix());
            suite_check!(
                report,
                "twisted_action_homomorphism",
                hom,
                json!({
                    "g": mv_json(g.multivector()), "h": mv_json(h.multivector()),
                })
            );
            let vs = reflection_decompose(&form, g.matrix())?;
            let rebuilt = spin_from_vectors(&form, &vs)?;
            let same = rebuilt.matrix() == g.matrix()
                && (rebuilt.multivector() == g.multivector()
                    || rebuilt.multivector() == g.negate().multivector());
            suite_check!(
                report,
                "decompose_relift",
                same,
                json!({ "g": mv_json(g.multivector()) })
            );
            let mut order: Vec<usize> = (0..dim).collect();
            order.reverse();
            let other = reflection_decompose_in_order(&form, g.matrix(), &order)?;
            let n1 = spinor_norm(&form, g.matrix())?;
            let n2 = SquareClass::new(norm_product(&form, &other))?;
            suite_check!(
                report,
                "spinor_norm_order_independent",
                n1 == n2 && n1.is_trivial(),
                json!({
                    "g": mv_json(g.multivector()),
                })
            );
        }
    }
    Ok(report)
}

fn random_multivector(form: &Arc<QuadForm>, rng: &mut impl Rng, terms: usize) -> Multivector {
    let dim = form.dim();
    let mask = if dim >= 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    };
    let items: Vec<(Blade, Rational)> = (0..terms)
        .map(|_| (Blade(rng.gen::<u64>() & mask), random_rational(rng, 9)))
        .collect();
    Multivector::from_terms(form, items).expect("blades inside dimension")
}

/// Torus group laws, `ρ` multiplicativity, and weak-approximation outputs.
pub fn tori_suite(seed: u64) -> Result<SuiteReport> {
    let mut rng = rng(seed);
    let mut report = SuiteReport::new("tori", seed, None);
    let gamma = TorusElem::new(BigInt::from(7), rat(3, 4), rat(1, 4))?;
    let g_inv = gamma.inv();
    suite_check!(
        report,
        "gamma_norm_one",
        gamma.mul(&g_inv)?.is_identity(),
        json!(gamma.to_json())
    );
    let primes = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31];
    for _ in 0..300 {
        let t = BigInt::from(rng.gen_range(1..60));
        let pt = |rng: &mut ChaCha8Rng| conic_point(&t, &random_rational(rng, 30));
        let (a, b, c) = (pt(&mut rng)?, pt(&mut rng)?, pt(&mut rng)?);
        let assoc = a.mul(&b)?.mul(&c)? == a.mul(&b.mul(&c)?)?;
        suite_check!(
            report,
            "associativity",
            assoc,
            json!([a.to_json(), b.to_json(), c.to_json()])
        );
        suite_check!(
            report,
            "commutativity",
            a.mul(&b)? == b.mul(&a)?,
            json!([a.to_json(), b.to_json()])
        );
        suite_check!(
            report,
            "inverse",
            a.mul(&a.inv())?.is_identity(),
            json!(a.to_json())
        );

        let p = OddPrime::from_u64(primes[rng.gen_range(0..primes.len())])?;
        let k = rng.gen_range(1..4);
        let Ok(Some(triv)) = trivialize(&t, &p, k) else {
            continue;
        };
        if let (Ok(ra), Ok(rb)) = (rho_apply(&a, &triv), rho_apply(&b, &triv)) {
            let rab = rho_apply(&a.mul(&b)?, &triv)?;
            let m = triv.modulus();
            let ok = rab == (&ra * &rb) % &m;
            suite_check!(
                report,
                "rho_multiplicative",
                ok,
                json!({
                    "p": p.to_string(), "k": k, "a": a.to_json(), "b": b.to_json(),
                })
            );
        }
        if triv.zeta_val() == 0 {
            let target = loop {
                let r = random_rational(&mut rng, 40);
                if crate::arith::is_p_unit(&r, p.value()) {
                    break r;
                }
            };
            let cons = [Constraint {
                triv: triv.clone(),
                target: target.clone(),
                precision: k,
            }];
            let out = weak_approx_torus(&t, &cons, &[])?;
            let ok = rho_apply(&out.z, &triv)? == reduce_rational(&target, &triv.modulus())?;
            suite_check!(
                report,
                "weak_approx",
                ok,
                json!({
                    "t": t.to_string(), "p": p.to_string(), "target": rational_to_string(&target),
                })
            );
        }
    }
    Ok(report)
}
