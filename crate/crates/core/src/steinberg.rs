//! Generalized Steinberg symbols in the spin double cover
//! `1 → {±1} → Spin_f(Q) → Θ_f(Q) → 1`.

use std::fmt;
use std::sync::Arc;

use num_traits::One;
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use crate::arith::{rat, rational_to_string, Rational};
use crate::clifford::QuadForm;
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::spin::{
    check_so, coroot, reflection_decompose, spin_from_vectors, spinor_norm, SpinElement,
};
use crate::suite_check;
use crate::suites::{random_rational, random_spin, random_spin_on, rng, SuiteReport};

/// A rotation with trivial spinor norm, i.e. an element of `Θ_f(Q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaElement {
    form: Arc<QuadForm>,
    m: RatMatrix,
}

impl ThetaElement {
    pub fn new(form: &Arc<QuadForm>, m: RatMatrix) -> Result<Self> {
        check_so(form, &m)?;
        let theta = spinor_norm(form, &m)?;
        if !theta.is_trivial() {
            return Err(Error::NonSquareNorm(rational_to_string(
                theta.representative(),
            )));
        }
        Ok(ThetaElement {
            form: form.clone(),
            m,
        })
    }

    pub fn from_spin(g: &SpinElement) -> Self {
        ThetaElement {
            form: g.form().clone(),
            m: g.matrix().clone(),
        }
    }

    pub fn identity(form: &Arc<QuadForm>) -> Self {
        ThetaElement {
            form: form.clone(),
            m: RatMatrix::identity(form.dim()),
        }
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.m
    }

    pub fn form(&self) -> &Arc<QuadForm> {
        &self.form
    }

    pub fn mul(&self, other: &ThetaElement) -> ThetaElement {
        ThetaElement {
            form: self.form.clone(),
            m: &self.m * &other.m,
        }
    }

    pub fn inverse(&self) -> ThetaElement {
        ThetaElement {
            form: self.form.clone(),
            m: self.m.transpose_for(&self.form),
        }
    }

    pub fn conjugate_by(&self, l: &ThetaElement) -> ThetaElement {
        l.mul(self).mul(&l.inverse())
    }

    pub fn commutes_with(&self, other: &ThetaElement) -> bool {
        &self.m * &other.m == &other.m * &self.m
    }
}

/// One of the two lifts, from a reflection factorization.
pub fn theta_lift(th: &ThetaElement) -> Result<SpinElement> {
    let vs = reflection_decompose(&th.form, &th.m)?;
    let g = spin_from_vectors(&th.form, &vs)?;
    if g.matrix() != &th.m {
        return Err(Error::Verification(
            "lift does not cover the rotation".into(),
        ));
    }
    Ok(g)
}

/// A value of the symbol in the kernel `{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SymbolValue(i8);

impl SymbolValue {
    pub const PLUS: SymbolValue = SymbolValue(1);
    pub const MINUS: SymbolValue = SymbolValue(-1);

    pub fn sign(self) -> i8 {
        self.0
    }

    pub fn mul(self, other: SymbolValue) -> SymbolValue {
        SymbolValue(self.0 * other.0)
    }

    /// Every value is its own inverse.
    pub fn inv(self) -> SymbolValue {
        self
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.0)
    }
}

/// The commutator of two commuting-mod-center spin elements, as `±1`.
pub fn lift_commutator(g1: &SpinElement, g2: &SpinElement) -> Result<SymbolValue> {
    let c = g1.commutator(g2)?;
    match c.multivector().as_scalar() {
        Some(s) if s.is_one() => Ok(SymbolValue::PLUS),
        Some(s) if s == -Rational::one() => Ok(SymbolValue::MINUS),
        _ => Err(Error::Verification(format!(
            "commutator of lifts is not central: {}",
            c.multivector()
        ))),
    }
}

/// `[M₁ : M₂]`, the commutator of lifts of two commuting elements of `Θ`.
pub fn gen_symbol(m1: &ThetaElement, m2: &ThetaElement) -> Result<SymbolValue> {
    if !m1.commutes_with(m2) {
        return Err(Error::NotCommuting);
    }
    lift_commutator(&theta_lift(m1)?, &theta_lift(m2)?)
}

/// Commuting families used by the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    /// `h₁(a)h₂(b)` over `f_s`.
    Coroot,
    /// Products of rotations in the fixed planes `(e₁,e₂), (e₃,e₄), …` over `f_a`.
    Planes,
    /// Diagonal sign changes on even subsets over `f_a`.
    Reflections,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Coroot => "coroot",
            Family::Planes => "planes",
            Family::Reflections => "reflections",
        }
    }
}

const SUITE_DIM: usize = 8;

fn family_element(fam: Family, form: &Arc<QuadForm>, rng: &mut impl Rng) -> Result<ThetaElement> {
    match fam {
        Family::Coroot => {
            let a = random_rational(rng, 12);
            let b = random_rational(rng, 12);
            let g = coroot(form, 1, &a)?.mul(&coroot(form, 2, &b)?)?;
            Ok(ThetaElement::from_spin(&g))
        }
        Family::Planes => {
            let mut g = SpinElement::identity(form);
            for plane in 0..form.dim() / 2 {
                if rng.gen_bool(0.6) {
                    let support = [2 * plane + 1, 2 * plane + 2];
                    g = g.mul(&random_spin_on(form, rng, &support, 1)?)?;
                }
            }
            Ok(ThetaElement::from_spin(&g))
        }
        Family::Reflections => {
            let dim = form.dim();
            loop {
                let mut m = RatMatrix::identity(dim);
                let mut count = 0;
                for i in 0..dim {
                    if rng.gen_bool(0.5) {
                        m[(i, i)] = -Rational::one();
                        count += 1;
                    }
                }
                if count % 2 == 0 {
                    return ThetaElement::new(form, m);
                }
            }
        }
    }
}

fn sign_set(th: &ThetaElement) -> Vec<usize> {
    (0..th.m.dim())
        .filter(|&i| th.m[(i, i)] == -Rational::one())
        .collect()
}

/// Identities of the generalized symbol checked on random commuting data.
pub fn symbol_property_suite(seed: u64) -> Result<SuiteReport> {
    let mut rng = rng(seed);
    let mut report = SuiteReport::new("steinberg", seed, Some(SUITE_DIM));
    let fa = Arc::new(QuadForm::fa(SUITE_DIM)?);
    let fs = Arc::new(QuadForm::fs(SUITE_DIM)?);
    let families = [Family::Coroot, Family::Planes, Family::Reflections];

    for n in 0..100 {
        let fam = families[n % families.len()];
        let form = if fam == Family::Coroot { &fs } else { &fa };
        let [g1, g2, g3] = [
            family_element(fam, form, &mut rng)?,
            family_element(fam, form, &mut rng)?,
            family_element(fam, form, &mut rng)?,
        ];
        let ce = || json!({ "family": fam.name(), "g1": g1.m.to_string_rows(), "g2": g2.m.to_string_rows() });
        let one = ThetaElement::identity(form);
        let s12 = gen_symbol(&g1, &g2)?;

        let unit = gen_symbol(&g1, &one)? == SymbolValue::PLUS
            && gen_symbol(&one, &g1)? == SymbolValue::PLUS;
        suite_check!(report, "identity", unit, ce());
        suite_check!(
            report,
            "antisymmetry",
            s12 == gen_symbol(&g2, &g1)?.inv(),
            ce()
        );
        let right = gen_symbol(&g1, &g2.mul(&g3))? == s12.mul(gen_symbol(&g1, &g3)?);
        suite_check!(report, "bimultiplicative_right", right, ce());
        let left =
            gen_symbol(&g1.mul(&g2), &g3)? == gen_symbol(&g1, &g3)?.mul(gen_symbol(&g2, &g3)?);
        suite_check!(report, "bimultiplicative_left", left, ce());
        let inverses = gen_symbol(&g1.inverse(), &g2)? == s12.inv()
            && gen_symbol(&g1, &g2.inverse())? == s12.inv();
        suite_check!(report, "inverse", inverses, ce());

        let (l1, l2) = (theta_lift(&g1)?, theta_lift(&g2)?);
        let negated = lift_commutator(&l1.negate(), &l2)? == s12
            && lift_commutator(&l1, &l2.negate())? == s12;
        suite_check!(report, "lift_independence", negated, ce());
        let ab = l1.multivector().gp(l2.multivector())?;
        let ba = l2.multivector().gp(l1.multivector())?;
        let anti = ab == -&ba;
        suite_check!(
            report,
            "minus_iff_anticommute",
            (s12 == SymbolValue::MINUS) == anti,
            ce()
        );
        if fam == Family::Reflections {
            // Lifts are ±e_S, e_T with e_S e_T = (−1)^{|S∩T|} e_T e_S for even |S|, |T|.
            let (s, t) = (sign_set(&g1), sign_set(&g2));
            let meet = s.iter().filter(|i| t.contains(i)).count();
            let expected = if meet % 2 == 0 {
                SymbolValue::PLUS
            } else {
                SymbolValue::MINUS
            };
            suite_check!(report, "reflection_sign_formula", s12 == expected, ce());
        }
    }

    for n in 0..20 {
        let fam = families[n % families.len()];
        let form = if fam == Family::Coroot { &fs } else { &fa };
        let g1 = family_element(fam, form, &mut rng)?;
        let g2 = family_element(fam, form, &mut rng)?;
        let l = ThetaElement::from_spin(&random_spin(form, &mut rng, 2)?);
        let ok = gen_symbol(&g1.conjugate_by(&l), &g2.conjugate_by(&l))? == gen_symbol(&g1, &g2)?;
        suite_check!(
            report,
            "conjugation_invariance",
            ok,
            json!({
                "family": fam.name(), "l": l.m.to_string_rows(),
            })
        );
    }

    // [τ_{e1}τ_{e2} : τ_{e2}τ_{e3}]: the lifts e1e2 and e2e3 anticommute.
    let neg = |idx: &[usize]| {
        let mut m = RatMatrix::identity(SUITE_DIM);
        for &i in idx {
            m[(i, i)] = -Rational::one();
        }
        ThetaElement::new(&fa, m)
    };
    let triple = gen_symbol(&neg(&[0, 1])?, &neg(&[1, 2])?)?;
    suite_check!(
        report,
        "reflection_triple_minus_one",
        triple == SymbolValue::MINUS,
        json!({ "value": triple.sign() })
    );
    let disjoint = gen_symbol(&neg(&[0, 1, 2, 3])?, &neg(&[4, 5, 6, 7])?)?;
    suite_check!(
        report,
        "disjoint_blocks_plus_one",
        disjoint == SymbolValue::PLUS,
        json!({ "value": disjoint.sign() })
    );

    let mut steinberg_params: Vec<Rational> = vec![rat(2, 1), rat(3, 1), rat(1, 2), rat(-1, 1)];
    while steinberg_params.len() < 20 {
        let a = random_rational(&mut rng, 30);
        if !a.is_one() {
            steinberg_params.push(a);
        }
    }
    for a in &steinberg_params {
        let b = Rational::one() - a;
        let h1 = ThetaElement::from_spin(&coroot(&fs, 1, a)?);
        let h2 = ThetaElement::from_spin(&coroot(&fs, 2, &b)?);
        let ok = gen_symbol(&h1, &h2)? == SymbolValue::PLUS;
        suite_check!(
            report,
            "steinberg_relation",
            ok,
            json!({ "a": rational_to_string(a) })
        );
    }
    Ok(report)
}
