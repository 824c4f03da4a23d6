//! The coroots `h₁`, `h₂` of `Spin_{f_s}` and the root vectors `X`, `Y`.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::SpinElement;
use crate::arith::{int, Rational};
use crate::clifford::{Blade, Multivector, QuadForm};
use crate::error::{Error, Result};

fn blade(idx: &[usize]) -> Blade {
    Blade::from_indices(idx).expect("distinct indices")
}

fn check_form(form: &QuadForm, i: u8) -> Result<()> {
    if form.dim() < 6 {
        return Err(Error::DimTooSmall {
            got: form.dim(),
            need: 6,
        });
    }
    if i != 1 && i != 2 {
        return Err(Error::Precondition(format!(
            "coroot index {i} is not 1 or 2"
        )));
    }
    if *form != QuadForm::fs(form.dim())? {
        return Err(Error::Precondition("coroots are defined over f_s".into()));
    }
    Ok(())
}

/// `hᵢ(t) = (t+2+t⁻¹)/4 + (t−t⁻¹)/4·e_a e_b − (t−t⁻¹)/4·e_c e_d
/// − (t−2+t⁻¹)/4·e_a e_b e_c e_d` with `(a,b,c,d) = (1,2,3,4)` for `i = 1`
/// and `(3,4,5,6)` for `i = 2`.
pub fn coroot(form: &Arc<QuadForm>, i: u8, t: &Rational) -> Result<SpinElement> {
    check_form(form, i)?;
    if t.is_zero() {
        return Err(Error::Precondition(
            "coroot parameter must be nonzero".into(),
        ));
    }
    let o = 2 * (i as usize - 1);
    let (a, b, c, d) = (o + 1, o + 2, o + 3, o + 4);
    let ti = t.recip();
    let four = int(4);
    let two = int(2);
    let plus = (t + &two + &ti) / &four;
    let minus = (t - &two + &ti) / &four;
    let odd = (t - &ti) / &four;
    let g = Multivector::from_terms(
        form,
        [
            (Blade::SCALAR, plus),
            (blade(&[a, b]), odd.clone()),
            (blade(&[c, d]), -odd),
            (blade(&[a, b, c, d]), -minus),
        ],
    )?;
    SpinElement::new(g)
}

/// `X = e₁e₃ + e₂e₃ − e₁e₄ − e₂e₄` (`i = 1`) or
/// `Y = e₃e₅ + e₄e₅ − e₃e₆ − e₄e₆` (`i = 2`).
pub fn root_vector(form: &Arc<QuadForm>, i: u8) -> Result<Multivector> {
    check_form(form, i)?;
    let o = 2 * (i as usize - 1);
    let one = Rational::one;
    Multivector::from_terms(
        form,
        [
            (blade(&[o + 1, o + 3]), one()),
            (blade(&[o + 2, o + 3]), one()),
            (blade(&[o + 1, o + 4]), -one()),
            (blade(&[o + 2, o + 4]), -one()),
        ],
    )
}

/// The exponent `c` with `h X h⁻¹ = t^c X`, searched in `[-8, 8]`.
pub fn adjoint_exponent(h: &SpinElement, root: &Multivector, t: &Rational) -> Result<i32> {
    if t.is_zero() || t.is_one() || *t == -Rational::one() {
        return Err(Error::Precondition("t must avoid 0 and ±1".into()));
    }
    let conj = h.multivector().gp(root)?.gp(&h.multivector().reverse())?;
    let (b0, c0) = root
        .terms()
        .iter()
        .next()
        .ok_or_else(|| Error::Precondition("zero root vector".into()))?;
    let lambda = conj.coeff(*b0) / c0;
    if root.scale(&lambda) != conj {
        return Err(Error::Verification(
            "conjugate is not proportional to the root vector".into(),
        ));
    }
    (-8..=8)
        .find(|&c| pow_i(t, c) == lambda)
        .ok_or_else(|| Error::Verification(format!("scaling {lambda} is not a power of {t}")))
}

/// Pairing of `hᵢ` with its own root vector.
pub fn adjoint_on_root(form: &Arc<QuadForm>, i: u8, t: &Rational) -> Result<i32> {
    adjoint_exponent(&coroot(form, i, t)?, &root_vector(form, i)?, t)
}

fn pow_i(t: &Rational, c: i32) -> Rational {
    let base = if c < 0 { t.recip() } else { t.clone() };
    num_traits::pow(base, c.unsigned_abs() as usize)
}
