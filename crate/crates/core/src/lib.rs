//! Exact arithmetic for spin groups of the forms `Σ xᵢ²` and `Σ (x₂ᵢ² − x₂ᵢ₋₁²)`
//! over `Z[1/2]`: Clifford products, coroots, Steinberg symbols in the spin
//! double cover, norm-one tori with p-adic trivializations, approximation
//! constructions, and conjugacy-width experiments in finite quotients.

pub mod approx;
pub mod arith;
pub mod certificate;
pub mod clifford;
pub mod congruence;
pub mod error;
pub mod json;
pub mod matrix;
pub mod spin;
pub mod steinberg;
pub mod suites;
pub mod tori;

pub use arith::{OIdeal, OddPrime, Rational};
pub use clifford::{Blade, Multivector, QuadForm, Vector};
pub use error::{Error, Result};
pub use spin::SpinElement;
