//! Conjugacy width of generalized conjugacy classes in finite quotients
//! `Spin_f(Z/m)` and their images in `SO_f(Z/m)`.

use std::collections::HashSet;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{form_residues, inv_mod, ModMatrix, ModMultivector};
use crate::arith::{factor, OddPrime};
use crate::clifford::{Blade, Multivector, QuadForm};
use crate::error::{Error, Result};

pub const DEFAULT_GROUP_CAP: usize = 10_000_000;
pub const MAX_SPEC_DIM: usize = 8;
pub const MAX_SPEC_MODULUS: u64 = 27;

/// Which group the BFS runs in: action matrices (`g` and `−g` identified) or
/// the Clifford elements themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Quotient,
    Cover,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Quotient => "quotient",
            Convention::Cover => "cover",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WidthMode {
    Exact,
    Sampled,
}

/// In sampled mode `group_order`, `class_size` and the layer sizes count only
/// what was reached before the enumeration cap; they are lower bounds and
/// `width` is absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthReport {
    pub group_order: u64,
    pub class_size: u64,
    pub gcl_size: u64,
    pub subgroup_order: u64,
    pub width: Option<u32>,
    pub layers: Vec<u64>,
    pub mode: WidthMode,
    pub convention: Convention,
    pub cap: u32,
    pub central: bool,
}

/// Generated subgroup of `Spin_f(Z/m)` for a small form and modulus.
#[derive(Debug, Clone)]
pub struct FiniteGroupSpec {
    form: Arc<QuadForm>,
    modulus: u64,
    generators: Vec<ModMultivector>,
    group_cap: usize,
}

impl FiniteGroupSpec {
    pub fn new(
        form: &Arc<QuadForm>,
        modulus: u64,
        generators: Vec<ModMultivector>,
    ) -> Result<Self> {
        let dim = form.dim();
        if dim > MAX_SPEC_DIM {
            return Err(Error::Precondition(format!(
                "dimension {dim} exceeds {MAX_SPEC_DIM}"
            )));
        }
        prime_power(modulus)?;
        if modulus > MAX_SPEC_MODULUS {
            return Err(Error::Precondition(format!(
                "modulus {modulus} exceeds {MAX_SPEC_MODULUS}"
            )));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.modulus() != modulus || g.form().as_ref() != form.as_ref() {
                return Err(Error::Precondition(format!(
                    "generator {i} has the wrong form or modulus"
                )));
            }
            g.check_spin()
                .map_err(|e| Error::NotSpin(format!("generator {i}: {e}")))?;
        }
        Ok(FiniteGroupSpec {
            form: form.clone(),
            modulus,
            generators,
            group_cap: DEFAULT_GROUP_CAP,
        })
    }

    /// Root elements `1 + a·b` for the split forms `f_s` and `f_a`, where
    /// `a, b` run over orthogonal isotropic vectors `uᵢ = c₂ᵢ₋₁ + c₂ᵢ`,
    /// `wᵢ = (c₂ᵢ − c₂ᵢ₋₁)/2` from different hyperbolic planes. The frame `c`
    /// is the standard basis for `f_s` and the columns of [`isometry_mod`]
    /// for `f_a`.
    ///
    /// [`isometry_mod`]: super::isometry_mod
    pub fn standard(form: &Arc<QuadForm>, modulus: u64) -> Result<Self> {
        let (p, k) = prime_power(modulus)?;
        let n = form.dim();
        if n < 4 {
            return Err(Error::DimTooSmall { got: n, need: 4 });
        }
        let frame: Vec<Vec<u64>> = if form.as_ref() == &QuadForm::fs(n)? {
            (0..n)
                .map(|j| (0..n).map(|i| u64::from(i == j)).collect())
                .collect()
        } else if form.as_ref() == &QuadForm::fa(n)? {
            let m = super::isometry_mod(&OddPrime::from_u64(p)?, k, n)?;
            (0..n)
                .map(|j| (0..n).map(|i| m.get(i, j) as u64).collect())
                .collect()
        } else {
            return Err(Error::Precondition(
                "standard generators need f_a or f_s".into(),
            ));
        };
        let half = inv_mod(2, modulus).expect("odd modulus");
        let vector = |c: &[u64]| -> ModMultivector {
            let mut x = ModMultivector::zero(form, modulus).expect("odd modulus");
            for (i, v) in c.iter().enumerate() {
                x.add_term(Blade(1 << i), *v);
            }
            x
        };
        let planes: Vec<[ModMultivector; 2]> = (0..n / 2)
            .map(|i| {
                let (c1, c2) = (&frame[2 * i], &frame[2 * i + 1]);
                let u: Vec<u64> = (0..n).map(|r| (c1[r] + c2[r]) % modulus).collect();
                let w: Vec<u64> = (0..n)
                    .map(|r| super::mul_mod((c2[r] + modulus - c1[r]) % modulus, half, modulus))
                    .collect();
                [vector(&u), vector(&w)]
            })
            .collect();
        let one = ModMultivector::one(form, modulus)?;
        let mut gens = Vec::new();
        for i in 0..planes.len() {
            for j in i + 1..planes.len() {
                for a in &planes[i] {
                    for b in &planes[j] {
                        gens.push(one_plus(&one, &a.gp_mod(b)?)?);
                    }
                }
            }
        }
        Self::new(form, modulus, gens)
    }

    pub fn with_group_cap(mut self, cap: usize) -> Self {
        self.group_cap = cap;
        self
    }

    pub fn form(&self) -> &Arc<QuadForm> {
        &self.form
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generators(&self) -> &[ModMultivector] {
        &self.generators
    }

    pub fn group_cap(&self) -> usize {
        self.group_cap
    }

    /// `id`, a blade `e<digits>` such as `e12`, or `gen<k>`; a leading `-` negates.
    pub fn parse_element(&self, s: &str) -> Result<ModMultivector> {
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let bad = || Error::Parse(format!("cannot parse element {s:?}"));
        let x = if body == "id" {
            ModMultivector::one(&self.form, self.modulus)?
        } else if let Some(k) = body.strip_prefix("gen") {
            let k: usize = k.parse().map_err(|_| bad())?;
            self.generators.get(k).cloned().ok_or_else(|| {
                Error::Precondition(format!(
                    "generator {k} out of range (have {})",
                    self.generators.len()
                ))
            })?
        } else if let Some(digits) = body.strip_prefix('e') {
            let idx = digits
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<Vec<_>>>()
                .filter(|v| !v.is_empty())
                .ok_or_else(bad)?;
            let b = Multivector::basis_product(&self.form, &idx)?;
            ModMultivector::from_multivector(&b, self.modulus)?
        } else {
            return Err(bad());
        };
        Ok(if neg { x.neg() } else { x })
    }
}

fn one_plus(one: &ModMultivector, x: &ModMultivector) -> Result<ModMultivector> {
    let mut out = one.clone();
    for (b, c) in x.terms() {
        out.add_term(*b, *c);
    }
    Ok(out)
}

fn prime_power(m: u64) -> Result<(u64, u32)> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(Error::Arith(crate::arith::ArithError::BadModulus(m.into())));
    }
    let f = factor(&BigInt::from(m));
    if f.len() != 1 {
        return Err(Error::Precondition(format!("{m} is not a prime power")));
    }
    let (p, k) = f.into_iter().next().expect("one prime");
    Ok((p.try_into().expect("divides m"), k))
}

/// Group operations for one convention.
pub trait GroupCtx {
    type Elem: Clone + Eq + Hash;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

pub struct QuotientCtx {
    n: usize,
    m: u32,
    diag: Vec<u32>,
}

impl GroupCtx for QuotientCtx {
    type Elem = ModMatrix;

    fn identity(&self) -> ModMatrix {
        ModMatrix::identity(self.n, self.m).expect("modulus ≥ 3")
    }

    fn mul(&self, a: &ModMatrix, b: &ModMatrix) -> ModMatrix {
        a.mul(b)
    }

    fn inv(&self, a: &ModMatrix) -> ModMatrix {
        a.orthogonal_inverse(&self.diag).expect("unit form entries")
    }
}

pub struct CoverCtx {
    m: u64,
    blades: usize,
    /// `table[a·2ⁿ + b]`: residue of the scalar in `e_a e_b = ± d·e_{a⊕b}`.
    table: Vec<u64>,
}

/// A cover element as dense residues indexed by blade bitmask.
pub type CoverElem = Vec<u32>;

impl CoverCtx {
    fn new(form: &QuadForm, m: u64) -> Result<Self> {
        let n = form.dim();
        let diag = ModMultivector::one(&Arc::new(form.clone()), m)?.diag_residues()?;
        let blades = 1usize << n;
        let mut table = vec![0u64; blades * blades];
        for a in 0..blades {
            for b in 0..blades {
                let mut c = 1u64;
                let mut common = a & b;
                while common != 0 {
                    c = super::mul_mod(c, diag[common.trailing_zeros() as usize], m);
                    common &= common - 1;
                }
                if Blade::reorder_sign(Blade(a as u64), Blade(b as u64)) < 0 {
                    c = (m - c) % m;
                }
                table[a * blades + b] = c;
            }
        }
        Ok(CoverCtx { m, blades, table })
    }

    pub fn from_mod(&self, x: &ModMultivector) -> CoverElem {
        let mut out = vec![0u32; self.blades];
        for (b, c) in x.terms() {
            out[b.0 as usize] = *c as u32;
        }
        out
    }

    fn reverse(&self, a: &CoverElem) -> CoverElem {
        let m = self.m as u32;
        a.iter()
            .enumerate()
            .map(|(b, &c)| {
                if c != 0 && Blade(b as u64).reverse_sign() < 0 {
                    m - c
                } else {
                    c
                }
            })
            .collect()
    }
}

impl GroupCtx for CoverCtx {
    type Elem = CoverElem;

    fn identity(&self) -> CoverElem {
        let mut out = vec![0u32; self.blades];
        out[0] = 1;
        out
    }

    fn mul(&self, x: &CoverElem, y: &CoverElem) -> CoverElem {
        let m = self.m;
        let nx: Vec<(usize, u64)> = x
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(b, &c)| (b, c as u64))
            .collect();
        let ny: Vec<(usize, u64)> = y
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(b, &c)| (b, c as u64))
            .collect();
        let mut acc = vec![0u64; self.blades];
        for &(a, ca) in &nx {
            let row = &self.table[a * self.blades..(a + 1) * self.blades];
            for &(b, cb) in &ny {
                let slot = &mut acc[a ^ b];
                *slot = (*slot + ca * cb % m * row[b]) % m;
            }
        }
        acc.into_iter().map(|c| c as u32).collect()
    }

    fn inv(&self, a: &CoverElem) -> CoverElem {
        let m = self.m;
        let rev = self.reverse(a);
        let n = self.mul(a, &rev);
        let norm = n[0] as u64;
        assert!(
            norm != 0 && n[1..].iter().all(|&c| c == 0),
            "element is not in the Clifford group"
        );
        let s = inv_mod(norm, m).expect("unit norm");
        rev.into_iter()
            .map(|c| super::mul_mod(c as u64, s, m) as u32)
            .collect()
    }
}

/// Full result of a width computation.
#[derive(Debug, Clone)]
pub struct WidthRun<E> {
    pub report: WidthReport,
    /// The enumerated group (a prefix of it in sampled mode).
    pub group: Vec<E>,
    /// `gcl(x)`: conjugates of the elements and their inverses, and `1`.
    pub gcl: Vec<E>,
    /// `gcl^w`, which is the generated subgroup when the width is finite.
    pub reached: Vec<E>,
}

/// Closure of `{1}` under right multiplication by `gens`, stopping at `cap`.
pub fn enumerate<C: GroupCtx>(ctx: &C, gens: &[C::Elem], cap: usize) -> (Vec<C::Elem>, bool) {
    let one = ctx.identity();
    let mut seen: HashSet<C::Elem> = HashSet::from([one.clone()]);
    let mut all = vec![one];
    let mut i = 0;
    while i < all.len() {
        let a = all[i].clone();
        for g in gens {
            let b = ctx.mul(&a, g);
            if !seen.contains(&b) {
                if all.len() >= cap {
                    return (all, false);
                }
                seen.insert(b.clone());
                all.push(b);
            }
        }
        i += 1;
    }
    (all, true)
}

fn bfs<C: GroupCtx>(
    ctx: &C,
    gens: &[C::Elem],
    xs: &[C::Elem],
    cap: u32,
    group_cap: usize,
    convention: Convention,
) -> WidthRun<C::Elem> {
    let (group, complete) = enumerate(ctx, gens, group_cap);
    let one = ctx.identity();
    let mut class: HashSet<C::Elem> = HashSet::new();
    let mut gcl: Vec<C::Elem> = vec![one.clone()];
    let mut gcl_seen: HashSet<C::Elem> = HashSet::from([one.clone()]);
    for x in xs {
        for g in &group {
            let c = ctx.mul(&ctx.mul(g, x), &ctx.inv(g));
            class.insert(c.clone());
            for y in [ctx.inv(&c), c] {
                if gcl_seen.insert(y.clone()) {
                    gcl.push(y);
                }
            }
        }
    }
    let central = xs
        .iter()
        .all(|x| group.iter().all(|g| ctx.mul(g, x) == ctx.mul(x, g)));

    let mut seen: HashSet<C::Elem> = HashSet::from([one.clone()]);
    let mut reached = vec![one];
    let mut frontier = reached.clone();
    let mut layers = vec![1u64];
    let mut n = 0u32;
    let width = loop {
        let mut next = Vec::new();
        let mut truncated = false;
        'outer: for a in &frontier {
            for c in &gcl {
                let b = ctx.mul(a, c);
                if !seen.contains(&b) {
                    if seen.len() >= group_cap {
                        truncated = true;
                        break 'outer;
                    }
                    seen.insert(b.clone());
                    next.push(b);
                }
            }
        }
        if next.is_empty() && !truncated {
            break Some(n);
        }
        if n == cap || truncated {
            break None;
        }
        n += 1;
        reached.extend(next.iter().cloned());
        layers.push(reached.len() as u64);
        frontier = next;
    };
    let mode = if complete {
        WidthMode::Exact
    } else {
        WidthMode::Sampled
    };
    let report = WidthReport {
        group_order: group.len() as u64,
        class_size: class.len() as u64,
        gcl_size: gcl.len() as u64,
        subgroup_order: if width.is_some() {
            reached.len() as u64
        } else {
            0
        },
        width: if complete { width } else { None },
        layers,
        mode,
        convention,
        cap,
        central,
    };
    WidthRun {
        report,
        group,
        gcl,
        reached,
    }
}

impl FiniteGroupSpec {
    pub fn quotient_ctx(&self) -> Result<QuotientCtx> {
        let m = self.modulus as u32;
        Ok(QuotientCtx {
            n: self.form.dim(),
            m,
            diag: form_residues(&self.form, m)?,
        })
    }

    pub fn cover_ctx(&self) -> Result<CoverCtx> {
        CoverCtx::new(&self.form, self.modulus)
    }

    fn check_element(&self, x: &ModMultivector) -> Result<()> {
        if x.modulus() != self.modulus || x.form().as_ref() != self.form.as_ref() {
            return Err(Error::Precondition(
                "element has the wrong form or modulus".into(),
            ));
        }
        if !x.is_even() {
            return Err(Error::Precondition("element must be even".into()));
        }
        x.action_matrix().map(|_| ())
    }
}

impl FiniteGroupSpec {
    pub fn quotient_generators(&self) -> Result<Vec<ModMatrix>> {
        self.generators
            .iter()
            .map(ModMultivector::action_matrix)
            .collect()
    }

    /// Image of the group in `SO_f(Z/m)`; the flag is false if the group cap
    /// stopped the enumeration.
    pub fn enumerate_quotient(&self) -> Result<(Vec<ModMatrix>, bool)> {
        Ok(enumerate(
            &self.quotient_ctx()?,
            &self.quotient_generators()?,
            self.group_cap,
        ))
    }
}

/// Width run in the quotient convention for the union of the classes of `xs`.
pub fn run_width_quotient(
    spec: &FiniteGroupSpec,
    xs: &[ModMultivector],
    cap: u32,
) -> Result<WidthRun<ModMatrix>> {
    let mut ms = Vec::with_capacity(xs.len());
    for x in xs {
        spec.check_element(x)?;
        ms.push(x.action_matrix()?);
    }
    run_width_matrices(spec, &ms, cap)
}

/// As [`run_width_quotient`] for elements given by their matrices, which
/// must be isometries of the form mod `m`.
pub fn run_width_matrices(
    spec: &FiniteGroupSpec,
    xs: &[ModMatrix],
    cap: u32,
) -> Result<WidthRun<ModMatrix>> {
    let ctx = spec.quotient_ctx()?;
    let gens = spec.quotient_generators()?;
    for x in xs {
        if x.dim() != spec.form.dim() || x.modulus() as u64 != spec.modulus {
            return Err(Error::Precondition(
                "matrix has the wrong size or modulus".into(),
            ));
        }
        if x.gram(&ctx.diag)
            != ModMatrix::diagonal(
                &ctx.diag.iter().map(|&d| d as i64).collect::<Vec<_>>(),
                ctx.m,
            )?
        {
            return Err(Error::NotOrthogonal(format!(
                "matrix is not an isometry mod {}",
                spec.modulus
            )));
        }
    }
    Ok(bfs(
        &ctx,
        &gens,
        xs,
        cap,
        spec.group_cap,
        Convention::Quotient,
    ))
}

/// Width run in the cover convention for the union of the classes of `xs`.
pub fn run_width_cover(
    spec: &FiniteGroupSpec,
    xs: &[ModMultivector],
    cap: u32,
) -> Result<WidthRun<CoverElem>> {
    let ctx = spec.cover_ctx()?;
    let gens: Vec<CoverElem> = spec.generators.iter().map(|g| ctx.from_mod(g)).collect();
    for x in xs {
        spec.check_element(x)?;
    }
    let es: Vec<CoverElem> = xs.iter().map(|x| ctx.from_mod(x)).collect();
    Ok(bfs(
        &ctx,
        &gens,
        &es,
        cap,
        spec.group_cap,
        Convention::Cover,
    ))
}

/// Report for the union of the classes of `xs`.
pub fn run_width(
    spec: &FiniteGroupSpec,
    xs: &[ModMultivector],
    cap: u32,
    convention: Convention,
) -> Result<WidthReport> {
    Ok(match convention {
        Convention::Quotient => run_width_quotient(spec, xs, cap)?.report,
        Convention::Cover => run_width_cover(spec, xs, cap)?.report,
    })
}

/// Width of `⟨gcl(x)⟩` in the quotient generated by `spec`.
pub fn gcl_width_bfs(
    spec: &FiniteGroupSpec,
    x: &ModMultivector,
    cap: u32,
    convention: Convention,
) -> Result<WidthReport> {
    run_width(spec, std::slice::from_ref(x), cap, convention)
}
