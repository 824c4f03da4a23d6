//! C ABI over `spinlab`.
//!
//! Every fallible call returns a [`SpinlabStatus`]; on a non-`Ok` status the
//! message is available from [`spinlab_last_error`] on the same thread.
//! Strings returned through out-pointers are owned by the caller and released
//! with [`spinlab_string_free`]; multivector handles with
//! [`spinlab_multivector_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use spinlab::approx::{approx_unit, class_number};
use spinlab::arith::{hilbert_symbol, parse_rational, Place};
use spinlab::certificate::verify_text;
use spinlab::congruence::{run_width, Convention, FiniteGroupSpec, DEFAULT_GROUP_CAP};
use spinlab::json::to_canonical_string;
use spinlab::spin::{coroot, is_spin};
use spinlab::{Multivector, OIdeal, OddPrime, QuadForm};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinlabStatus {
    Ok = 0,
    /// Null pointer, malformed string or violated precondition.
    InvalidArgument = 1,
    /// A computation or verification did not succeed.
    Failed = 2,
    /// A Rust panic was caught at the boundary.
    Panic = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinlabForm {
    /// `Σ xᵢ²`.
    Fa = 0,
    /// `Σ (x₂ᵢ² − x₂ᵢ₋₁²)`.
    Fs = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinlabConvention {
    Quotient = 0,
    Cover = 1,
}

/// Opaque multivector over a diagonal form.
pub struct SpinlabMultivector {
    inner: Multivector,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(SpinlabStatus, String);

impl From<spinlab::Error> for Fail {
    fn from(e: spinlab::Error) -> Self {
        use spinlab::Error as E;
        let status = match e {
            E::SearchFailed(_) | E::CapExceeded(_) | E::Verification(_) | E::NotCommuting => {
                SpinlabStatus::Failed
            }
            _ => SpinlabStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

impl From<spinlab::arith::ArithError> for Fail {
    fn from(e: spinlab::arith::ArithError) -> Self {
        Fail(SpinlabStatus::InvalidArgument, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(SpinlabStatus::InvalidArgument, msg.into())
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SpinlabStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpinlabStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            SpinlabStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(invalid(format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(p: *const SpinlabMultivector, what: &str) -> Result<&'a Multivector, Fail> {
    p.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| invalid(format!("{what} is null")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(invalid("output pointer is null"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_handle(out: *mut *mut SpinlabMultivector, inner: Multivector) -> Result<(), Fail> {
    if out.is_null() {
        return Err(invalid("output pointer is null"));
    }
    out.write(Box::into_raw(Box::new(SpinlabMultivector { inner })));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(invalid("output pointer is null"));
    }
    let c =
        CString::new(s).map_err(|_| Fail(SpinlabStatus::Failed, "string contains nul".into()))?;
    out.write(c.into_raw());
    Ok(())
}

fn make_form(form: SpinlabForm, dim: usize) -> Result<Arc<QuadForm>, Fail> {
    Ok(Arc::new(match form {
        SpinlabForm::Fa => QuadForm::fa(dim)?,
        SpinlabForm::Fs => QuadForm::fs(dim)?,
    }))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on this thread.
#[no_mangle]
pub extern "C" fn spinlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn spinlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spinlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a multivector handle. Null is ignored.
///
/// # Safety
/// `h` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spinlab_multivector_free(h: *mut SpinlabMultivector) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// The coroot `hᵢ(t)` over `f_s` in dimension `dim`; `t` is a rational such as `"3/2"`.
///
/// # Safety
/// `t` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spinlab_coroot(
    dim: usize,
    i: u8,
    t: *const c_char,
    out: *mut *mut SpinlabMultivector,
) -> SpinlabStatus {
    guard(|| {
        let t = parse_rational(read_str(t, "t")?)?;
        let form = make_form(SpinlabForm::Fs, dim)?;
        let h = coroot(&form, i, &t)?;
        write_handle(out, h.multivector().clone())
    })
}

/// The basis blade `e_{idx[0]} ⋯ e_{idx[len-1]}` (1-based) over `form`.
///
/// # Safety
/// `idx` must point to `len` readable values and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn spinlab_basis_blade(
    form: SpinlabForm,
    dim: usize,
    idx: *const usize,
    len: usize,
    out: *mut *mut SpinlabMultivector,
) -> SpinlabStatus {
    guard(|| {
        let idx: &[usize] = if len == 0 {
            &[]
        } else if idx.is_null() {
            return Err(invalid("idx is null"));
        } else {
            std::slice::from_raw_parts(idx, len)
        };
        let f = make_form(form, dim)?;
        write_handle(out, Multivector::basis_product(&f, idx)?)
    })
}

/// Geometric product `a b`.
///
/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spinlab_multivector_gp(
    a: *const SpinlabMultivector,
    b: *const SpinlabMultivector,
    out: *mut *mut SpinlabMultivector,
) -> SpinlabStatus {
    guard(|| {
        let p = handle(a, "a")?.gp(handle(b, "b")?)?;
        write_handle(out, p)
    })
}

/// The reversal `a′`.
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spinlab_multivector_reverse(
    a: *const SpinlabMultivector,
    out: *mut *mut SpinlabMultivector,
) -> SpinlabStatus {
    guard(|| write_handle(out, handle(a, "a")?.reverse()))
}

/// Whether `a` and `b` are equal, written to `out`.
///
/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spinlab_multivector_eq(
    a: *const SpinlabMultivector,
    b: *const SpinlabMultivector,
    out: *mut bool,
) -> SpinlabStatus {
    guard(|| write_out(out, handle(a, "a")? == handle(b, "b")?))
}

/// Canonical text form of `a`, terms `c·e{i,j,…}` in blade order.
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spinlab_multivector_to_string(
    a: *const SpinlabMultivector,
    out: *mut *mut c_char,
) -> SpinlabStatus {
    guard(|| write_string(out, handle(a, "a")?.to_string()))
}

/// Whether `a` lies in the spin group; on rejection the reason is left in
/// [`spinlab_last_error`] while the status stays `Ok`.
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spinlab_multivector_is_spin(
    a: *const SpinlabMultivector,
    out: *mut bool,
) -> SpinlabStatus {
    let mut reason = None;
    let status = guard(|| {
        let r = is_spin(handle(a, "a")?);
        if let Err(why) = &r {
            reason = Some(why.to_string());
        }
        write_out(out, r.is_ok())
    });
    if let (SpinlabStatus::Ok, Some(why)) = (status, reason) {
        set_error(why);
    }
    status
}

/// `(a, b)_v` for rationals `a`, `b` and a place `"inf"`, `"2"` or an odd prime.
///
/// # Safety
/// All strings must be nul-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spinlab_hilbert_symbol(
    a: *const c_char,
    b: *const c_char,
    place: *const c_char,
    out: *mut i8,
) -> SpinlabStatus {
    guard(|| {
        let a = parse_rational(read_str(a, "a")?)?;
        let b = parse_rational(read_str(b, "b")?)?;
        let v = match read_str(place, "place")? {
            "inf" => Place::Real,
            "2" => Place::Two,
            p => Place::Odd(OddPrime::new(
                p.parse().map_err(|_| invalid(format!("bad place {p:?}")))?,
            )?),
        };
        write_out(out, hilbert_symbol(&a, &b, &v)?)
    })
}

/// Number of reduced primitive forms of negative discriminant `d`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spinlab_class_number(d: i64, out: *mut u64) -> SpinlabStatus {
    guard(|| write_out(out, class_number(d)?))
}

/// Certificate JSON for `approx_unit(a, (ideal))`.
///
/// # Safety
/// Strings must be nul-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spinlab_approx_unit(
    a: *const c_char,
    ideal: *const c_char,
    out: *mut *mut c_char,
) -> SpinlabStatus {
    guard(|| {
        let a = parse_rational(read_str(a, "a")?)?;
        let m = read_str(ideal, "ideal")?;
        let ideal = OIdeal::new(
            m.parse()
                .map_err(|_| invalid(format!("ideal {m:?} is not an integer")))?,
        )?;
        let ap = approx_unit(&a, &ideal)?;
        write_string(out, to_canonical_string(&ap.certificate)?)
    })
}

/// Width report JSON for `gcl(element)` in the quotient mod `modulus`.
/// `element` is `id`, a blade such as `e12`, or `gen<k>`, optionally negated;
/// `group_cap = 0` selects the default cap.
///
/// # Safety
/// `element` must be nul-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spinlab_width(
    form: SpinlabForm,
    dim: usize,
    modulus: u64,
    element: *const c_char,
    cap: u32,
    convention: SpinlabConvention,
    group_cap: usize,
    out: *mut *mut c_char,
) -> SpinlabStatus {
    guard(|| {
        let f = make_form(form, dim)?;
        let cap_elems = if group_cap == 0 {
            DEFAULT_GROUP_CAP
        } else {
            group_cap
        };
        let spec = FiniteGroupSpec::standard(&f, modulus)?.with_group_cap(cap_elems);
        let x = spec.parse_element(read_str(element, "element")?)?;
        let conv = match convention {
            SpinlabConvention::Quotient => Convention::Quotient,
            SpinlabConvention::Cover => Convention::Cover,
        };
        let report = run_width(&spec, &[x], cap, conv)?;
        write_string(out, to_canonical_string(&report)?)
    })
}

/// Re-verifies a certificate or spin-pair JSON document. `passed` receives the
/// verdict and `report` (if non-null) the per-check JSON report.
///
/// # Safety
/// `json` must be nul-terminated; `passed` writable; `report` null or writable.
#[no_mangle]
pub unsafe extern "C" fn spinlab_verify_certificate(
    json: *const c_char,
    passed: *mut bool,
    report: *mut *mut c_char,
) -> SpinlabStatus {
    guard(|| {
        let r = verify_text(read_str(json, "json")?)?;
        write_out(passed, r.passed)?;
        if !report.is_null() {
            write_string(report, to_canonical_string(&r)?)?;
        }
        Ok(())
    })
}
