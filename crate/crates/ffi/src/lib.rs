//! C interface to the mtstar library.
//!
//! Values cross the boundary as opaque handles. Every fallible call returns an
//! [`MtsStatus`]; on failure a message is stored per thread and can be read
//! with [`mts_last_error_message`]. Strings returned through out-pointers are
//! owned by the caller and released with [`mts_string_free`].

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mtstar::evaluations::{parse_params, Evaluator, Formula};
use mtstar::finite::t_harmonic_star;
use mtstar::index::{parse_blocks, parse_index, parse_signed_index};
use mtstar::numerics::rational_string;
use mtstar::series::{nested_t_sum, t_star_closed_blocks, t_star_direct};
use mtstar::{BoundKind, Error, ParsedIndex, Precision, TruncatedValue};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MtsStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Index, block or parameter text did not parse.
    Parse = 2,
    /// Arguments parsed but lie outside the operation's domain.
    Domain = 3,
    /// A string argument was not valid UTF-8.
    Utf8 = 4,
    /// A caller-supplied buffer was too small.
    Buffer = 5,
    /// An internal panic was caught at the boundary.
    Panic = 6,
}

/// Evaluation settings and a memo of computed t-values.
pub struct MtsContext {
    precision: Precision,
    terms: u64,
    evaluator: Evaluator,
}

/// A truncated value: estimate, error indicator and provenance.
pub struct MtsValue {
    estimate: CString,
    error_indicator: CString,
    estimate_f64: f64,
    terms_used: u64,
    rigorous: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Fail(MtsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => MtsStatus::Parse,
            Error::Domain(_) => MtsStatus::Domain,
        };
        Fail(code, e.to_string())
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MtsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MtsStatus::Ok
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(&msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            MtsStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(MtsStatus::NullPointer, format!("`{what}` must not be null"))
}

/// # Safety
/// `p` is null or points to a nul-terminated string.
unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(MtsStatus::Utf8, format!("`{what}` is not valid UTF-8")))
}

/// # Safety
/// `p` is null or points to a live context.
unsafe fn context<'a>(p: *const MtsContext) -> Result<&'a MtsContext, Fail> {
    p.as_ref().ok_or_else(|| null("ctx"))
}

fn value(v: &TruncatedValue, digits: u32) -> Box<MtsValue> {
    let estimate = v.estimate.to_decimal(digits);
    Box::new(MtsValue {
        estimate_f64: v.estimate.to_f64(),
        estimate: CString::new(estimate).expect("decimal text"),
        error_indicator: CString::new(v.error_indicator.to_bound_string()).expect("decimal text"),
        terms_used: v.terms_used,
        rigorous: v.bound_kind == BoundKind::Rigorous,
    })
}

/// # Safety
/// `out` is null or writable.
unsafe fn put<T>(out: *mut *mut T, v: Box<T>) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(v);
    Ok(())
}

/// # Safety
/// `out` is null or writable.
unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = CString::new(s).expect("no interior nul").into_raw();
    Ok(())
}

/// Creates a context with `digits` decimal digits (at least 10) and `terms`
/// summation terms (at least 1).
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn mts_context_new(digits: u32, terms: u64, out: *mut *mut MtsContext) -> MtsStatus {
    guard(|| {
        let precision = Precision::new(digits)?;
        let evaluator = Evaluator::new(precision, terms)?;
        put(out, Box::new(MtsContext { precision, terms, evaluator }))
    })
}

/// Releases a context. Null is ignored.
///
/// # Safety
/// `ctx` must come from [`mts_context_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mts_context_free(ctx: *mut MtsContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Direct star sum t★(s) for an index such as "3,1,2".
///
/// # Safety
/// `ctx` must be live, `index` a nul-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mts_t_star_direct(
    ctx: *const MtsContext,
    index: *const c_char,
    out: *mut *mut MtsValue,
) -> MtsStatus {
    guard(|| {
        let ctx = context(ctx)?;
        let idx = match parse_index(text(index, "index")?)? {
            ParsedIndex::Plain(i) => i,
            ParsedIndex::Signed(_) => {
                return Err(Fail(MtsStatus::Domain, "star sums take an index without `~`".into()))
            }
        };
        let v = t_star_direct(&idx, ctx.terms, ctx.precision)?;
        put(out, value(&v, ctx.precision.digits()))
    })
}

/// Strict nested sum t(s); entries prefixed with `~` alternate in sign.
///
/// # Safety
/// As for [`mts_t_star_direct`].
#[no_mangle]
pub unsafe extern "C" fn mts_nested_t_sum(
    ctx: *const MtsContext,
    index: *const c_char,
    out: *mut *mut MtsValue,
) -> MtsStatus {
    guard(|| {
        let ctx = context(ctx)?;
        let s = parse_signed_index(text(index, "index")?)?;
        let v = nested_t_sum(&s, ctx.terms, ctx.precision)?;
        put(out, value(&v, ctx.precision.digits()))
    })
}

/// Star value of a block form "a0:c1:a1:…" from its closed shell sum with
/// `shells` outer terms.
///
/// # Safety
/// As for [`mts_t_star_direct`].
#[no_mangle]
pub unsafe extern "C" fn mts_t_star_closed_blocks(
    ctx: *const MtsContext,
    blocks: *const c_char,
    shells: u64,
    out: *mut *mut MtsValue,
) -> MtsStatus {
    guard(|| {
        let ctx = context(ctx)?;
        let b = parse_blocks(text(blocks, "blocks")?)?;
        let v = t_star_closed_blocks(&b, shells, ctx.precision)?;
        put(out, value(&v, ctx.precision.digits()))
    })
}

/// Exact finite star sum t★_n(s), written as "p/q".
///
/// # Safety
/// `index` must be a nul-terminated string and `out` writable. Free the
/// result with [`mts_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mts_t_harmonic_star(n: u64, index: *const c_char, out: *mut *mut c_char) -> MtsStatus {
    guard(|| {
        let idx = match parse_index(text(index, "index")?)? {
            ParsedIndex::Plain(i) => i,
            ParsedIndex::Signed(_) => {
                return Err(Fail(MtsStatus::Domain, "finite star sums take an index without `~`".into()))
            }
        };
        put_string(out, rational_string(&t_harmonic_star(n, &idx)))
    })
}

/// Compares a closed formula ("thm41" … "thm49", "liwang42") with parameters
/// such as "a=1,b=0" against the direct oracle. Writes the JSON report.
///
/// # Safety
/// `ctx` must be live, the strings nul-terminated and `out` writable. Free
/// the result with [`mts_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mts_cross_check(
    ctx: *const MtsContext,
    formula_id: *const c_char,
    params: *const c_char,
    tolerance: f64,
    out: *mut *mut c_char,
) -> MtsStatus {
    guard(|| {
        let ctx = context(ctx)?;
        let id = text(formula_id, "formula_id")?;
        let params: BTreeMap<String, u32> = parse_params(text(params, "params")?)?;
        let f = Formula::from_params(id, &params)?;
        let report = ctx.evaluator.cross_check(&f, tolerance)?;
        let json = serde_json::to_string(&report).map_err(|e| Fail(MtsStatus::Panic, e.to_string()))?;
        put_string(out, json)
    })
}

/// Decimal estimate, valid while `v` lives. Null if `v` is null.
///
/// # Safety
/// `v` must be null or a live value.
#[no_mangle]
pub unsafe extern "C" fn mts_value_estimate(v: *const MtsValue) -> *const c_char {
    v.as_ref().map_or(ptr::null(), |v| v.estimate.as_ptr())
}

/// Error indicator rounded up to four significant digits, valid while `v`
/// lives. Null if `v` is null.
///
/// # Safety
/// `v` must be null or a live value.
#[no_mangle]
pub unsafe extern "C" fn mts_value_error_indicator(v: *const MtsValue) -> *const c_char {
    v.as_ref().map_or(ptr::null(), |v| v.error_indicator.as_ptr())
}

/// Estimate rounded to double precision (NaN if `v` is null).
///
/// # Safety
/// `v` must be null or a live value.
#[no_mangle]
pub unsafe extern "C" fn mts_value_to_f64(v: *const MtsValue) -> f64 {
    v.as_ref().map_or(f64::NAN, |v| v.estimate_f64)
}

/// Number of terms or shells summed.
///
/// # Safety
/// `v` must be null or a live value.
#[no_mangle]
pub unsafe extern "C" fn mts_value_terms_used(v: *const MtsValue) -> u64 {
    v.as_ref().map_or(0, |v| v.terms_used)
}

/// 1 if the error indicator is a proved bound, 0 if heuristic or `v` is null.
///
/// # Safety
/// `v` must be null or a live value.
#[no_mangle]
pub unsafe extern "C" fn mts_value_is_rigorous(v: *const MtsValue) -> i32 {
    v.as_ref().map_or(0, |v| i32::from(v.rigorous))
}

/// Copies the estimate into `buf` (capacity `cap` bytes, including the nul).
///
/// # Safety
/// `v` must be live and `buf` writable for `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn mts_value_copy_estimate(v: *const MtsValue, buf: *mut c_char, cap: usize) -> MtsStatus {
    guard(|| {
        let v = v.as_ref().ok_or_else(|| null("v"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let bytes = v.estimate.as_bytes_with_nul();
        if bytes.len() > cap {
            return Err(Fail(
                MtsStatus::Buffer,
                format!("buffer holds {cap} bytes, {} needed", bytes.len()),
            ));
        }
        ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, bytes.len());
        Ok(())
    })
}

/// Releases a value. Null is ignored.
///
/// # Safety
/// `v` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mts_value_free(v: *mut MtsValue) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mts_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread (empty after success).
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn mts_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn mts_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
