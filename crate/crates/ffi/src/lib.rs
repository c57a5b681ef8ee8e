//! C ABI for `qp_recur`.
//!
//! Values cross the boundary as opaque heap handles (`QpContext`,
//! `QpNumber`, `QpProblem`) that the caller releases with the matching
//! `*_free` function. Every fallible call returns a [`QpStatus`]; on failure
//! [`qp_last_error_message`] describes the error for the calling thread.
//! Strings returned by the library are released with [`qp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qp_recur::recursion::{check_case1, solve, solve_stationary, ProblemSpec};
use qp_recur::{exp_p, log_p, Error, PadicContext, PadicNumber, Valuation};
use serde_json::json;

/// Working context: an odd prime and an absolute precision.
pub struct QpContext(PadicContext);

/// A p-adic number known modulo a power of p.
pub struct QpNumber(PadicNumber);

/// Parameter sequences of a recursion problem.
pub struct QpProblem(ProblemSpec);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpStatus {
    Ok = 0,
    /// Input outside the domain of the operation.
    Domain = 1,
    /// Invalid argument (bad prime, precision, mismatched contexts).
    Usage = 2,
    /// Malformed text or JSON.
    Parse = 3,
    /// A self-check failed.
    Internal = 4,
    NullPointer = 5,
    InvalidUtf8 = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpValuationKind {
    /// The valuation is exactly the reported value.
    Finite = 0,
    /// Precision ran out; the valuation is at least the reported value.
    AtLeast = 1,
    /// Exact zero.
    Infinite = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

struct Failure(QpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain(_) => QpStatus::Domain,
            Error::Usage(_) => QpStatus::Usage,
            Error::Parse(_) => QpStatus::Parse,
            Error::Internal(_) => QpStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(QpStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> QpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => QpStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("panic inside qp_recur");
            QpStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| null(what))
}

unsafe fn text<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| Failure(QpStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn store_string(out: *mut *mut c_char, value: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(value).map_err(|_| Failure(QpStatus::Internal, "string contains a nul byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn qp_context_new(p: u32, precision: u32, out: *mut *mut QpContext) -> QpStatus {
    guard(|| store(out, QpContext(PadicContext::new(p, precision)?)))
}

/// # Safety
/// `ctx` must be null or a handle from [`qp_context_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qp_context_free(ctx: *mut QpContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// `num / den` in the context.
///
/// # Safety
/// `ctx` must be a live context handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qp_number_from_rational(
    ctx: *const QpContext,
    num: i64,
    den: i64,
    out: *mut *mut QpNumber,
) -> QpStatus {
    guard(|| {
        let ctx = borrow(ctx, "ctx")?;
        store(out, QpNumber(PadicNumber::from_rational(num as i128, den as i128, ctx.0)?))
    })
}

/// Read a rational literal `num/den`, an integer, or the canonical form `p^v * [d0,d1,...]`.
///
/// # Safety
/// `ctx` must be a live context handle, `literal` a nul-terminated string and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qp_number_parse(
    ctx: *const QpContext,
    literal: *const c_char,
    out: *mut *mut QpNumber,
) -> QpStatus {
    guard(|| {
        let ctx = borrow(ctx, "ctx")?;
        store(out, QpNumber(PadicNumber::parse_literal(text(literal, "literal")?, ctx.0)?))
    })
}

/// Canonical text form; release with [`qp_string_free`].
///
/// # Safety
/// `x` must be a live number handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qp_number_format(x: *const QpNumber, out: *mut *mut c_char) -> QpStatus {
    guard(|| store_string(out, borrow(x, "x")?.0.format()))
}

/// # Safety
/// `x` must be null or a number handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qp_number_free(x: *mut QpNumber) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

unsafe fn binary(
    x: *const QpNumber,
    y: *const QpNumber,
    out: *mut *mut QpNumber,
    op: fn(&PadicNumber, &PadicNumber) -> qp_recur::Result<PadicNumber>,
) -> QpStatus {
    guard(|| {
        let (x, y) = (borrow(x, "x")?, borrow(y, "y")?);
        store(out, QpNumber(op(&x.0, &y.0)?))
    })
}

/// # Safety
/// `x`, `y` must be live number handles and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qp_number_add(x: *const QpNumber, y: *const QpNumber, out: *mut *mut QpNumber) -> QpStatus {
    binary(x, y, out, PadicNumber::add)
}

/// # Safety
/// `x`, `y` must be live number handles and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qp_number_sub(x: *const QpNumber, y: *const QpNumber, out: *mut *mut QpNumber) -> QpStatus {
    binary(x, y, out, PadicNumber::sub)
}

/// # Safety
/// `x`, `y` must be live number handles and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qp_number_mul(x: *const QpNumber, y: *const QpNumber, out: *mut *mut QpNumber) -> QpStatus {
    binary(x, y, out, PadicNumber::mul)
}

/// Division by an exact or precision-exhausted zero is a domain error.
///
/// # Safety
/// `x`, `y` must be live number handles and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qp_number_div(x: *const QpNumber, y: *const QpNumber, out: *mut *mut QpNumber) -> QpStatus {
    binary(x, y, out, PadicNumber::div)
}

/// `v_p(x)`. For exact zero `value` is set to `INT64_MAX`.
///
/// # Safety
/// `x` must be a live number handle; `value` and `kind` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qp_number_valuation(
    x: *const QpNumber,
    value: *mut i64,
    kind: *mut QpValuationKind,
) -> QpStatus {
    guard(|| {
        let x = borrow(x, "x")?;
        if value.is_null() || kind.is_null() {
            return Err(null("output pointer"));
        }
        let (v, k) = match x.0.valuation() {
            Valuation::Finite(v) => (v, QpValuationKind::Finite),
            Valuation::AtLeast(v) => (v, QpValuationKind::AtLeast),
            Valuation::Infinite => (i64::MAX, QpValuationKind::Infinite),
        };
        *value = v;
        *kind = k;
        Ok(())
    })
}

/// Whether `x = y` modulo `p^k`; a usage error if either is not known that far.
///
/// # Safety
/// `x`, `y` must be live number handles and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qp_number_equals_mod(
    x: *const QpNumber,
    y: *const QpNumber,
    k: i64,
    out: *mut bool,
) -> QpStatus {
    guard(|| {
        let (x, y) = (borrow(x, "x")?, borrow(y, "y")?);
        let eq = x.0.equals_mod(&y.0, k)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = eq;
        Ok(())
    })
}

/// `exp_p(x)` for `v(x) >= 1`.
///
/// # Safety
/// `x` must be a live number handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qp_exp(x: *const QpNumber, out: *mut *mut QpNumber) -> QpStatus {
    guard(|| store(out, QpNumber(exp_p(&borrow(x, "x")?.0)?)))
}

/// `log_p(x)` for `v(x - 1) >= 1`.
///
/// # Safety
/// `x` must be a live number handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qp_log(x: *const QpNumber, out: *mut *mut QpNumber) -> QpStatus {
    guard(|| store(out, QpNumber(log_p(&borrow(x, "x")?.0)?)))
}

/// Load a problem file: `{"p": .., "precision": .., "alpha": {"preamble": [..], "period": [..]}, "beta": .., "gamma": ..}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qp_problem_from_json(json: *const c_char, out: *mut *mut QpProblem) -> QpStatus {
    guard(|| store(out, QpProblem(ProblemSpec::from_json(text(json, "json")?)?)))
}

/// # Safety
/// `problem` must be null or a problem handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qp_problem_free(problem: *mut QpProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// `h_n` modulo `p^k`.
///
/// # Safety
/// `problem` must be a live problem handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qp_solve(problem: *const QpProblem, n: u64, k: i64, out: *mut *mut QpNumber) -> QpStatus {
    guard(|| {
        let r = solve(&borrow(problem, "problem")?.0, n, k)?;
        store(out, QpNumber(r.h_start().truncate(k)))
    })
}

/// Full solution report as JSON; release with [`qp_string_free`].
///
/// # Safety
/// `problem` must be a live problem handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qp_solve_json(problem: *const QpProblem, n: u64, k: i64, out: *mut *mut c_char) -> QpStatus {
    guard(|| {
        let r = solve(&borrow(problem, "problem")?.0, n, k)?;
        let texts = |xs: &[PadicNumber]| xs.iter().map(PadicNumber::format).collect::<Vec<_>>();
        let doc = json!({
            "n": r.n,
            "depth": r.depth,
            "target": r.target,
            "h": r.h_start().truncate(k).format(),
            "h_values": texts(&r.h_values),
            "u_values": texts(&r.u_values),
            "residual_valuations": r.residual_valuations,
            "certificate": r.certificate,
        });
        store_string(out, doc.to_string())
    })
}

/// Whether `a_k + b_k = c_k + 1` for `k = 1..=horizon`.
///
/// # Safety
/// `problem` must be a live problem handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qp_check_case1(problem: *const QpProblem, horizon: u64, out: *mut bool) -> QpStatus {
    guard(|| {
        let holds = check_case1(&borrow(problem, "problem")?.0, horizon)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = holds;
        Ok(())
    })
}

/// Fixed point zeta of `((a u + b)/(c + u))^2` modulo `p^k` for constant parameters.
///
/// # Safety
/// `alpha`, `beta`, `gamma` must be live number handles and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qp_solve_stationary(
    alpha: *const QpNumber,
    beta: *const QpNumber,
    gamma: *const QpNumber,
    k: i64,
    out: *mut *mut QpNumber,
) -> QpStatus {
    guard(|| {
        let (a, b, c) = (borrow(alpha, "alpha")?, borrow(beta, "beta")?, borrow(gamma, "gamma")?);
        let fp = solve_stationary(&a.0, &b.0, &c.0, k)?;
        store(out, QpNumber(fp.zeta.truncate(k)))
    })
}
