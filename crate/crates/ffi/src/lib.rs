//! C ABI over the `sbfs` planner.
//!
//! Every function returns an [`SbfsStatus`]; on failure the message is
//! available from [`sbfs_last_error`] on the same thread. Handles are opaque
//! and must be released with their matching `_free` function. Strings
//! returned through out-pointers are owned by the caller and released with
//! [`sbfs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sbfs::domains::InstanceSpec;
use sbfs::dsl::{parse_problem, serialize_plan, serialize_problem};
use sbfs::harness::AlgoArgs;
use sbfs::model::Problem;
use sbfs::search::SearchResult;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbfsStatus {
    Ok = 0,
    NullArg = 1,
    Utf8 = 2,
    Parse = 3,
    Config = 4,
    Search = 5,
    Panic = 6,
}

/// Search outcome codes, in the order `solved, exhausted, timeout, budget`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbfsOutcome {
    Solved = 0,
    Exhausted = 1,
    Timeout = 2,
    Budget = 3,
}

/// Opaque parsed problem.
pub struct SbfsProblem {
    inner: Problem,
}

/// Opaque search result with its plan already rendered.
pub struct SbfsResult {
    result: SearchResult,
    plan_text: String,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn guard(f: impl FnOnce() -> Result<(), (SbfsStatus, String)>) -> SbfsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SbfsStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SbfsStatus::Panic
        }
    }
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (SbfsStatus, String)> {
    if p.is_null() {
        return Err((SbfsStatus::NullArg, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (SbfsStatus::Utf8, format!("{what}: {e}")))
}

fn out_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn null(what: &str) -> (SbfsStatus, String) {
    (SbfsStatus::NullArg, format!("{what} is null"))
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn sbfs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses and validates problem text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbfs_problem_parse(text: *const c_char, out: *mut *mut SbfsProblem) -> SbfsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = c_str(text, "text")?;
        let p = parse_problem(text).map_err(|diags| {
            let msg = diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n");
            (SbfsStatus::Parse, msg)
        })?;
        *out = Box::into_raw(Box::new(SbfsProblem { inner: p }));
        Ok(())
    })
}

/// Generates a benchmark instance from a spec such as `"sailing boats=2 persons=3"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbfs_problem_generate(spec: *const c_char, out: *mut *mut SbfsProblem) -> SbfsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let spec = c_str(spec, "spec")?;
        let spec = InstanceSpec::parse(spec).map_err(|e| (SbfsStatus::Config, e.to_string()))?;
        let p = spec.generate().map_err(|e| (SbfsStatus::Config, e.to_string()))?;
        *out = Box::into_raw(Box::new(SbfsProblem { inner: p }));
        Ok(())
    })
}

/// Renders the problem back to text; free the string with `sbfs_string_free`.
///
/// # Safety
/// `problem` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbfs_problem_serialize(problem: *const SbfsProblem, out: *mut *mut c_char) -> SbfsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let p = problem.as_ref().ok_or_else(|| null("problem"))?;
        *out = out_string(serialize_problem(&p.inner));
        Ok(())
    })
}

/// # Safety
/// `problem` must be null or come from this library, and not be used after.
#[no_mangle]
pub unsafe extern "C" fn sbfs_problem_free(problem: *mut SbfsProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Runs one search. `flags` uses the `plan solve` syntax, e.g.
/// `"--algo sa --rect lin --expansion-limit 10000"`; null means defaults.
///
/// # Safety
/// `problem` must come from this library; `flags` must be null or a
/// NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbfs_solve(
    problem: *const SbfsProblem,
    flags: *const c_char,
    out: *mut *mut SbfsResult,
) -> SbfsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let p = problem.as_ref().ok_or_else(|| null("problem"))?;
        let flags = if flags.is_null() { "" } else { c_str(flags, "flags")? };
        let cfg = AlgoArgs::parse_line(flags)
            .and_then(|a| a.to_config())
            .map_err(|e| (SbfsStatus::Config, e.to_string()))?;
        let result = cfg.run(&p.inner).map_err(|e| (SbfsStatus::Search, e.to_string()))?;
        let plan_text = result.plan.as_ref().map(|pl| serialize_plan(pl, &p.inner)).unwrap_or_default();
        *out = Box::into_raw(Box::new(SbfsResult { result, plan_text }));
        Ok(())
    })
}

/// # Safety
/// `result` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn sbfs_result_outcome(result: *const SbfsResult) -> SbfsOutcome {
    use sbfs::search::Outcome;
    match result.as_ref().map(|r| r.result.outcome) {
        Some(Outcome::Solved) => SbfsOutcome::Solved,
        Some(Outcome::Exhausted) => SbfsOutcome::Exhausted,
        Some(Outcome::Timeout) => SbfsOutcome::Timeout,
        Some(Outcome::Budget) | None => SbfsOutcome::Budget,
    }
}

/// Plan length, or -1 when no plan was found.
///
/// # Safety
/// `result` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn sbfs_result_plan_len(result: *const SbfsResult) -> i64 {
    result.as_ref().and_then(|r| r.result.plan_len()).map_or(-1, |n| n as i64)
}

/// # Safety
/// `result` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn sbfs_result_expansions(result: *const SbfsResult) -> u64 {
    result.as_ref().map_or(0, |r| r.result.stats.expansions)
}

/// Re-expansion rate in percent.
///
/// # Safety
/// `result` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn sbfs_result_reexp_rate(result: *const SbfsResult) -> f64 {
    result.as_ref().map_or(0.0, |r| r.result.stats.reexp_rate())
}

/// Wall time in seconds.
///
/// # Safety
/// `result` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn sbfs_result_time(result: *const SbfsResult) -> f64 {
    result.as_ref().map_or(0.0, |r| r.result.stats.wall_time.as_secs_f64())
}

/// Plan in text form (empty when unsolved); free with `sbfs_string_free`.
///
/// # Safety
/// `result` must be a live result handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbfs_result_plan_text(result: *const SbfsResult, out: *mut *mut c_char) -> SbfsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        *out = out_string(r.plan_text.clone());
        Ok(())
    })
}

/// # Safety
/// `result` must be null or come from this library, and not be used after.
#[no_mangle]
pub unsafe extern "C" fn sbfs_result_free(result: *mut SbfsResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn sbfs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
