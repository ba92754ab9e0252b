//! C interface to kendall-bounds.
//!
//! Every call returns a `KbStatus`; results go through out-pointers. On
//! failure the message is kept per thread and read back with
//! `kb_last_error_message`. Strings handed out by the library are released
//! with `kb_string_free`, contexts with `kb_context_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use kendall_bounds::bounds::{compute_bounds, parse_methods, BoundOptions, Method};
use kendall_bounds::cache::Cache;
use kendall_bounds::coherent::class_counts;
use kendall_bounds::metrics::{hamming_bound, singleton_bound};
use kendall_bounds::search::SearchOptions;
use kendall_bounds::{Error, Limits};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KbStatus {
    Ok = 0,
    /// file system or cache trouble
    Io = 1,
    /// n beyond the cap of the requested computation
    CapExceeded = 2,
    /// the LP or SDP solver did not produce a trustworthy answer
    SolverFailure = 3,
    /// dmin out of range or another malformed request
    InvalidArgument = 4,
    NullPointer = 5,
    /// a value does not fit the output type
    Overflow = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct KbClassCounts {
    pub conj: u64,
    pub len: u64,
    pub theta_sym: u64,
}

/// Caps, search budget and an optional cache directory shared by calls.
pub struct KbContext {
    options: BoundOptions,
    cache: Option<Cache>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn status_of(err: &Error) -> KbStatus {
    match err {
        Error::ResourceLimit { .. } => KbStatus::CapExceeded,
        Error::Io(_) | Error::Cache(_) | Error::Json(_) => KbStatus::Io,
        e if e.is_solver() => KbStatus::SolverFailure,
        _ => KbStatus::InvalidArgument,
    }
}

fn fail(status: KbStatus, message: impl Into<String>) -> KbStatus {
    set_last_error(message.into());
    status
}

/// Runs `body`, turning errors and panics into a status.
fn guarded(body: impl FnOnce() -> Result<(), KbStatus>) -> KbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => KbStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(KbStatus::Panic, "internal panic"),
    }
}

fn check(err: Error) -> KbStatus {
    fail(status_of(&err), err.to_string())
}

unsafe fn context<'a>(ctx: *const KbContext) -> Result<&'a KbContext, KbStatus> {
    ctx.as_ref().ok_or_else(|| fail(KbStatus::NullPointer, "context is null"))
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, KbStatus> {
    if s.is_null() {
        return Err(fail(KbStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(KbStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn to_u64(value: &num_bigint::BigUint) -> Result<u64, KbStatus> {
    u64::try_from(value).map_err(|_| fail(KbStatus::Overflow, format!("{value} does not fit in 64 bits")))
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn kb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn kb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// New context written to `*out`. `cache_dir` may be NULL for no disk cache.
///
/// # Safety
/// `cache_dir` is NULL or a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn kb_context_new(
    cache_dir: *const c_char,
    allow_large: bool,
    out: *mut *mut KbContext,
) -> KbStatus {
    guarded(|| {
        if out.is_null() {
            return Err(fail(KbStatus::NullPointer, "out is null"));
        }
        let cache = if cache_dir.is_null() {
            None
        } else {
            Some(Cache::new(PathBuf::from(text(cache_dir, "cache_dir")?)))
        };
        let ctx = KbContext {
            options: BoundOptions {
                limits: Limits::new(allow_large),
                search: SearchOptions::default(),
                dump_dir: cache.as_ref().map(|c| c.dir().join("failures")),
            },
            cache,
        };
        *out = Box::into_raw(Box::new(ctx));
        Ok(())
    })
}

/// # Safety
/// `ctx` is NULL or came from `kb_context_new` and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kb_context_free(ctx: *mut KbContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Node budget for exact searches made through this context.
///
/// # Safety
/// `ctx` came from `kb_context_new`.
#[no_mangle]
pub unsafe extern "C" fn kb_context_set_search_budget(ctx: *mut KbContext, nodes: u64) -> KbStatus {
    guarded(|| {
        let ctx = ctx.as_mut().ok_or_else(|| fail(KbStatus::NullPointer, "context is null"))?;
        ctx.options.search.node_budget = nodes;
        Ok(())
    })
}

unsafe fn run_method(
    ctx: *const KbContext,
    n: u32,
    dmin: u32,
    method: Method,
) -> Result<kendall_bounds::lp_bound::BoundReport, KbStatus> {
    let ctx = context(ctx)?;
    compute_bounds(n as usize, dmin as usize, &[method], ctx.cache.as_ref(), &ctx.options).map_err(check)
}

/// Floored LP bound and the real optimum; either out-pointer may be NULL.
///
/// # Safety
/// `ctx` came from `kb_context_new`; non-null out-pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn kb_lp_bound(
    ctx: *const KbContext,
    n: u32,
    dmin: u32,
    out_bound: *mut u64,
    out_raw: *mut f64,
) -> KbStatus {
    guarded(|| {
        let report = run_method(ctx, n, dmin, Method::Lp)?;
        if let Some(p) = out_bound.as_mut() {
            *p = report.lp.unwrap_or_default();
        }
        if let Some(p) = out_raw.as_mut() {
            *p = report.lp_raw.unwrap_or_default();
        }
        Ok(())
    })
}

/// Floored dual SDP bound and the cutting-plane optimum (n <= 5).
///
/// # Safety
/// As for `kb_lp_bound`.
#[no_mangle]
pub unsafe extern "C" fn kb_sdp_bound(
    ctx: *const KbContext,
    n: u32,
    dmin: u32,
    out_bound: *mut u64,
    out_raw: *mut f64,
) -> KbStatus {
    guarded(|| {
        let report = run_method(ctx, n, dmin, Method::Sdp)?;
        if let Some(p) = out_bound.as_mut() {
            *p = report.sdp.unwrap_or_default();
        }
        if let Some(p) = out_raw.as_mut() {
            *p = report.sdp_raw.unwrap_or_default();
        }
        Ok(())
    })
}

/// Largest code found by exact search (n <= 5); `*out_exact` is false when
/// the node budget ran out first.
///
/// # Safety
/// As for `kb_lp_bound`.
#[no_mangle]
pub unsafe extern "C" fn kb_max_code(
    ctx: *const KbContext,
    n: u32,
    dmin: u32,
    out_size: *mut u64,
    out_exact: *mut bool,
) -> KbStatus {
    guarded(|| {
        let report = run_method(ctx, n, dmin, Method::Search)?;
        if let Some(p) = out_size.as_mut() {
            *p = report.search.unwrap_or_default();
        }
        if let Some(p) = out_exact.as_mut() {
            *p = report.search_exact.unwrap_or(false);
        }
        Ok(())
    })
}

/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn kb_singleton_bound(n: u32, dmin: u32, out: *mut u64) -> KbStatus {
    guarded(|| {
        let out = out.as_mut().ok_or_else(|| fail(KbStatus::NullPointer, "out is null"))?;
        *out = to_u64(&singleton_bound(n as usize, dmin as usize).map_err(check)?)?;
        Ok(())
    })
}

/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn kb_hamming_bound(n: u32, dmin: u32, out: *mut u64) -> KbStatus {
    guarded(|| {
        let out = out.as_mut().ok_or_else(|| fail(KbStatus::NullPointer, "out is null"))?;
        *out = to_u64(&hamming_bound(n as usize, dmin as usize).map_err(check)?)?;
        Ok(())
    })
}

/// Class counts for n, through the context's cache when it has one.
///
/// # Safety
/// `ctx` came from `kb_context_new`; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn kb_ccstats(ctx: *const KbContext, n: u32, out: *mut KbClassCounts) -> KbStatus {
    guarded(|| {
        let ctx = context(ctx)?;
        let out = out.as_mut().ok_or_else(|| fail(KbStatus::NullPointer, "out is null"))?;
        let limits = &ctx.options.limits;
        let counts = match &ctx.cache {
            Some(cache) => cache.class_counts(n as usize, limits),
            None => class_counts(n as usize, limits),
        }
        .map_err(check)?;
        *out = KbClassCounts {
            conj: counts.conj as u64,
            len: counts.len as u64,
            theta_sym: counts.theta_sym as u64,
        };
        Ok(())
    })
}

/// JSON report for a comma-separated method list (lp,sb,hb,sdp,search).
/// The string is written to `*out` and must be released with
/// `kb_string_free`.
///
/// # Safety
/// `ctx` came from `kb_context_new`; `methods` is a nul-terminated string;
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn kb_bound_json(
    ctx: *const KbContext,
    n: u32,
    dmin: u32,
    methods: *const c_char,
    out: *mut *mut c_char,
) -> KbStatus {
    guarded(|| {
        let ctx = context(ctx)?;
        if out.is_null() {
            return Err(fail(KbStatus::NullPointer, "out is null"));
        }
        let methods = parse_methods(text(methods, "methods")?).map_err(check)?;
        let report = compute_bounds(n as usize, dmin as usize, &methods, ctx.cache.as_ref(), &ctx.options)
            .map_err(check)?;
        let json = serde_json::to_string(&report).map_err(|e| check(e.into()))?;
        *out = CString::new(json).expect("JSON has no nul bytes").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` is NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
