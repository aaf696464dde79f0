//! C ABI for gemtri.
//!
//! Gems and pipeline results are opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! a [`GemtriStatus`]; the message of the last failure on the calling thread
//! is available from [`gemtri_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gemtri::diagram::export_diagram;
use gemtri::embedding::{rho, CyclicPermutation};
use gemtri::io::{parse_gem, run_pipeline, GemFile, ModeChoice, RunOptions, RunRecord};

/// Status codes; 1 to 4 match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GemtriStatus {
    Ok = 0,
    Invalid = 1,
    NotInClass = 2,
    Internal = 3,
    Io = 4,
    NullPointer = 5,
    BadArgument = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GemtriMode {
    Auto = 0,
    Closed = 1,
    Gts = 2,
}

/// Pipeline options. `apex < 0` lets the library choose; `eps` is read only
/// when `has_eps` is set and `sweep` is not.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct GemtriOptions {
    pub sweep: bool,
    pub has_eps: bool,
    pub eps: [u8; 5],
    pub apex: i32,
    pub budget: u64,
    pub mode: GemtriMode,
}

/// Opaque parsed gem.
pub struct GemtriGem(GemFile);

/// Opaque pipeline result.
pub struct GemtriRun(RunRecord);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: GemtriStatus, msg: impl Into<String>) -> GemtriStatus {
    set_error(msg);
    status
}

fn from_error(e: &gemtri::Error) -> GemtriStatus {
    let status = match e.exit_code() {
        1 => GemtriStatus::Invalid,
        2 => GemtriStatus::NotInClass,
        4 => GemtriStatus::Io,
        _ => GemtriStatus::Internal,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> GemtriStatus) -> GemtriStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(GemtriStatus::Internal, "panic inside gemtri"),
    }
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gemtri_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gemtri_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parse a gem in the text or JSON format.
///
/// # Safety
/// `bytes` must point to `len` readable bytes and `out` to writable storage for a pointer.
#[no_mangle]
pub unsafe extern "C" fn gemtri_gem_parse(bytes: *const u8, len: usize, out: *mut *mut GemtriGem) -> GemtriStatus {
    guard(|| {
        if bytes.is_null() || out.is_null() {
            return fail(GemtriStatus::NullPointer, "null argument");
        }
        let data = std::slice::from_raw_parts(bytes, len);
        match parse_gem(data) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(GemtriGem(g)));
                GemtriStatus::Ok
            }
            Err(e) => from_error(&e.into()),
        }
    })
}

/// # Safety
/// `gem` must be NULL or a handle from [`gemtri_gem_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gemtri_gem_free(gem: *mut GemtriGem) {
    if !gem.is_null() {
        drop(Box::from_raw(gem));
    }
}

/// Number of vertices, or 0 for NULL.
///
/// # Safety
/// `gem` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gemtri_gem_order(gem: *const GemtriGem) -> usize {
    gem.as_ref().map_or(0, |g| g.0.graph.order())
}

/// Twice the regular genus of the gem for the cyclic permutation `eps` (5 colors).
///
/// # Safety
/// `gem` must be a live handle, `eps` must point to 5 bytes and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gemtri_gem_rho_twice(gem: *const GemtriGem, eps: *const u8, out: *mut i64) -> GemtriStatus {
    guard(|| {
        let (Some(g), false, false) = (gem.as_ref(), eps.is_null(), out.is_null()) else {
            return fail(GemtriStatus::NullPointer, "null argument");
        };
        if g.0.graph.n() != 4 {
            return fail(GemtriStatus::BadArgument, "gem dimension is not 4");
        }
        let seq: Vec<usize> = std::slice::from_raw_parts(eps, 5).iter().map(|&c| c as usize).collect();
        match CyclicPermutation::new(seq) {
            Ok(p) => {
                *out = rho(&g.0.graph, &p).twice;
                GemtriStatus::Ok
            }
            Err(e) => fail(GemtriStatus::BadArgument, e.to_string()),
        }
    })
}

fn options(o: &GemtriOptions) -> Result<RunOptions, GemtriStatus> {
    let apex = match o.apex {
        a if a < 0 => None,
        a @ 0..=4 => Some(a as usize),
        a => return Err(fail(GemtriStatus::BadArgument, format!("apex {a} is outside 0..=4"))),
    };
    Ok(RunOptions {
        eps: (o.has_eps && !o.sweep).then(|| o.eps.iter().map(|&c| c as usize).collect()),
        sweep: o.sweep,
        apex,
        budget: o.budget,
        mode: match o.mode {
            GemtriMode::Auto => ModeChoice::Auto,
            GemtriMode::Closed => ModeChoice::Closed,
            GemtriMode::Gts => ModeChoice::Gts,
        },
    })
}

/// Run validation, trisection, diagram and ledger. `opts` may be NULL for defaults.
///
/// # Safety
/// `gem` must be a live handle, `opts` NULL or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gemtri_run(
    gem: *const GemtriGem,
    opts: *const GemtriOptions,
    out: *mut *mut GemtriRun,
) -> GemtriStatus {
    guard(|| {
        let Some(g) = gem.as_ref() else {
            return fail(GemtriStatus::NullPointer, "null gem");
        };
        if out.is_null() {
            return fail(GemtriStatus::NullPointer, "null output");
        }
        let o = match opts.as_ref().map(options) {
            None => RunOptions::default(),
            Some(Ok(o)) => o,
            Some(Err(s)) => return s,
        };
        match run_pipeline(&g.0, &o) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(GemtriRun(r)));
                GemtriStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// # Safety
/// `run` must be NULL or a handle from [`gemtri_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gemtri_run_free(run: *mut GemtriRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Twice the trisection genus, or -1 for NULL.
///
/// # Safety
/// `run` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gemtri_run_genus_twice(run: *const GemtriRun) -> i64 {
    run.as_ref().map_or(-1, |r| r.0.certificate.genus.twice)
}

/// Number of stabilizations, or -1 for NULL.
///
/// # Safety
/// `run` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gemtri_run_k(run: *const GemtriRun) -> i64 {
    run.as_ref().map_or(-1, |r| r.0.certificate.k as i64)
}

/// Whether every diagram check passed.
///
/// # Safety
/// `run` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gemtri_run_verified(run: *const GemtriRun) -> bool {
    run.as_ref()
        .and_then(|r| r.0.diagram.verification.as_ref())
        .is_some_and(|v| v.passed())
}

/// The full run record as JSON, released with [`gemtri_string_free`].
///
/// # Safety
/// `run` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gemtri_run_json(run: *const GemtriRun, out: *mut *mut c_char) -> GemtriStatus {
    guard(|| {
        let (Some(r), false) = (run.as_ref(), out.is_null()) else {
            return fail(GemtriStatus::NullPointer, "null argument");
        };
        match CString::new(r.0.to_json()) {
            Ok(s) => {
                *out = s.into_raw();
                GemtriStatus::Ok
            }
            Err(e) => fail(GemtriStatus::Internal, e.to_string()),
        }
    })
}

/// Export the diagram as `"json"`, `"dot"` or `"svg"`, NUL-terminated,
/// released with [`gemtri_string_free`].
///
/// # Safety
/// `run` must be a live handle, `format` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gemtri_run_export(
    run: *const GemtriRun,
    format: *const c_char,
    out: *mut *mut c_char,
) -> GemtriStatus {
    guard(|| {
        let (Some(r), false, false) = (run.as_ref(), format.is_null(), out.is_null()) else {
            return fail(GemtriStatus::NullPointer, "null argument");
        };
        let Ok(fmt) = CStr::from_ptr(format).to_str() else {
            return fail(GemtriStatus::BadArgument, "format is not UTF-8");
        };
        let bytes = match export_diagram(&r.0.diagram, fmt) {
            Ok(b) => b,
            Err(e) => return fail(GemtriStatus::BadArgument, e.to_string()),
        };
        match CString::new(bytes) {
            Ok(s) => {
                *out = s.into_raw();
                GemtriStatus::Ok
            }
            Err(e) => fail(GemtriStatus::Internal, e.to_string()),
        }
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gemtri_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
