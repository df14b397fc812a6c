//! C ABI surface for the invariant kernel.
//!
//! The interface follows the usual opaque-handle pattern: a root-of-unity
//! specification and a parsed surgery presentation are allocated behind
//! pointers the caller never dereferences, every fallible call returns a
//! `WrtStatus`, and the thread-local message for the most recent failure is
//! available through [`wrt_last_error`]. Computed values cross the boundary
//! as JSON documents (`"schema": "wrtkernel/1"`, exact coefficient lists,
//! never floats) that the caller releases with [`wrt_string_free`].
//!
//! All entry points catch panics, so no unwinding ever crosses the ABI.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde_json::json;

use wrt_kernel::cyclo::{Group, RootSpec};
use wrt_kernel::jones::SurgeryPresentation;
use wrt_kernel::wrt::{check_splitting, integrality_oracles, tau, tau_z2, WrtError};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum WrtStatus {
    /// Success.
    WrtOk = 0,
    /// A required pointer argument was null.
    WrtNullArgument = 1,
    /// An input string was not valid UTF-8.
    WrtInvalidUtf8 = 2,
    /// The input violated the JSON schema or a numeric precondition.
    WrtSchemaError = 3,
    /// Valid input outside the supported domain (e.g. the excluded root).
    WrtUnsupported = 4,
    /// Exact arithmetic contradicted a verified identity.
    WrtFalsified = 5,
    /// Internal failure (a panic was caught).
    WrtInternal = 6,
}

/// Opaque handle: a root-of-unity specification.
pub struct WrtRoot {
    spec: RootSpec,
}

/// Opaque handle: a validated surgery presentation.
pub struct WrtPresentation {
    pres: SurgeryPresentation,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(sanitized).unwrap();
    });
}

fn fail(status: WrtStatus, msg: &str) -> WrtStatus {
    set_error(msg);
    status
}

fn status_of(e: &WrtError) -> WrtStatus {
    match e {
        WrtError::Falsified(_) => WrtStatus::WrtFalsified,
        WrtError::Jones(_) => WrtStatus::WrtSchemaError,
        _ => WrtStatus::WrtUnsupported,
    }
}

fn guarded<F: FnOnce() -> WrtStatus>(f: F) -> WrtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(WrtStatus::WrtInternal, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, WrtStatus> {
    if s.is_null() {
        return Err(WrtStatus::WrtNullArgument);
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| WrtStatus::WrtInvalidUtf8)
}

fn emit(out: *mut *mut c_char, value: serde_json::Value) -> WrtStatus {
    let doc = json!({ "schema": "wrtkernel/1", "report": value });
    let text = serde_json::to_string(&doc).unwrap_or_default();
    let c = match CString::new(text) {
        Ok(c) => c,
        Err(_) => return fail(WrtStatus::WrtInternal, "interior NUL in report"),
    };
    unsafe {
        *out = c.into_raw();
    }
    WrtStatus::WrtOk
}

/// Message describing the most recent failure on the calling thread.
///
/// The pointer stays valid until the next failing call on the same thread;
/// the caller must not free it.
#[no_mangle]
pub extern "C" fn wrt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Release a string returned through an `char**` out-parameter.
///
/// # Safety
/// `s` must be a pointer previously returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn wrt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Allocate a root specification; `group` is 0 for the odd-order quotient
/// theory, 1 for the full theory. Pass `u = 0` to select the canonical
/// fourth-root exponent for `r`.
///
/// The excluded case — a fourth root of order `2r` in the full theory, where
/// no invariant is defined — is refused with `WrtUnsupported`.
///
/// # Safety
/// `out` must be a valid pointer; the result must be freed with
/// [`wrt_root_free`].
#[no_mangle]
pub unsafe extern "C" fn wrt_root_new(
    r: u64,
    u: u64,
    group: i32,
    out: *mut *mut WrtRoot,
) -> WrtStatus {
    guarded(|| {
        if out.is_null() {
            return fail(WrtStatus::WrtNullArgument, "out pointer is null");
        }
        let group = match group {
            0 => Group::So3,
            1 => Group::Su2,
            _ => return fail(WrtStatus::WrtSchemaError, "group must be 0 or 1"),
        };
        let u = if u == 0 { RootSpec::default_u(r) } else { u };
        match RootSpec::new(r, u, group) {
            Ok(spec) => {
                *out = Box::into_raw(Box::new(WrtRoot { spec }));
                WrtStatus::WrtOk
            }
            Err(e) => {
                if RootSpec::new_allow_star(r, u, group).is_ok() {
                    fail(
                        WrtStatus::WrtUnsupported,
                        "the chosen fourth root has order 2r in the full theory; \
                         no invariant is defined at this root",
                    )
                } else {
                    fail(WrtStatus::WrtSchemaError, &e.to_string())
                }
            }
        }
    })
}

/// Release a root handle.
///
/// # Safety
/// `root` must come from [`wrt_root_new`], or be null.
#[no_mangle]
pub unsafe extern "C" fn wrt_root_free(root: *mut WrtRoot) {
    if !root.is_null() {
        drop(Box::from_raw(root));
    }
}

/// Parse and validate a presentation from its JSON document
/// `{"surgery":[{"framing":b,"companion":{"color":s,"framing":p}|null},…]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string, `out` a valid pointer; the result
/// must be freed with [`wrt_presentation_free`].
#[no_mangle]
pub unsafe extern "C" fn wrt_presentation_parse(
    json: *const c_char,
    out: *mut *mut WrtPresentation,
) -> WrtStatus {
    guarded(|| {
        if out.is_null() {
            return fail(WrtStatus::WrtNullArgument, "out pointer is null");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return fail(s, "presentation string unreadable"),
        };
        match SurgeryPresentation::from_json(text) {
            Ok(pres) => {
                *out = Box::into_raw(Box::new(WrtPresentation { pres }));
                WrtStatus::WrtOk
            }
            Err(e) => fail(WrtStatus::WrtSchemaError, &e.to_string()),
        }
    })
}

/// Release a presentation handle.
///
/// # Safety
/// `pres` must come from [`wrt_presentation_parse`], or be null.
#[no_mangle]
pub unsafe extern "C" fn wrt_presentation_free(pres: *mut WrtPresentation) {
    if !pres.is_null() {
        drop(Box::from_raw(pres));
    }
}

unsafe fn run_invariant(
    root: *const WrtRoot,
    pres: *const WrtPresentation,
    out: *mut *mut c_char,
    z2: bool,
) -> WrtStatus {
    if root.is_null() || pres.is_null() || out.is_null() {
        return fail(WrtStatus::WrtNullArgument, "null handle");
    }
    let spec = &(*root).spec;
    let p = &(*pres).pres;
    let result = if z2 { tau_z2(spec, p) } else { tau(spec, p) };
    match result {
        Ok(inv) => emit(out, inv.to_json()),
        Err(e) => fail(status_of(&e), &e.to_string()),
    }
}

/// Compute the normalized invariant; the result is a JSON document owned by
/// the caller.
///
/// # Safety
/// `root` and `pres` must be live handles from this library, `out` a valid
/// pointer; the string must be freed with [`wrt_string_free`].
#[no_mangle]
pub unsafe extern "C" fn wrt_tau(
    root: *const WrtRoot,
    pres: *const WrtPresentation,
    out: *mut *mut c_char,
) -> WrtStatus {
    guarded(|| run_invariant(root, pres, out, false))
}

/// Compute the induced invariant of the double-cover quotient theory.
///
/// # Safety
/// Same contract as [`wrt_tau`].
#[no_mangle]
pub unsafe extern "C" fn wrt_tau_z2(
    root: *const WrtRoot,
    pres: *const WrtPresentation,
    out: *mut *mut c_char,
) -> WrtStatus {
    guarded(|| run_invariant(root, pres, out, true))
}

/// Check that the full invariant of `pres` at `(r, u)` splits as the product
/// of the two quotient invariants; `*holds` receives the verdict.
///
/// # Safety
/// `pres` must be a live handle, `holds` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wrt_check_splitting(
    r: u64,
    u: u64,
    pres: *const WrtPresentation,
    holds: *mut bool,
) -> WrtStatus {
    guarded(|| {
        if pres.is_null() || holds.is_null() {
            return fail(WrtStatus::WrtNullArgument, "null handle");
        }
        match check_splitting(r, u, &(*pres).pres) {
            Ok(v) => {
                *holds = v;
                WrtStatus::WrtOk
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// Run the divisibility oracles for the twisted sums at the given root over
/// framings `bs[0..len]`; the per-check report is returned as JSON.
///
/// # Safety
/// `root` must be a live handle, `bs` must point to `len` readable entries,
/// `out` must be valid; the string must be freed with [`wrt_string_free`].
#[no_mangle]
pub unsafe extern "C" fn wrt_integrality_oracles(
    root: *const WrtRoot,
    bs: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> WrtStatus {
    guarded(|| {
        if root.is_null() || out.is_null() || (bs.is_null() && len > 0) {
            return fail(WrtStatus::WrtNullArgument, "null handle");
        }
        let framings = std::slice::from_raw_parts(bs, len);
        match integrality_oracles(&(*root).spec, framings) {
            Ok(rep) => {
                if !rep.all_ok() {
                    return fail(
                        WrtStatus::WrtFalsified,
                        "an integrality oracle failed; inspect the JSON report",
                    );
                }
                emit(out, rep.to_json())
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}
