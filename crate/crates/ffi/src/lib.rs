//! C interface to crnf-core.
//!
//! Documents cross the boundary as NUL-terminated JSON in the same grammar as the `crnf`
//! tool. Strings returned through `char **out` belong to the caller and are released with
//! [`crnf_string_free`]; manifold handles with [`crnf_manifold_free`]. On failure the message
//! is available from [`crnf_last_error`] until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use crnf::cli::{apply_report, manifold_report, Command, Failure};
use crnf::io;
use crnf::moser::Manifold;
use crnf::random::{random_manifold, Profile};
use crnf::CrnfError;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrnfStatus {
    Ok = 0,
    /// Null pointer or invalid UTF-8.
    InvalidArgument = 1,
    /// Malformed document or invalid input values.
    Parse = 2,
    /// Degenerate Δ or singular kernel system. A report may still be written.
    Domain = 3,
    Internal = 4,
}

/// Opaque truncated manifold.
pub struct CrnfManifold {
    inner: Manifold,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &CrnfError) -> CrnfStatus {
    if e.is_domain() {
        CrnfStatus::Domain
    } else {
        CrnfStatus::Parse
    }
}

fn guard(f: impl FnOnce() -> Result<(), (CrnfStatus, String)>) -> CrnfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CrnfStatus::Ok
        }
        Ok(Err((st, msg))) => {
            set_error(&msg);
            st
        }
        Err(_) => {
            set_error("internal panic");
            CrnfStatus::Internal
        }
    }
}

fn bad(msg: &str) -> (CrnfStatus, String) {
    (CrnfStatus::InvalidArgument, msg.to_string())
}

fn lib_err(e: CrnfError) -> (CrnfStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (CrnfStatus, String)> {
    if p.is_null() {
        return Err(bad(&format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| bad(&format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(m: *const CrnfManifold) -> Result<&'a Manifold, (CrnfStatus, String)> {
    m.as_ref().map(|h| &h.inner).ok_or_else(|| bad("manifold handle is null"))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), (CrnfStatus, String)> {
    if out.is_null() {
        return Err(bad("output pointer is null"));
    }
    let c = CString::new(s).map_err(|_| (CrnfStatus::Internal, "interior NUL".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn put_handle(out: *mut *mut CrnfManifold, m: Manifold) -> Result<(), (CrnfStatus, String)> {
    if out.is_null() {
        return Err(bad("output pointer is null"));
    }
    *out = Box::into_raw(Box::new(CrnfManifold { inner: m }));
    Ok(())
}

/// Message of the last failed call on this thread; empty after a success. Owned by the library.
#[no_mangle]
pub extern "C" fn crnf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a manifold document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crnf_manifold_from_json(json: *const c_char, out: *mut *mut CrnfManifold) -> CrnfStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let m = io::parse_manifold_json(text).map_err(lib_err)?;
        put_handle(out, m)
    })
}

/// Seeded random manifold; `profile` is "pure-only", "mixed" or "generic".
///
/// # Safety
/// `profile` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crnf_manifold_random(
    seed: u64,
    n_vars: u32,
    degree: u32,
    s: u32,
    profile: *const c_char,
    out: *mut *mut CrnfManifold,
) -> CrnfStatus {
    guard(|| {
        let profile: Profile = read_str(profile, "profile")?.parse().map_err(|e: String| bad(&e))?;
        let doc = random_manifold(seed, n_vars as usize, degree, s, profile).map_err(lib_err)?;
        let m = io::parse_manifold(&doc).map_err(lib_err)?;
        put_handle(out, m)
    })
}

/// # Safety
/// `m` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn crnf_manifold_free(m: *mut CrnfManifold) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of variables N, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn crnf_manifold_n_vars(m: *const CrnfManifold) -> u32 {
    m.as_ref().map_or(0, |h| h.inner.n_vars() as u32)
}

/// Truncation degree D, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn crnf_manifold_degree(m: *const CrnfManifold) -> u32 {
    m.as_ref().map_or(0, |h| h.inner.max_degree())
}

/// Canonical manifold document.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crnf_manifold_to_json(m: *const CrnfManifold, out: *mut *mut c_char) -> CrnfStatus {
    guard(|| {
        let doc = io::manifold_document(handle(m)?);
        put_string(out, io::to_json(&doc))
    })
}

unsafe fn report(m: *const CrnfManifold, cmd: Command, verify_after: bool, out: *mut *mut c_char) -> CrnfStatus {
    guard(|| {
        let m = handle(m)?;
        match manifold_report(cmd, m, verify_after) {
            Ok(r) => put_string(out, io::to_json(&r)),
            Err(Failure { error, report }) => {
                if let Some(r) = report {
                    put_string(out, io::to_json(&r))?;
                }
                Err(lib_err(error))
            }
        }
    })
}

/// Invariants report (s, Δ, partials, nondegeneracy).
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crnf_invariants(m: *const CrnfManifold, out: *mut *mut c_char) -> CrnfStatus {
    report(m, Command::Invariants, false, out)
}

/// Partial normal form report with map and certificate.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crnf_moser(m: *const CrnfManifold, out: *mut *mut c_char) -> CrnfStatus {
    report(m, Command::Moser, false, out)
}

/// Full normalization report. On `CRNF_STATUS_DOMAIN` a report with the degeneracy witness
/// is still written to `out`.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crnf_normalize(m: *const CrnfManifold, verify_after: bool, out: *mut *mut c_char) -> CrnfStatus {
    report(m, Command::Normalize, verify_after, out)
}

/// Residuals of every normal form condition on `m` as given.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crnf_verify(m: *const CrnfManifold, out: *mut *mut c_char) -> CrnfStatus {
    report(m, Command::Verify, false, out)
}

/// Pushes `m` forward by a map document; the report carries the image.
///
/// # Safety
/// `m` must be a live handle, `map_json` a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crnf_apply(m: *const CrnfManifold, map_json: *const c_char, out: *mut *mut c_char) -> CrnfStatus {
    guard(|| {
        let m = handle(m)?;
        let map = io::parse_map_json(read_str(map_json, "map_json")?).map_err(lib_err)?;
        let r = apply_report(m, &map).map_err(lib_err)?;
        put_string(out, io::to_json(&r))
    })
}

/// # Safety
/// `s` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn crnf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn crnf_version() -> *const c_char {
    static V: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!(),
    };
    V.as_ptr()
}
