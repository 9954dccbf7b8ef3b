//! C ABI over `quiver_moduli`.
//!
//! Handles are opaque heap objects released with the matching `*_free`. Every fallible call
//! returns a [`QmStatus`]; on failure the message is available from [`qm_last_error`] until the
//! next call on the same thread. Panics are caught and reported as `QM_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;
use std::sync::Arc;

use quiver_moduli::bound_quiver::{parse_algebra, BoundQuiverAlgebra};
use quiver_moduli::exactalg::GroebnerCaps;
use quiver_moduli::forms::{euler_data, tits_form, to_i64};
use quiver_moduli::rep::io::parse_rep_file;
use quiver_moduli::rep::Representation;
use quiver_moduli::semi_invariants::hilbert_series;
use quiver_moduli::stability::{king_test, StabilityStatus};
use quiver_moduli::Error;

/// Status codes. Values are stable.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Semantic = 4,
    DimensionMismatch = 5,
    InvalidInput = 6,
    ResolutionTruncated = 7,
    DegreeCapExceeded = 8,
    CannotSample = 9,
    NotApplicable = 10,
    InstanceCheckFailed = 11,
    BufferTooSmall = 12,
    Internal = 13,
    Io = 14,
    Panic = 15,
}

impl From<&Error> for QmStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parse { .. } => QmStatus::Parse,
            Error::Semantic(_) => QmStatus::Semantic,
            Error::DimensionMismatch(_) => QmStatus::DimensionMismatch,
            Error::InvalidInput(_) => QmStatus::InvalidInput,
            Error::ResolutionTruncated(_) => QmStatus::ResolutionTruncated,
            Error::DegreeCapExceeded { .. } => QmStatus::DegreeCapExceeded,
            Error::CannotSample(_) => QmStatus::CannotSample,
            Error::NotApplicable(_) => QmStatus::NotApplicable,
            Error::InstanceCheckFailed(_) => QmStatus::InstanceCheckFailed,
            Error::Internal(_) => QmStatus::Internal,
            Error::Io(_) => QmStatus::Io,
        }
    }
}

/// King stability verdict.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QmStability {
    Stable = 0,
    StrictlySemistable = 1,
    Unstable = 2,
    Undecided = 3,
}

/// Opaque bound quiver algebra.
pub struct QmAlgebra(Arc<BoundQuiverAlgebra>);

/// Opaque representation of a bound quiver algebra.
pub struct QmRepresentation(Representation);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(QmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(QmStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(QmStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QmStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QmStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            QmStatus::Panic
        }
    }
}

unsafe fn c_text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(QmStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn array<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn algebra<'a>(p: *const QmAlgebra) -> Result<&'a Arc<BoundQuiverAlgebra>, Failure> {
    p.as_ref().map(|a| &a.0).ok_or_else(|| null("algebra"))
}

fn check_len(alg: &BoundQuiverAlgebra, len: usize) -> Result<(), Failure> {
    if len != alg.vertex_count() {
        return Err(Failure(
            QmStatus::DimensionMismatch,
            format!("vector has {len} entries, algebra has {} vertices", alg.vertex_count()),
        ));
    }
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn qm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses an algebra from its text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qm_algebra_parse(text: *const c_char, out: *mut *mut QmAlgebra) -> QmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let alg = parse_algebra(c_text(text, "text")?)?;
        *out = Box::into_raw(Box::new(QmAlgebra(Arc::new(alg))));
        Ok(())
    })
}

/// # Safety
/// `alg` must come from `qm_algebra_parse` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qm_algebra_free(alg: *mut QmAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `alg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qm_algebra_vertex_count(alg: *const QmAlgebra) -> usize {
    alg.as_ref().map_or(0, |a| a.0.vertex_count())
}

/// Tits form `q(d)`.
///
/// # Safety
/// `d` must point to `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qm_tits_form(alg: *const QmAlgebra, d: *const usize, len: usize, out: *mut i64) -> QmStatus {
    guard(|| {
        let a = algebra(alg)?;
        check_len(a, len)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = tits_form(a, array(d, len, "d")?)?.value;
        Ok(())
    })
}

/// Euler form `<d, e>` from minimal resolutions of simples of length at most `l_max`.
///
/// # Safety
/// `d` and `e` must point to `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qm_euler_form(
    alg: *const QmAlgebra,
    d: *const usize,
    e: *const usize,
    len: usize,
    l_max: usize,
    out: *mut i64,
) -> QmStatus {
    guard(|| {
        let a = algebra(alg)?;
        check_len(a, len)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let euler = euler_data(a, l_max)?;
        *out = euler.pair(&to_i64(array(d, len, "d")?), &to_i64(array(e, len, "e")?));
        Ok(())
    })
}

/// Parses a representation file body against `alg`. The `algebra` line of the file is ignored.
///
/// # Safety
/// `alg` must be live, `text` NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qm_representation_parse(
    alg: *const QmAlgebra,
    text: *const c_char,
    out: *mut *mut QmRepresentation,
) -> QmStatus {
    guard(|| {
        let a = algebra(alg)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let file = parse_rep_file(c_text(text, "text")?)?;
        let m = file.build(a.clone())?;
        *out = Box::into_raw(Box::new(QmRepresentation(m)));
        Ok(())
    })
}

/// # Safety
/// `rep` must come from `qm_representation_parse` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qm_representation_free(rep: *mut QmRepresentation) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Writes the dimension vector into `out` (capacity `cap`); `written` receives the length.
///
/// # Safety
/// `out` must have room for `cap` values; `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qm_representation_dims(
    rep: *const QmRepresentation,
    out: *mut usize,
    cap: usize,
    written: *mut usize,
) -> QmStatus {
    guard(|| {
        let m = &rep.as_ref().ok_or_else(|| null("representation"))?.0;
        if written.is_null() {
            return Err(null("written"));
        }
        let dims = m.dims();
        *written = dims.len();
        if cap < dims.len() {
            return Err(Failure(QmStatus::BufferTooSmall, format!("need {} entries", dims.len())));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(dims.as_ptr(), out, dims.len());
        Ok(())
    })
}

/// King test of a module for the weight `theta`.
///
/// # Safety
/// `theta` must point to `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qm_king_test(
    rep: *const QmRepresentation,
    theta: *const i64,
    len: usize,
    max_basis: usize,
    max_degree: u32,
    out: *mut QmStability,
) -> QmStatus {
    guard(|| {
        let m = &rep.as_ref().ok_or_else(|| null("representation"))?.0;
        check_len(m.algebra(), len)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let caps = GroebnerCaps { max_basis, max_degree };
        let verdict = king_test(m, array(theta, len, "theta")?, caps)?;
        *out = match verdict.status {
            StabilityStatus::Stable => QmStability::Stable,
            StabilityStatus::StrictlySemistable => QmStability::StrictlySemistable,
            StabilityStatus::Unstable => QmStability::Unstable,
            StabilityStatus::Undecided => QmStability::Undecided,
        };
        Ok(())
    })
}

/// `dim SI(A, d)_{mθ}` for `m = 0..=m_max`, written to `out` (capacity at least `m_max + 1`).
///
/// # Safety
/// `d` and `theta` must point to `len` values; `out` must have room for `cap` values.
#[no_mangle]
pub unsafe extern "C" fn qm_hilbert_series(
    alg: *const QmAlgebra,
    d: *const usize,
    theta: *const i64,
    len: usize,
    m_max: u32,
    degree_cap: u32,
    out: *mut u64,
    cap: usize,
) -> QmStatus {
    guard(|| {
        let a = algebra(alg)?;
        check_len(a, len)?;
        let need = m_max as usize + 1;
        if cap < need {
            return Err(Failure(QmStatus::BufferTooSmall, format!("need {need} entries")));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let report = hilbert_series(a, array(d, len, "d")?, array(theta, len, "theta")?, m_max, degree_cap)?;
        for (i, x) in report.dims.iter().enumerate() {
            *out.add(i) = *x as u64;
        }
        Ok(())
    })
}
