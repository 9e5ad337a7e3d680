//! C ABI over the `tsrack` library.
//!
//! Every fallible call returns a [`TsrStatus`] and writes its result through
//! an out pointer. Objects are opaque handles owned by the caller and
//! released with the matching `*_free`. After a failure,
//! [`tsr_last_error`] describes it on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::str::FromStr;

use tsrack::cli::{self, CliError, InvariantKind, ResultRecord};
use tsrack::{FiniteRack, LinkSpec, RackInput};

#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TsrStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    Internal = 5,
    Io = 6,
    OutOfRange = 7,
    Panic = 8,
}

#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TsrKind {
    Count = 0,
    Writhe = 1,
    Additive = 2,
    SEnh = 3,
}

pub struct TsrRack {
    inner: RackInput,
}

pub struct TsrLink {
    inner: LinkSpec,
}

pub struct TsrResult {
    record: ResultRecord,
    polynomial: CString,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(TsrStatus, String);

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        let status = match e {
            CliError::Parse(_) => TsrStatus::Parse,
            CliError::Validation(_) => TsrStatus::Validation,
            CliError::Internal(_) => TsrStatus::Internal,
            CliError::Io { .. } => TsrStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TsrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TsrStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside tsrack");
            TsrStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(TsrStatus::NullArgument, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(TsrStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread. Empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tsr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tsr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a rack from an inline JSON (t,s)-rack spec or a file path.
///
/// # Safety
/// `source` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tsr_rack_load(source: *const c_char, out: *mut *mut TsrRack) -> TsrStatus {
    guard(|| {
        let rack = cli::load_rack(text(source, "source")?)?;
        write(out, Box::into_raw(Box::new(TsrRack { inner: rack })))
    })
}

/// Builds a rack from matrix text: `n` followed by `n` rows of 1-based entries.
///
/// # Safety
/// `matrix` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tsr_rack_from_matrix(matrix: *const c_char, out: *mut *mut TsrRack) -> TsrStatus {
    guard(|| {
        let rack =
            FiniteRack::from_str(text(matrix, "matrix")?).map_err(|e| Failure(TsrStatus::Validation, e.to_string()))?;
        write(
            out,
            Box::into_raw(Box::new(TsrRack {
                inner: RackInput::Matrix(rack),
            })),
        )
    })
}

/// # Safety
/// `rack` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tsr_rack_free(rack: *mut TsrRack) {
    if !rack.is_null() {
        drop(Box::from_raw(rack));
    }
}

/// # Safety
/// `rack` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tsr_rack_size(rack: *const TsrRack, out: *mut usize) -> TsrStatus {
    guard(|| {
        let r = deref(rack, "rack")?;
        let n = match &r.inner {
            RackInput::Module { rack, .. } => rack.size(),
            RackInput::Matrix(m) => m.size(),
        };
        write(out, n)
    })
}

/// Order of the kink map.
///
/// # Safety
/// `rack` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tsr_rack_rank(rack: *const TsrRack, out: *mut u64) -> TsrStatus {
    guard(|| {
        let r = deref(rack, "rack")?;
        write(out, r.inner.finite_rack().rank().rank)
    })
}

/// `x ▷ y` on 0-based element indices.
///
/// # Safety
/// `rack` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tsr_rack_op(rack: *const TsrRack, x: usize, y: usize, out: *mut usize) -> TsrStatus {
    guard(|| {
        let r = deref(rack, "rack")?;
        let v = match &r.inner {
            RackInput::Module { rack, .. } if x < rack.size() && y < rack.size() => rack.op(x, y),
            RackInput::Matrix(m) if x < m.size() && y < m.size() => m.op(x, y),
            _ => {
                return Err(Failure(
                    TsrStatus::OutOfRange,
                    format!("element index ({x}, {y}) out of range"),
                ))
            }
        };
        write(out, v)
    })
}

/// Writes `true` when the two racks are isomorphic. When both carry module
/// structure the certificate is cross-checked against exhaustive search.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tsr_rack_isomorphic(a: *const TsrRack, b: *const TsrRack, out: *mut bool) -> TsrStatus {
    guard(|| {
        let (a, b) = (deref(a, "a")?, deref(b, "b")?);
        let report = cli::iso_check(&a.inner, &b.inner)?;
        write(out, report.isomorphic)
    })
}

/// Parses `pd: ...`, `braid: strands: letters` or `unknots: k`, joined by `;`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tsr_link_parse(spec: *const c_char, out: *mut *mut TsrLink) -> TsrStatus {
    guard(|| {
        let link = LinkSpec::from_str(text(spec, "spec")?).map_err(|e| Failure(TsrStatus::Parse, e.to_string()))?;
        write(out, Box::into_raw(Box::new(TsrLink { inner: link })))
    })
}

/// # Safety
/// `link` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tsr_link_free(link: *mut TsrLink) {
    if !link.is_null() {
        drop(Box::from_raw(link));
    }
}

/// # Safety
/// `link` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tsr_link_component_count(link: *const TsrLink, out: *mut usize) -> TsrStatus {
    guard(|| write(out, deref(link, "link")?.inner.diagram.component_count()))
}

/// Computes one invariant; `kind` is one of the `TsrKind` values. The
/// result owns its strings.
///
/// # Safety
/// `rack` and `link` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tsr_invariant(
    rack: *const TsrRack,
    link: *const TsrLink,
    kind: i32,
    out: *mut *mut TsrResult,
) -> TsrStatus {
    guard(|| {
        let (r, l) = (deref(rack, "rack")?, deref(link, "link")?);
        let kind = match kind {
            k if k == TsrKind::Count as i32 => InvariantKind::Count,
            k if k == TsrKind::Writhe as i32 => InvariantKind::Writhe,
            k if k == TsrKind::Additive as i32 => InvariantKind::Additive,
            k if k == TsrKind::SEnh as i32 => InvariantKind::SEnh,
            k => return Err(Failure(TsrStatus::OutOfRange, format!("unknown invariant kind {k}"))),
        };
        let record = cli::compute(&r.inner, &l.inner, kind)?;
        let cstr = |s: String| CString::new(s).map_err(|e| Failure(TsrStatus::Internal, e.to_string()));
        let result = TsrResult {
            polynomial: cstr(record.polynomial.clone())?,
            json: cstr(record.to_json())?,
            record,
        };
        write(out, Box::into_raw(Box::new(result)))
    })
}

/// Polynomial text such as `2u + 2u^2 + 2u^4`. Borrowed from `result`.
///
/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tsr_result_polynomial(result: *const TsrResult) -> *const c_char {
    result.as_ref().map_or(ptr::null(), |r| r.polynomial.as_ptr())
}

/// The full result record as JSON. Borrowed from `result`.
///
/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tsr_result_json(result: *const TsrResult) -> *const c_char {
    result.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tsr_result_counting_value(result: *const TsrResult) -> u64 {
    result.as_ref().map_or(0, |r| r.record.counting_value)
}

/// # Safety
/// `result` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tsr_result_free(result: *mut TsrResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}
