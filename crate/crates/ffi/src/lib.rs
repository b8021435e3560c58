//! C ABI for the `idl` library.
//!
//! Maps cross the boundary as opaque `IdlMap` handles; everything else
//! (rationals, orbit lists, reports) crosses as NUL-terminated UTF-8 strings,
//! rationals in canonical form and structured results as JSON. Every function
//! returns an `IdlStatus`; on failure `idl_last_error_message` describes the
//! most recent error on the calling thread.
//!
//! Strings returned through out-parameters are owned by the caller and must be
//! released with `idl_string_free`; handles with `idl_map_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use idl::constructions::{build_tinf_approx, build_tn, tent};
use idl::forcing::verify_tail_property;
use idl::{enumerate_orbits, precedes, Error, PLMap, Rational, DEFAULT_PIECE_BUDGET};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidMap = 4,
    Domain = 5,
    Precondition = 6,
    Budget = 7,
    NotFound = 8,
    Panic = 9,
}

/// Opaque handle to a continuous piecewise-linear self-map.
pub struct IdlMap {
    inner: PLMap,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(IdlStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } => IdlStatus::Parse,
            Error::InvalidMap(_) | Error::ContinuityError { .. } => IdlStatus::InvalidMap,
            Error::Domain { .. } => IdlStatus::Domain,
            Error::BudgetExceeded { .. } => IdlStatus::Budget,
            Error::NoSuchOrbit { .. } | Error::WitnessNotFound(_) => IdlStatus::NotFound,
            _ => IdlStatus::Precondition,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> IdlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => IdlStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            IdlStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(IdlStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(IdlStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn read_map<'a>(p: *const IdlMap) -> Result<&'a PLMap, Failure> {
    p.as_ref().map(|m| &m.inner).ok_or_else(|| null("map"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = CString::new(s)
        .expect("JSON and rationals contain no NUL")
        .into_raw();
    Ok(())
}

unsafe fn write_map(out: *mut *mut IdlMap, map: PLMap) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(IdlMap { inner: map }));
    Ok(())
}

fn budget_or_default(budget: usize) -> usize {
    if budget == 0 {
        DEFAULT_PIECE_BUDGET
    } else {
        budget
    }
}

/// Message for the last failed call on this thread, or null if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn idl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a map file (`{"domain": [...], "nodes": [...]}`).
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn idl_map_from_json(
    json: *const c_char,
    out: *mut *mut IdlMap,
) -> IdlStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        write_map(out, PLMap::from_json(text)?)
    })
}

/// The tent map on `[0, 1]`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn idl_map_tent(out: *mut *mut IdlMap) -> IdlStatus {
    guard(|| write_map(out, tent()))
}

/// # Safety
/// `map` must be null or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn idl_map_free(map: *mut IdlMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn idl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `map` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn idl_map_to_json(map: *const IdlMap, out: *mut *mut c_char) -> IdlStatus {
    guard(|| write_string(out, read_map(map)?.to_json()))
}

/// Evaluates the map at a canonical rational such as `"2/7"`.
///
/// # Safety
/// `map` must be a live handle, `x` a NUL-terminated string and `out` a
/// writable pointer.
#[no_mangle]
pub unsafe extern "C" fn idl_map_eval(
    map: *const IdlMap,
    x: *const c_char,
    out: *mut *mut c_char,
) -> IdlStatus {
    guard(|| {
        let map = read_map(map)?;
        let x: Rational =
            read_str(x, "x")?
                .parse()
                .map_err(|e: idl::rational::ParseRationalError| {
                    Failure(IdlStatus::Parse, e.to_string())
                })?;
        write_string(out, map.eval(&x)?.to_string())
    })
}

/// Least periods up to `bound` and the tail verdict, as
/// `{"periods": [...], "is_tail": bool, "peak_laps": n}`. A zero budget
/// selects the default.
///
/// # Safety
/// `map` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn idl_analyze(
    map: *const IdlMap,
    bound: u64,
    budget: usize,
    out: *mut *mut c_char,
) -> IdlStatus {
    guard(|| {
        let report = verify_tail_property(read_map(map)?, bound, budget_or_default(budget))?;
        write_string(out, serde_json::to_string(&report).expect("serializable"))
    })
}

/// All orbits of least period `period`, as a JSON array of
/// `{"points": [...], "successor": [...]}`.
///
/// # Safety
/// `map` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn idl_enumerate_orbits(
    map: *const IdlMap,
    period: u64,
    budget: usize,
    out: *mut *mut c_char,
) -> IdlStatus {
    guard(|| {
        let orbits = enumerate_orbits(read_map(map)?, period, budget_or_default(budget))?;
        write_string(out, serde_json::to_string(&orbits).expect("serializable"))
    })
}

/// The truncated tent map `T_n`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn idl_build_tn(n: u64, budget: usize, out: *mut *mut IdlMap) -> IdlStatus {
    guard(|| {
        if n == 0 {
            return Err(Failure(
                IdlStatus::Precondition,
                "n must be positive".into(),
            ));
        }
        write_map(out, build_tn(n, budget_or_default(budget))?.map)
    })
}

/// The depth-`depth` approximant of `T_∞`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn idl_build_tinf(
    depth: u32,
    budget: usize,
    out: *mut *mut IdlMap,
) -> IdlStatus {
    guard(|| {
        write_map(
            out,
            build_tinf_approx(depth, budget_or_default(budget))?.map,
        )
    })
}

/// Whether `m` precedes `n` in the Sharkovsky order.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn idl_precedes(m: u64, n: u64, out: *mut bool) -> IdlStatus {
    guard(|| {
        if m == 0 || n == 0 {
            return Err(Failure(
                IdlStatus::Precondition,
                "periods must be positive".into(),
            ));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = precedes(m, n);
        Ok(())
    })
}
