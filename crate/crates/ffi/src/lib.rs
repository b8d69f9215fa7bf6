//! C interface to the `tricircle` library.
//!
//! Configurations live behind an opaque `TcConfig` handle. Every fallible
//! call returns a `TcStatus`; on failure the message is kept per thread and
//! can be read with `tc_last_error_message`. Strings returned by the library
//! must be released with `tc_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use tricircle::configgen::{generate, load, save, to_json, GeneratorKind, GeneratorSpec};
use tricircle::counting::{count_incidences, count_report, Configuration};
use tricircle::curves::{curve_eval, CurveRef};
use tricircle::exact::{format_rational, parse_rational};
use tricircle::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Validation = 4,
    Io = 5,
    Degenerate = 6,
    /// An inequality verdict failed or an internal invariant broke.
    Internal = 7,
}

/// Opaque configuration handle.
pub struct TcConfig {
    inner: Configuration,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TcCountSummary {
    pub triples: u64,
    pub m: u64,
    pub q: u64,
    pub sum_p: u64,
    /// 1 when every inequality verdict holds.
    pub all_hold: i32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TcIncidenceSummary {
    pub i_prime: u64,
    pub i: u64,
    pub degenerate: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn fail(e: Error) -> TcStatus {
    let status = match &e {
        Error::Parse { .. } => TcStatus::Parse,
        Error::Validation(_) => TcStatus::Validation,
        Error::Io(_) => TcStatus::Io,
        Error::DegenerateSpecialization { .. } | Error::DegenerateInput(_) | Error::VerticalComponent { .. } => {
            TcStatus::Degenerate
        }
        Error::Internal(_) => TcStatus::Internal,
        _ => TcStatus::InvalidArgument,
    };
    set_error(e.to_string());
    status
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, TcStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(TcStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        TcStatus::InvalidArgument
    })
}

unsafe fn config_ref<'a>(cfg: *const TcConfig) -> Result<&'a Configuration, TcStatus> {
    if cfg.is_null() {
        set_error("null configuration handle");
        return Err(TcStatus::NullPointer);
    }
    Ok(&(*cfg).inner)
}

fn into_handle(cfg: Configuration, out: *mut *mut TcConfig) -> TcStatus {
    unsafe { *out = Box::into_raw(Box::new(TcConfig { inner: cfg })) };
    TcStatus::Ok
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Generates a configuration. `kind` is a generator name such as
/// `"random-uniform"` or `"golden"`.
///
/// # Safety
/// `kind` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_config_generate(kind: *const c_char, n: usize, seed: u64, out: *mut *mut TcConfig) -> TcStatus {
    if out.is_null() {
        set_error("null output pointer");
        return TcStatus::NullPointer;
    }
    let kind: GeneratorKind = match try_status!(read_str(kind)).parse() {
        Ok(k) => k,
        Err(e) => return fail(e),
    };
    match generate(&GeneratorSpec::new(kind, n, seed)) {
        Ok(cfg) => into_handle(cfg, out),
        Err(e) => fail(e),
    }
}

/// Loads a configuration file.
///
/// # Safety
/// `path` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_config_load(path: *const c_char, out: *mut *mut TcConfig) -> TcStatus {
    if out.is_null() {
        set_error("null output pointer");
        return TcStatus::NullPointer;
    }
    let path = try_status!(read_str(path));
    match load(Path::new(path)) {
        Ok(cfg) => into_handle(cfg, out),
        Err(e) => fail(e),
    }
}

/// # Safety
/// `cfg` must come from this library; `path` must be a valid C string.
#[no_mangle]
pub unsafe extern "C" fn tc_config_save(cfg: *const TcConfig, path: *const c_char) -> TcStatus {
    let cfg = try_status!(config_ref(cfg));
    let path = try_status!(read_str(path));
    match save(cfg, Path::new(path)) {
        Ok(()) => TcStatus::Ok,
        Err(e) => fail(e),
    }
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `cfg` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tc_config_free(cfg: *mut TcConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Writes the three list sizes into `sizes[0..3]`.
///
/// # Safety
/// `sizes` must point to three writable `size_t`.
#[no_mangle]
pub unsafe extern "C" fn tc_config_sizes(cfg: *const TcConfig, sizes: *mut usize) -> TcStatus {
    let cfg = try_status!(config_ref(cfg));
    if sizes.is_null() {
        set_error("null output pointer");
        return TcStatus::NullPointer;
    }
    for (i, s) in cfg.sizes().into_iter().enumerate() {
        *sizes.add(i) = s;
    }
    TcStatus::Ok
}

/// Counts unit triples and circles. Returns `Internal` if an inequality
/// fails; the summary is written either way.
///
/// # Safety
/// `cfg` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tc_count(cfg: *const TcConfig, out: *mut TcCountSummary) -> TcStatus {
    let cfg = try_status!(config_ref(cfg));
    if out.is_null() {
        set_error("null output pointer");
        return TcStatus::NullPointer;
    }
    let r = count_report(cfg, false);
    *out = TcCountSummary {
        triples: r.triple_count as u64,
        m: r.m as u64,
        q: r.q,
        sum_p: r.sum_p,
        all_hold: r.all_hold() as i32,
    };
    if r.all_hold() {
        TcStatus::Ok
    } else {
        set_error("inequality verdict failed");
        TcStatus::Internal
    }
}

/// # Safety
/// `cfg` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tc_count_incidences(cfg: *const TcConfig, out: *mut TcIncidenceSummary) -> TcStatus {
    let cfg = try_status!(config_ref(cfg));
    if out.is_null() {
        set_error("null output pointer");
        return TcStatus::NullPointer;
    }
    let c = count_incidences(cfg);
    *out = TcIncidenceSummary {
        i_prime: c.i_prime,
        i: c.i,
        degenerate: c.degenerate.len() as u64,
    };
    TcStatus::Ok
}

/// Evaluates the curve of `(t_a, t_b)` at `(t_x, t_y)`; all values are
/// rational strings such as `"-3/4"`. The exact value is returned as a new
/// string in `out`.
///
/// # Safety
/// String arguments must be valid C strings; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tc_curve_eval(
    cfg: *const TcConfig,
    t_a: *const c_char,
    t_b: *const c_char,
    t_x: *const c_char,
    t_y: *const c_char,
    out: *mut *mut c_char,
) -> TcStatus {
    let cfg = try_status!(config_ref(cfg));
    if out.is_null() {
        set_error("null output pointer");
        return TcStatus::NullPointer;
    }
    let mut vals = Vec::with_capacity(4);
    for p in [t_a, t_b, t_x, t_y] {
        match parse_rational(try_status!(read_str(p))) {
            Ok(v) => vals.push(v),
            Err(e) => {
                set_error(e.to_string());
                return TcStatus::Parse;
            }
        }
    }
    let c = CurveRef::new(vals[0].clone(), vals[1].clone());
    match curve_eval(cfg, &c, &vals[2], &vals[3]) {
        Ok(v) => {
            *out = new_string(format_rational(&v));
            TcStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Full count report as JSON. Incidences are included when
/// `with_incidences` is nonzero.
///
/// # Safety
/// `cfg` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tc_report_json(cfg: *const TcConfig, with_incidences: i32, out: *mut *mut c_char) -> TcStatus {
    let cfg = try_status!(config_ref(cfg));
    if out.is_null() {
        set_error("null output pointer");
        return TcStatus::NullPointer;
    }
    let r = count_report(cfg, with_incidences != 0);
    match serde_json::to_string(&r) {
        Ok(s) => {
            *out = new_string(s);
            TcStatus::Ok
        }
        Err(e) => fail(Error::Internal(e.to_string())),
    }
}

/// Configuration as JSON text.
///
/// # Safety
/// `cfg` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tc_config_json(cfg: *const TcConfig, out: *mut *mut c_char) -> TcStatus {
    let cfg = try_status!(config_ref(cfg));
    if out.is_null() {
        set_error("null output pointer");
        return TcStatus::NullPointer;
    }
    *out = new_string(to_json(cfg));
    TcStatus::Ok
}

fn new_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
