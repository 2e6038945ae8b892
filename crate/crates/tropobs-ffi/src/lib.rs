//! C ABI over `tropobs`. Curves are opaque handles; every call returns a
//! status code, and on failure `trop_last_error` describes what went wrong.
//! Strings returned through out-parameters are owned by the caller and must be
//! released with `trop_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tropobs::curve::{parse_curve_str, TropicalCurve};
use tropobs::higher_valent::xi::{xi_map, Configuration};
use tropobs::obstruction::dual_obstruction_chain;
use tropobs::report;
use tropobs::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TropStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed or inconsistent input data.
    Validation = 3,
    /// Valid input outside the operation's domain.
    Precondition = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TropMethod {
    Chain = 0,
    Xi = 1,
}

/// Opaque parsed curve.
pub struct TropCurve {
    inner: TropicalCurve,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: &Error) -> TropStatus {
    set_error(&e.to_string());
    if e.is_validation() {
        TropStatus::Validation
    } else {
        TropStatus::Precondition
    }
}

fn guard(f: impl FnOnce() -> TropStatus) -> TropStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            TropStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, TropStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(TropStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        TropStatus::InvalidUtf8
    })
}

unsafe fn curve_arg<'a>(c: *const TropCurve) -> Result<&'a TropicalCurve, TropStatus> {
    if c.is_null() {
        set_error("null curve handle");
        return Err(TropStatus::NullArgument);
    }
    Ok(&(*c).inner)
}

fn out_string(out: *mut *mut c_char, s: String) -> TropStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            TropStatus::Ok
        }
        Err(_) => {
            set_error("output contains a NUL byte");
            TropStatus::Panic
        }
    }
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! check_out {
    ($p:expr) => {
        if $p.is_null() {
            set_error("null output pointer");
            return TropStatus::NullArgument;
        }
    };
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn trop_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn trop_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parses and validates a curve document (JSON text).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trop_curve_parse(json: *const c_char, out: *mut *mut TropCurve) -> TropStatus {
    guard(|| {
        check_out!(out);
        let text = try_status!(str_arg(json));
        match parse_curve_str(text) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(TropCurve { inner: c }));
                TropStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a curve; NULL is ignored.
///
/// # Safety
/// `c` must come from `trop_curve_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn trop_curve_free(c: *mut TropCurve) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trop_curve_genus(c: *const TropCurve, out: *mut usize) -> TropStatus {
    guard(|| {
        check_out!(out);
        *out = try_status!(curve_arg(c)).genus();
        TropStatus::Ok
    })
}

/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trop_curve_ambient_dim(c: *const TropCurve, out: *mut usize) -> TropStatus {
    guard(|| {
        check_out!(out);
        *out = try_status!(curve_arg(c)).n();
        TropStatus::Ok
    })
}

/// e + (n-3)(1-g).
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trop_curve_expected_dim(c: *const TropCurve, out: *mut i64) -> TropStatus {
    guard(|| {
        check_out!(out);
        *out = try_status!(curve_arg(c)).expected_dim();
        TropStatus::Ok
    })
}

/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trop_curve_is_immersive(c: *const TropCurve, out: *mut bool) -> TropStatus {
    guard(|| {
        check_out!(out);
        *out = try_status!(curve_arg(c)).is_immersive();
        TropStatus::Ok
    })
}

unsafe fn obstruction(
    c: *const TropCurve,
    method: TropMethod,
    config_json: *const c_char,
) -> Result<tropobs::obstruction::ObstructionReport, TropStatus> {
    let curve = curve_arg(c)?;
    let r = match method {
        TropMethod::Chain => dual_obstruction_chain(curve.combinatorial_type()),
        TropMethod::Xi => {
            let cfg = if config_json.is_null() {
                Ok(Configuration::default())
            } else {
                Configuration::parse_str(str_arg(config_json)?)
            };
            cfg.and_then(|cfg| xi_map(curve, &cfg).map(|x| x.report))
        }
    };
    r.map_err(|e| fail(&e))
}

/// dim H. `config_json` (may be NULL) supplies coordinates for the xi method.
///
/// # Safety
/// `c` must be a live handle, `config_json` NULL or a NUL-terminated string,
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn trop_obstruction_dim(
    c: *const TropCurve,
    method: TropMethod,
    config_json: *const c_char,
    out: *mut usize,
) -> TropStatus {
    guard(|| {
        check_out!(out);
        *out = try_status!(obstruction(c, method, config_json)).dim_h;
        TropStatus::Ok
    })
}

/// Obstruction report with kernel basis as JSON text.
///
/// # Safety
/// As `trop_obstruction_dim`; free the result with `trop_string_free`.
#[no_mangle]
pub unsafe extern "C" fn trop_obstruction_json(
    c: *const TropCurve,
    method: TropMethod,
    config_json: *const c_char,
    out: *mut *mut c_char,
) -> TropStatus {
    guard(|| {
        check_out!(out);
        let r = try_status!(obstruction(c, method, config_json));
        out_string(out, report::obstruction_json(&r, true).to_string())
    })
}

/// Runs the command line with arguments given as a JSON array of strings
/// (without the program name). Writes the exit code and standard output.
///
/// # Safety
/// `args_json` must be a NUL-terminated string; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn trop_cli_run(args_json: *const c_char, out_code: *mut i32, out_stdout: *mut *mut c_char) -> TropStatus {
    guard(|| {
        check_out!(out_code);
        check_out!(out_stdout);
        let text = try_status!(str_arg(args_json));
        let args: Vec<String> = match serde_json::from_str(text) {
            Ok(a) => a,
            Err(e) => {
                set_error(&format!("arguments must be a JSON array of strings: {e}"));
                return TropStatus::Validation;
            }
        };
        let out = tropobs::cli::run(std::iter::once("tropctl".to_string()).chain(args));
        *out_code = out.code;
        if !out.stderr.is_empty() {
            set_error(out.stderr.trim_end());
        }
        out_string(out_stdout, out.stdout)
    })
}

/// Releases a string returned by this library; NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn trop_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
