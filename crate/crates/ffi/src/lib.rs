//! C ABI for `igusa-core`.
//!
//! Conventions:
//! * every fallible call returns an [`IgusaStatus`]; on failure a message is
//!   available from [`igusa_last_error`] on the same thread;
//! * strings returned through `char **out` are NUL-terminated UTF-8 JSON and
//!   must be released with [`igusa_string_free`];
//! * handles are opaque and released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use igusa_core::oracle::{twisted_coeffs, OracleDomain};
use igusa_core::poly::IntPolynomial;
use igusa_core::report::{coeff_json, run_newton, run_zeta, zeta_only, RunConfig};
use igusa_core::IgusaError;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IgusaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// The polynomial text could not be parsed or is not admissible.
    ParseError = 3,
    /// Bad prime, character, mode or configuration JSON.
    ConfigError = 4,
    /// An enumeration or recursion cap was exceeded.
    CapExceeded = 5,
    /// The engine or analysis could not handle the input.
    EngineError = 6,
    /// An internal panic was caught at the boundary.
    Panic = 7,
}

/// Opaque parsed polynomial together with its variable order.
pub struct IgusaPolynomial {
    text: String,
    vars: Vec<String>,
    poly: IntPolynomial,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &IgusaError) -> IgusaStatus {
    use IgusaError::*;
    match e {
        Syntax { .. }
        | UnknownVariable { .. }
        | NonIntegerCoefficient { .. }
        | ConstantTerm
        | ZeroPolynomial { .. }
        | DimensionMismatch { .. } => IgusaStatus::ParseError,
        Config(_) => IgusaStatus::ConfigError,
        CapExceeded { .. } | SpfDepthExceeded(_) => IgusaStatus::CapExceeded,
        _ => IgusaStatus::EngineError,
    }
}

enum Failure {
    Status(IgusaStatus, String),
    Core(IgusaError),
}

impl From<IgusaError> for Failure {
    fn from(e: IgusaError) -> Self {
        Failure::Core(e)
    }
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> IgusaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            IgusaStatus::Ok
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            IgusaStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Status(IgusaStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Status(IgusaStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s)
        .map_err(|_| Failure::Status(IgusaStatus::EngineError, "output contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn check_out<T>(out: *mut *mut T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Status(IgusaStatus::NullPointer, "output pointer is null".into()));
    }
    unsafe { *out = ptr::null_mut() };
    Ok(())
}

unsafe fn handle<'a>(p: *const IgusaPolynomial) -> Result<&'a IgusaPolynomial, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::Status(IgusaStatus::NullPointer, "polynomial handle is null".into()))
}

impl IgusaPolynomial {
    fn config(&self, p: u64, char_order: u32, char_conductor: u32) -> RunConfig {
        let mut cfg = RunConfig::new(&self.text, p);
        cfg.vars = Some(self.vars.clone());
        cfg.char_order = char_order;
        cfg.char_conductor = char_conductor;
        cfg
    }
}

/// Parses `text` into a polynomial handle. `vars` is a comma-separated variable
/// order, or NULL to infer it from the text.
///
/// # Safety
/// `text` and (if non-null) `vars` must be valid NUL-terminated strings;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn igusa_polynomial_parse(
    text: *const c_char,
    vars: *const c_char,
    out: *mut *mut IgusaPolynomial,
) -> IgusaStatus {
    guard(|| {
        check_out(out)?;
        let text = read_str(text, "text")?;
        let mut cfg = RunConfig::new(text, 2);
        if !vars.is_null() {
            let v = read_str(vars, "vars")?;
            cfg.vars = Some(v.split(',').map(|s| s.trim().to_string()).collect());
        }
        let poly = cfg.polynomial()?;
        let h = IgusaPolynomial {
            text: text.to_string(),
            vars: cfg.variables(),
            poly,
        };
        *out = Box::into_raw(Box::new(h));
        Ok(())
    })
}

/// Releases a handle from [`igusa_polynomial_parse`]. NULL is ignored.
///
/// # Safety
/// `poly` must come from [`igusa_polynomial_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn igusa_polynomial_free(poly: *mut IgusaPolynomial) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Number of variables, or 0 for a NULL handle.
///
/// # Safety
/// `poly` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn igusa_polynomial_nvars(poly: *const IgusaPolynomial) -> usize {
    poly.as_ref().map_or(0, |h| h.poly.nvars())
}

/// Z(s, f, χ) for the character of the given order and conductor (1, 1 for
/// trivial) as JSON `{"num": [[k, c], …], "den": [[N, M, mult], …]}`.
///
/// # Safety
/// `poly` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn igusa_zeta_json(
    poly: *const IgusaPolynomial,
    p: u64,
    char_order: u32,
    char_conductor: u32,
    out: *mut *mut c_char,
) -> IgusaStatus {
    guard(|| {
        check_out(out)?;
        let h = handle(poly)?;
        let z = zeta_only(&h.config(p, char_order, char_conductor))?;
        write_string(out, z.normalized_json().to_string())
    })
}

/// The Newton polyhedron of `poly` as JSON.
///
/// # Safety
/// `poly` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn igusa_newton_json(
    poly: *const IgusaPolynomial,
    out: *mut *mut c_char,
) -> IgusaStatus {
    guard(|| {
        check_out(out)?;
        let h = handle(poly)?;
        let rep = run_newton(&h.config(2, 1, 1))?;
        write_string(out, rep.json["newton"].to_string())
    })
}

/// Oracle series coefficients k = 0..kmax-1 of Z as a JSON array.
///
/// # Safety
/// `poly` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn igusa_oracle_json(
    poly: *const IgusaPolynomial,
    p: u64,
    char_order: u32,
    char_conductor: u32,
    kmax: u32,
    enum_cap: u64,
    out: *mut *mut c_char,
) -> IgusaStatus {
    guard(|| {
        check_out(out)?;
        let h = handle(poly)?;
        if kmax == 0 {
            return Err(Failure::Status(IgusaStatus::ConfigError, "kmax must be at least 1".into()));
        }
        let cfg = h.config(p, char_order, char_conductor);
        cfg.context()?;
        let chi = cfg.character()?;
        let c = twisted_coeffs(&h.poly, &chi, kmax as usize - 1, &OracleDomain::All, enum_cap)?;
        let v: Vec<_> = c.iter().map(coeff_json).collect();
        write_string(out, serde_json::Value::from(v).to_string())
    })
}

/// Full report for a JSON run configuration, e.g. `{"poly": "x*y", "p": 3}`.
/// `*failed_checks` (if non-null) receives the number of failed checks.
///
/// # Safety
/// `config_json` must be a valid string, `out` a valid pointer and
/// `failed_checks` NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn igusa_report_json(
    config_json: *const c_char,
    out: *mut *mut c_char,
    failed_checks: *mut u32,
) -> IgusaStatus {
    guard(|| {
        check_out(out)?;
        let text = read_str(config_json, "config_json")?;
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| Failure::Status(IgusaStatus::ConfigError, format!("config: {e}")))?;
        let rep = run_zeta(&cfg)?;
        if let Some(n) = failed_checks.as_mut() {
            *n = rep.failures.len() as u32;
        }
        write_string(out, rep.json.to_string())
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn igusa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread ("" after a success).
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn igusa_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn igusa_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
