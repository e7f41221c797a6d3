use std::ffi::{CStr, CString};
use std::ptr;

use igusa_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { igusa_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(igusa_last_error()) }.to_str().unwrap().to_string()
}

fn parse(text: &str) -> *mut IgusaPolynomial {
    let t = CString::new(text).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { igusa_polynomial_parse(t.as_ptr(), ptr::null(), &mut h) }, IgusaStatus::Ok);
    h
}

#[test]
fn zeta_of_xy() {
    let h = parse("x*y");
    assert_eq!(unsafe { igusa_polynomial_nvars(h) }, 2);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { igusa_zeta_json(h, 3, 1, 1, &mut out) }, IgusaStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["den"], serde_json::json!([[1, 1, 2]]));
    unsafe { igusa_polynomial_free(h) };
}

#[test]
fn newton_and_oracle() {
    let h = parse("x^2*y^2+x^5+y^5");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { igusa_newton_json(h, &mut out) }, IgusaStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["facets"].as_array().unwrap().len(), 4);
    unsafe { igusa_polynomial_free(h) };

    let h = parse("x");
    assert_eq!(unsafe { igusa_oracle_json(h, 3, 1, 1, 3, 1_000_000, &mut out) }, IgusaStatus::Ok);
    assert_eq!(take(out), r#"["2/3","2/9","2/27"]"#);
    unsafe { igusa_polynomial_free(h) };
}

#[test]
fn report_counts_failures() {
    let cfg = CString::new(r#"{"poly":"x^2+x*y+y^2","p":7,"checks":"all"}"#).unwrap();
    let mut out = ptr::null_mut();
    let mut failed = 99u32;
    assert_eq!(unsafe { igusa_report_json(cfg.as_ptr(), &mut out, &mut failed) }, IgusaStatus::Ok);
    assert_eq!(failed, 0);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["oracle"]["series"]["match"], true);
}

#[test]
fn error_codes() {
    let mut h = ptr::null_mut();
    let bad = CString::new("x^2+").unwrap();
    assert_eq!(unsafe { igusa_polynomial_parse(bad.as_ptr(), ptr::null(), &mut h) }, IgusaStatus::ParseError);
    assert!(h.is_null());
    assert!(last_error().contains("syntax error"));

    assert_eq!(unsafe { igusa_polynomial_parse(ptr::null(), ptr::null(), &mut h) }, IgusaStatus::NullPointer);

    let h = parse("x*y");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { igusa_zeta_json(h, 4, 1, 1, &mut out) }, IgusaStatus::ConfigError);
    assert!(out.is_null());
    assert!(last_error().contains("not prime"));
    assert_eq!(unsafe { igusa_zeta_json(ptr::null(), 3, 1, 1, &mut out) }, IgusaStatus::NullPointer);
    unsafe { igusa_polynomial_free(h) };

    let cfg = CString::new(r#"{"poly":"x*y"}"#).unwrap();
    assert_eq!(unsafe { igusa_report_json(cfg.as_ptr(), &mut out, ptr::null_mut()) }, IgusaStatus::ConfigError);

    let cfg = CString::new(r#"{"poly":"x*y*z+x^3+y^3+z^3","p":5,"enum_cap":10}"#).unwrap();
    assert_eq!(unsafe { igusa_report_json(cfg.as_ptr(), &mut out, ptr::null_mut()) }, IgusaStatus::CapExceeded);

    // Success clears the message; NULL frees are no-ops.
    let _ = parse("x");
    assert_eq!(last_error(), "");
    unsafe {
        igusa_polynomial_free(ptr::null_mut());
        igusa_string_free(ptr::null_mut());
    }
}

#[test]
fn explicit_variable_order() {
    let t = CString::new("y^2+x^3").unwrap();
    let vars = CString::new("y,x").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { igusa_polynomial_parse(t.as_ptr(), vars.as_ptr(), &mut h) }, IgusaStatus::Ok);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { igusa_newton_json(h, &mut out) }, IgusaStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["facets"][0]["normal"], serde_json::json!([3, 2]));
    unsafe { igusa_polynomial_free(h) };
    let version = unsafe { CStr::from_ptr(igusa_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

/// The generated header is valid C and C++.
#[test]
fn header_compiles() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/igusa.h");
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let Ok(status) = std::process::Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, header])
            .status()
        else {
            eprintln!("{compiler} not available; skipping");
            continue;
        };
        assert!(status.success(), "{compiler} rejected the header");
    }
}
