use std::ffi::{CStr, CString};
use std::ptr;

use tricircle_ffi::*;

fn golden() -> *mut TcConfig {
    let mut h = ptr::null_mut();
    let kind = CString::new("golden").unwrap();
    assert_eq!(unsafe { tc_config_generate(kind.as_ptr(), 0, 0, &mut h) }, TcStatus::Ok);
    assert!(!h.is_null());
    h
}

#[test]
fn golden_counts_through_the_c_interface() {
    let h = golden();
    let mut sizes = [0usize; 3];
    assert_eq!(unsafe { tc_config_sizes(h, sizes.as_mut_ptr()) }, TcStatus::Ok);
    assert_eq!(sizes, [2, 2, 1]);
    let mut s = TcCountSummary::default();
    assert_eq!(unsafe { tc_count(h, &mut s) }, TcStatus::Ok);
    assert_eq!((s.triples, s.m, s.q, s.sum_p, s.all_hold), (2, 2, 4, 2, 1));
    let mut inc = TcIncidenceSummary::default();
    assert_eq!(unsafe { tc_count_incidences(h, &mut inc) }, TcStatus::Ok);
    assert!(inc.i >= 2 && inc.i_prime >= inc.i);
    unsafe { tc_config_free(h) };
}

#[test]
fn curve_eval_returns_exact_strings() {
    let h = golden();
    let c = |s: &str| CString::new(s).unwrap();
    let (a, b, x, y, z) = (c("-1"), c("1/2"), c("-1"), c("1/2"), c("-1"));
    let mut out = ptr::null_mut();
    let st = unsafe { tc_curve_eval(h, a.as_ptr(), b.as_ptr(), x.as_ptr(), y.as_ptr(), &mut out) };
    assert_eq!(st, TcStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(out) }.to_str().unwrap(), "0");
    unsafe { tc_string_free(out) };
    let st = unsafe { tc_curve_eval(h, a.as_ptr(), b.as_ptr(), x.as_ptr(), z.as_ptr(), &mut out) };
    assert_eq!(st, TcStatus::Ok);
    assert_ne!(unsafe { CStr::from_ptr(out) }.to_str().unwrap(), "0");
    unsafe { tc_string_free(out) };
    let bad = c("1/0");
    let st = unsafe { tc_curve_eval(h, bad.as_ptr(), b.as_ptr(), x.as_ptr(), y.as_ptr(), &mut out) };
    assert_eq!(st, TcStatus::Parse);
    assert!(!tc_last_error_message().is_null());
    unsafe { tc_config_free(h) };
}

#[test]
fn save_load_and_json() {
    let h = golden();
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("g.json").to_str().unwrap()).unwrap();
    assert_eq!(unsafe { tc_config_save(h, path.as_ptr()) }, TcStatus::Ok);
    let mut h2 = ptr::null_mut();
    assert_eq!(unsafe { tc_config_load(path.as_ptr(), &mut h2) }, TcStatus::Ok);
    let (mut j1, mut j2) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(tc_config_json(h, &mut j1), TcStatus::Ok);
        assert_eq!(tc_config_json(h2, &mut j2), TcStatus::Ok);
        assert_eq!(CStr::from_ptr(j1), CStr::from_ptr(j2));
        tc_string_free(j1);
        tc_string_free(j2);
    }
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { tc_report_json(h2, 1, &mut rep) }, TcStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(rep) }.to_str().unwrap()).unwrap();
    assert_eq!(v["M"], 2);
    assert_eq!(v["Q"], 4);
    unsafe {
        tc_string_free(rep);
        tc_config_free(h);
        tc_config_free(h2);
    }
}

#[test]
fn errors_are_reported() {
    let mut h = ptr::null_mut();
    let kind = CString::new("no-such-kind").unwrap();
    assert_eq!(unsafe { tc_config_generate(kind.as_ptr(), 4, 0, &mut h) }, TcStatus::InvalidArgument);
    assert!(h.is_null());
    let msg = unsafe { CStr::from_ptr(tc_last_error_message()) }.to_str().unwrap();
    assert!(msg.contains("no-such-kind"));
    let mut s = TcCountSummary::default();
    assert_eq!(unsafe { tc_count(ptr::null(), &mut s) }, TcStatus::NullPointer);
    let missing = CString::new("/nonexistent/cfg.json").unwrap();
    assert_eq!(unsafe { tc_config_load(missing.as_ptr(), &mut h) }, TcStatus::Io);
    unsafe { tc_config_free(ptr::null_mut()) };
}

#[test]
fn header_declares_every_symbol() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/tricircle.h")).unwrap();
    for sym in [
        "tc_config_generate",
        "tc_config_load",
        "tc_config_save",
        "tc_config_free",
        "tc_config_sizes",
        "tc_config_json",
        "tc_count",
        "tc_count_incidences",
        "tc_curve_eval",
        "tc_report_json",
        "tc_string_free",
        "tc_last_error_message",
        "typedef struct TcConfig TcConfig",
        "TC_STATUS_OK",
        "TcCountSummary",
    ] {
        assert!(header.contains(sym), "missing {sym}");
    }
}
