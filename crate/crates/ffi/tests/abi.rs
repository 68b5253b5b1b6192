use serde_json::Value;
use std::ffi::{c_char, CStr, CString};
use std::ptr;
use troplift_ffi::*;

fn take(s: *mut c_char) -> Value {
    assert!(!s.is_null());
    let v = serde_json::from_str(unsafe { CStr::from_ptr(s) }.to_str().unwrap()).unwrap();
    unsafe { tl_string_free(s) };
    v
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(tl_last_error()) }.to_string_lossy().into_owned()
}

const LINE: &str = r#"{"vertices": [[0,0]], "rays": [[0,[-1,0]],[0,[0,-1]],[0,[1,1]]]}"#;

#[test]
fn curve_round_trip() {
    let src = CString::new(LINE).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { tl_curve_from_json(src.as_ptr(), &mut h) }, TlStatus::Ok);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { tl_curve_report(h, &mut out) }, TlStatus::Ok);
    let v = take(out);
    assert_eq!(v["smooth"], true);
    assert_eq!(v["exact"], true);
    assert_eq!(v["topology"]["euler"], -1);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { tl_lift_summary(h, 1.0, 8, &mut out) }, TlStatus::Ok);
    let v = take(out);
    assert!(v["residual"].as_f64().unwrap() < 1e-6);
    assert_eq!(unsafe { tl_lift_summary(h, -1.0, 8, &mut out) }, TlStatus::InputError);
    unsafe { tl_curve_free(h) };
}

#[test]
fn errors_are_reported() {
    let mut h = ptr::null_mut();
    let bad = CString::new("{ nope").unwrap();
    assert_eq!(unsafe { tl_curve_from_json(bad.as_ptr(), &mut h) }, TlStatus::InputError);
    assert!(h.is_null());
    assert!(last_error().starts_with("input error"));
    assert_eq!(unsafe { tl_curve_from_json(ptr::null(), &mut h) }, TlStatus::NullArgument);
    let ok = CString::new(LINE).unwrap();
    assert_eq!(unsafe { tl_curve_from_json(ok.as_ptr(), ptr::null_mut()) }, TlStatus::NullArgument);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { tl_curve_report(ptr::null(), &mut out) }, TlStatus::NullArgument);
    unsafe { tl_curve_free(ptr::null_mut()) };
    unsafe { tl_string_free(ptr::null_mut()) };
}

#[test]
fn toric_and_verify() {
    let src = CString::new(
        r#"{"polygon": {"vertices": [[0,0],[3,0],[0,3]]},
            "curve": {"vertices": [[1,1]], "rays": [[0,[-1,-1]],[0,[2,-1]],[0,[-1,2]]]}}"#,
    )
    .unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { tl_toric_report(src.as_ptr(), &mut out) }, TlStatus::Ok);
    let v = take(out);
    assert_eq!(v["delzant"], true);
    assert_eq!(v["monotone"]["proportional"], true);

    let s = CString::new("topology").unwrap();
    assert_eq!(unsafe { tl_verify(s.as_ptr(), 1, &mut out) }, TlStatus::Ok);
    assert_eq!(take(out)["passed"], true);
    let s = CString::new("nope").unwrap();
    assert_eq!(unsafe { tl_verify(s.as_ptr(), 1, &mut out) }, TlStatus::InputError);
}

#[test]
fn header_lists_the_interface() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/troplift.h")).unwrap();
    for f in ["tl_curve_from_json", "tl_curve_free", "tl_curve_report", "tl_lift_summary", "tl_toric_report", "tl_verify", "tl_string_free", "tl_last_error"] {
        assert!(h.contains(f), "{f} missing from header");
    }
    assert!(h.contains("TL_STATUS_INPUT_ERROR = 2"));
    assert!(h.contains("typedef struct TlCurve TlCurve"));
}
