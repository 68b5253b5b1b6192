//! C ABI over troplift. Curves live behind an opaque handle; everything else goes
//! in and out as NUL-terminated JSON. Strings returned through `out` pointers are
//! owned by the caller and released with `tl_string_free`.

use serde_json::{json, Value};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use troplift::error::Error;
use troplift::fixtures::{load_curve, load_toric};
use troplift::lift::mesh::smooth_lift;
use troplift::lift::pl::{exactness_check, pl_lift};
use troplift::lift::schedule::GluingSchedule;
use troplift::lift::verify::{hausdorff, symplectic_residual};
use troplift::tropical::PlaneCurve;

/// Status codes; the first four match the exit codes of the command line tool.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TlStatus {
    Ok = 0,
    VerificationFailed = 1,
    InputError = 2,
    NumericError = 3,
    NullArgument = 4,
    Internal = 5,
}

/// Opaque plane tropical curve.
pub struct TlCurve {
    curve: PlaneCurve,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn from_error(e: Error) -> TlStatus {
    set_error(&e.to_string());
    match e.exit_code() {
        3 => TlStatus::NumericError,
        _ => TlStatus::InputError,
    }
}

fn guard(f: impl FnOnce() -> Result<TlStatus, TlStatus>) -> TlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) | Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            TlStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, TlStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(TlStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not UTF-8");
        TlStatus::InputError
    })
}

unsafe fn read_json(p: *const c_char) -> Result<Value, TlStatus> {
    serde_json::from_str(read_str(p)?).map_err(|e| from_error(Error::Input(e.to_string())))
}

unsafe fn write_out(out: *mut *mut c_char, v: &Value) -> Result<(), TlStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(TlStatus::NullArgument);
    }
    *out = CString::new(v.to_string()).unwrap().into_raw();
    Ok(())
}

/// Message of the last failed call on this thread; valid until the next call.
#[no_mangle]
pub extern "C" fn tl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn tl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an explicit curve or a lifted lattice polygon.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_curve_from_json(json: *const c_char, out: *mut *mut TlCurve) -> TlStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return Err(TlStatus::NullArgument);
        }
        *out = ptr::null_mut();
        let v = read_json(json)?;
        let curve = load_curve(v.get("curve").unwrap_or(&v), false).map_err(from_error)?;
        *out = Box::into_raw(Box::new(TlCurve { curve }));
        Ok(TlStatus::Ok)
    })
}

/// # Safety
/// `c` must come from `tl_curve_from_json` or be null.
#[no_mangle]
pub unsafe extern "C" fn tl_curve_free(c: *mut TlCurve) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Curve JSON with balancing, smoothness, PL topology and exactness data.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_curve_report(c: *const TlCurve, out: *mut *mut c_char) -> TlStatus {
    guard(|| {
        let c = c.as_ref().ok_or(TlStatus::NullArgument)?;
        let sched = GluingSchedule::new(&c.curve).map_err(from_error)?;
        let pl = pl_lift(&c.curve, sched.truncation).map_err(from_error)?;
        let ex = exactness_check(&c.curve);
        let v = json!({
            "curve": c.curve.to_json(),
            "balanced": c.curve.is_balanced(),
            "smooth": c.curve.is_smooth(),
            "topology": pl.topology,
            "exact": ex.exact,
            "constants": ex.constants,
        });
        write_out(out, &v)?;
        Ok(TlStatus::Ok)
    })
}

/// Meshes the smooth lift at scale `t` and reports its residual and distance to the PL lift.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_lift_summary(c: *const TlCurve, t: f64, resolution: u32, out: *mut *mut c_char) -> TlStatus {
    guard(|| {
        let c = c.as_ref().ok_or(TlStatus::NullArgument)?;
        if !(t > 0.0 && t.is_finite()) || resolution < 2 {
            set_error("scale must be positive and resolution at least 2");
            return Err(TlStatus::InputError);
        }
        let sched = GluingSchedule::new(&c.curve).map_err(from_error)?;
        let pl = pl_lift(&c.curve, sched.truncation).map_err(from_error)?;
        let mesh = smooth_lift(&c.curve, &sched, t, resolution as usize).map_err(from_error)?;
        let v = json!({
            "scale": t,
            "points": mesh.len(),
            "residual": symplectic_residual(&mesh),
            "hausdorff": hausdorff(&mesh, &pl, resolution as usize).distance,
        });
        write_out(out, &v)?;
        Ok(TlStatus::Ok)
    })
}

/// Boundary, topology and monotonicity report for `{"curve": .., "polygon": ..}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_toric_report(json: *const c_char, out: *mut *mut c_char) -> TlStatus {
    guard(|| {
        let v = read_json(json)?;
        let (curve, poly) = load_toric(&v).map_err(from_error)?;
        let r = troplift::toric::toric_report(&curve, &poly).map_err(from_error)?;
        write_out(out, &r)?;
        Ok(TlStatus::Ok)
    })
}

/// Runs one verification suite; VERIFICATION_FAILED when it ran but did not pass.
///
/// # Safety
/// `suite` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_verify(suite: *const c_char, seed: u64, out: *mut *mut c_char) -> TlStatus {
    guard(|| {
        let name = read_str(suite)?;
        let c = troplift::suites::run(name, seed).map_err(from_error)?;
        write_out(out, &serde_json::to_value(&c).unwrap())?;
        Ok(if c.passed { TlStatus::Ok } else { TlStatus::VerificationFailed })
    })
}
