//! C interface to `smms-compare`.
//!
//! Spaces and report lists are opaque handles owned by the caller and
//! released with the matching `*_free` function. Every function returns an
//! [`SmmsStatus`]; on failure the message is available from
//! [`smms_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use smms_compare::report::{self, Format};
use smms_compare::scenarios;
use smms_compare::theorems::{run_check, CheckContext, CheckParams, THEOREM_IDS};
use smms_compare::{CheckReport, CheckStatus, Error, RotSymSpace};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmmsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Parameters outside the admissible range of a routine.
    Parameter = 3,
    /// Radius outside the domain or the comparison range.
    Range = 4,
    /// The space definition is malformed or fails its invariants.
    Scenario = 5,
    /// Quadrature, root finding or an ODE solve failed.
    Numerical = 6,
    UnknownTheorem = 7,
    IndexOutOfBounds = 8,
    NotFound = 9,
    /// The output buffer is too small; the required size was written.
    BufferTooSmall = 10,
    Panic = 11,
}

/// Outcome of one check.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmmsCheckStatus {
    Satisfied = 0,
    Violated = 1,
    Skipped = 2,
    Failed = 3,
}

/// Output format for [`smms_reports_render`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmmsFormat {
    Csv = 0,
    Structured = 1,
}

/// A rotationally symmetric weighted space.
pub struct SmmsSpace(RotSymSpace);

/// Reports produced by one [`smms_check`] call.
pub struct SmmsReports(Vec<CheckReport>);

/// Check parameters; NaN marks an unset value.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SmmsCheckParams {
    pub p: f64,
    pub h: f64,
    pub a: f64,
    pub r: f64,
    pub big_r: f64,
    pub m: f64,
    pub k: f64,
    pub alpha: f64,
    pub delta: f64,
    pub r1: f64,
    pub r2: f64,
    pub big_r1: f64,
    pub big_r2: f64,
    /// Radii for the growth check; may be null when `r_list_len` is 0.
    pub r_list: *const f64,
    pub r_list_len: usize,
}

/// Numbers of one report.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SmmsReportSummary {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub check_tol: f64,
    pub satisfied: bool,
    pub status: SmmsCheckStatus,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

struct Fail(SmmsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parameter(_) => SmmsStatus::Parameter,
            Error::Range(_) => SmmsStatus::Range,
            Error::Invariant { .. } | Error::Scenario(_) | Error::Expr(_) => SmmsStatus::Scenario,
            Error::Convergence { .. } | Error::NonFiniteIntegrand { .. } | Error::Bracket { .. } | Error::Solver(_) => {
                SmmsStatus::Numerical
            }
        };
        Fail(code, e.to_string())
    }
}

fn fail(code: SmmsStatus, msg: impl Into<String>) -> Fail {
    Fail(code, msg.into())
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> SmmsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            SmmsStatus::Ok
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal panic: {msg}"));
            SmmsStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(fail(SmmsStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(SmmsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(h: *const T, what: &str) -> Result<&'a T, Fail> {
    h.as_ref().ok_or_else(|| fail(SmmsStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| fail(SmmsStatus::NullPointer, "output pointer is null"))
}

/// Copy `s` with a trailing NUL into `buf`; `needed` receives the full size.
unsafe fn write_text(s: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> Result<(), Fail> {
    let size = s.len() + 1;
    if !needed.is_null() {
        *needed = size;
    }
    if buf.is_null() || cap < size {
        return Err(fail(SmmsStatus::BufferTooSmall, format!("buffer of {cap} bytes, need {size}")));
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

/// Copy the calling thread's last error message into `buf`.
///
/// # Safety
/// `buf` must be valid for `cap` bytes or null; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn smms_last_error(buf: *mut c_char, cap: usize, needed: *mut usize) -> SmmsStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match catch_unwind(AssertUnwindSafe(|| write_text(&msg, buf, cap, needed))) {
        Ok(Ok(())) => SmmsStatus::Ok,
        Ok(Err(Fail(code, _))) => code,
        Err(_) => SmmsStatus::Panic,
    }
}

/// Build a space from warp and weight expressions in `r`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn smms_space_new(
    name: *const c_char,
    dimension: u32,
    warp: *const c_char,
    weight: *const c_char,
    r_max: f64,
    out_space: *mut *mut SmmsSpace,
) -> SmmsStatus {
    guard(|| {
        let slot = out(out_space)?;
        let space = RotSymSpace::new(text(name, "name")?, dimension, text(warp, "warp")?, text(weight, "weight")?, r_max)?;
        *slot = Box::into_raw(Box::new(SmmsSpace(space)));
        Ok(())
    })
}

/// Build a space from a catalog spec (`gaussian:c=1`), a scenario file
/// path or an inline scenario object.
///
/// # Safety
/// `spec` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn smms_space_resolve(
    spec: *const c_char,
    default_dimension: u32,
    out_space: *mut *mut SmmsSpace,
) -> SmmsStatus {
    guard(|| {
        let slot = out(out_space)?;
        let space = scenarios::resolve(text(spec, "spec")?, default_dimension)?;
        *slot = Box::into_raw(Box::new(SmmsSpace(space)));
        Ok(())
    })
}

/// # Safety
/// `space` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn smms_space_free(space: *mut SmmsSpace) {
    if !space.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(space))));
    }
}

/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn smms_space_dimension(space: *const SmmsSpace, out_n: *mut u32) -> SmmsStatus {
    guard(|| {
        *out(out_n)? = handle(space, "space")?.0.n();
        Ok(())
    })
}

/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn smms_space_r_max(space: *const SmmsSpace, out_r: *mut f64) -> SmmsStatus {
    guard(|| {
        *out(out_r)? = handle(space, "space")?.0.r_max();
        Ok(())
    })
}

/// Weighted area `A_f(r)` of the geodesic sphere.
///
/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn smms_sphere_area(space: *const SmmsSpace, r: f64, out_area: *mut f64) -> SmmsStatus {
    guard(|| {
        *out(out_area)? = handle(space, "space")?.0.sphere_area(r)?;
        Ok(())
    })
}

/// Weighted volume `V_f(R)` of the pole ball.
///
/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn smms_ball_volume(space: *const SmmsSpace, big_r: f64, out_volume: *mut f64) -> SmmsStatus {
    guard(|| {
        let ctx = CheckContext::default();
        *out(out_volume)? = handle(space, "space")?.0.ball_volume(big_r, &ctx.quad)?;
        Ok(())
    })
}

/// Curvature excess `((n−1)H − λ_min(Ric_f))_+` at radius `r`.
///
/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn smms_curvature_excess(
    space: *const SmmsSpace,
    h: f64,
    r: f64,
    out_excess: *mut f64,
) -> SmmsStatus {
    guard(|| {
        *out(out_excess)? = handle(space, "space")?.0.curvature(h, r)?.excess;
        Ok(())
    })
}

/// Mean curvature error `(m_f − m_H − a)_+` at radius `r`.
///
/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn smms_mean_curvature_error(
    space: *const SmmsSpace,
    h: f64,
    a: f64,
    r: f64,
    out_error: *mut f64,
) -> SmmsStatus {
    guard(|| {
        *out(out_error)? = handle(space, "space")?.0.mean_curvatures(h, a, r)?.error_i;
        Ok(())
    })
}

/// Parameters with every field unset.
#[no_mangle]
pub extern "C" fn smms_check_params_default() -> SmmsCheckParams {
    SmmsCheckParams {
        p: f64::NAN,
        h: f64::NAN,
        a: f64::NAN,
        r: f64::NAN,
        big_r: f64::NAN,
        m: f64::NAN,
        k: f64::NAN,
        alpha: f64::NAN,
        delta: f64::NAN,
        r1: f64::NAN,
        r2: f64::NAN,
        big_r1: f64::NAN,
        big_r2: f64::NAN,
        r_list: ptr::null(),
        r_list_len: 0,
    }
}

fn opt(v: f64) -> Option<f64> {
    (!v.is_nan()).then_some(v)
}

unsafe fn check_params(p: &SmmsCheckParams) -> Result<CheckParams, Fail> {
    let r_list = if p.r_list_len == 0 {
        None
    } else if p.r_list.is_null() {
        return Err(fail(SmmsStatus::NullPointer, "r_list is null"));
    } else {
        Some(std::slice::from_raw_parts(p.r_list, p.r_list_len).to_vec())
    };
    Ok(CheckParams {
        p: opt(p.p),
        h: opt(p.h),
        a: opt(p.a),
        r: opt(p.r),
        big_r: opt(p.big_r),
        m: opt(p.m),
        k: opt(p.k),
        alpha: opt(p.alpha),
        delta: opt(p.delta),
        r1: opt(p.r1),
        r2: opt(p.r2),
        big_r1: opt(p.big_r1),
        big_r2: opt(p.big_r2),
        r_list,
    })
}

/// Run one theorem family (`mc_I`, `vol_I`, ...) with default tolerances.
///
/// # Safety
/// `space` must be a live handle, `theorem` NUL-terminated, `params`
/// readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn smms_check(
    space: *const SmmsSpace,
    theorem: *const c_char,
    params: *const SmmsCheckParams,
    out_reports: *mut *mut SmmsReports,
) -> SmmsStatus {
    guard(|| {
        let slot = out(out_reports)?;
        let space = handle(space, "space")?;
        let theorem = text(theorem, "theorem")?;
        if !THEOREM_IDS.contains(&theorem) {
            return Err(fail(SmmsStatus::UnknownTheorem, format!("unknown theorem `{theorem}`")));
        }
        let prm = check_params(handle(params, "params")?)?;
        let reports = run_check(theorem, &space.0, &prm, &CheckContext::default())?;
        *slot = Box::into_raw(Box::new(SmmsReports(reports)));
        Ok(())
    })
}

/// # Safety
/// `reports` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn smms_reports_free(reports: *mut SmmsReports) {
    if !reports.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(reports))));
    }
}

/// # Safety
/// `reports` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn smms_reports_len(reports: *const SmmsReports, out_len: *mut usize) -> SmmsStatus {
    guard(|| {
        *out(out_len)? = handle(reports, "reports")?.0.len();
        Ok(())
    })
}

unsafe fn report_at<'a>(reports: *const SmmsReports, index: usize) -> Result<&'a CheckReport, Fail> {
    let list = &handle(reports, "reports")?.0;
    list.get(index)
        .ok_or_else(|| fail(SmmsStatus::IndexOutOfBounds, format!("index {index} of {}", list.len())))
}

/// # Safety
/// `reports` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn smms_reports_get(
    reports: *const SmmsReports,
    index: usize,
    out_summary: *mut SmmsReportSummary,
) -> SmmsStatus {
    guard(|| {
        let slot = out(out_summary)?;
        let r = report_at(reports, index)?;
        *slot = SmmsReportSummary {
            lhs: r.lhs,
            rhs: r.rhs,
            margin: r.margin,
            check_tol: r.check_tol,
            satisfied: r.satisfied,
            status: match r.status {
                CheckStatus::Satisfied => SmmsCheckStatus::Satisfied,
                CheckStatus::Violated => SmmsCheckStatus::Violated,
                CheckStatus::Skipped => SmmsCheckStatus::Skipped,
                CheckStatus::Failed => SmmsCheckStatus::Failed,
            },
        };
        Ok(())
    })
}

/// Copy the theorem id of a report into `buf`.
///
/// # Safety
/// `reports` must be a live handle; `buf` valid for `cap` bytes or null.
#[no_mangle]
pub unsafe extern "C" fn smms_reports_theorem_id(
    reports: *const SmmsReports,
    index: usize,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> SmmsStatus {
    guard(|| write_text(&report_at(reports, index)?.theorem_id, buf, cap, needed))
}

/// Look up a named diagnostic of a report.
///
/// # Safety
/// `reports` must be a live handle, `name` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn smms_reports_diagnostic(
    reports: *const SmmsReports,
    index: usize,
    name: *const c_char,
    out_value: *mut f64,
) -> SmmsStatus {
    guard(|| {
        let slot = out(out_value)?;
        let name = text(name, "name")?;
        *slot = *report_at(reports, index)?
            .diagnostics
            .get(name)
            .ok_or_else(|| fail(SmmsStatus::NotFound, format!("no diagnostic `{name}`")))?;
        Ok(())
    })
}

/// Render all reports as CSV or JSON into `buf`.
///
/// # Safety
/// `reports` must be a live handle; `buf` valid for `cap` bytes or null.
#[no_mangle]
pub unsafe extern "C" fn smms_reports_render(
    reports: *const SmmsReports,
    format: SmmsFormat,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> SmmsStatus {
    guard(|| {
        let format = match format {
            SmmsFormat::Csv => Format::Csv,
            SmmsFormat::Structured => Format::Structured,
        };
        let text = report::render(&handle(reports, "reports")?.0, format)?;
        write_text(&text, buf, cap, needed)
    })
}
