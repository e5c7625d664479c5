use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use smms_compare_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 512];
    let mut needed = 0;
    assert_eq!(unsafe { smms_last_error(buf.as_mut_ptr(), buf.len(), &mut needed) }, SmmsStatus::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_string()
}

fn resolve(spec: &str) -> *mut SmmsSpace {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { smms_space_resolve(c(spec).as_ptr(), 3, &mut s) }, SmmsStatus::Ok);
    s
}

#[test]
fn flat_space_quantities() {
    let mut s = ptr::null_mut();
    let st = unsafe { smms_space_new(c("flat").as_ptr(), 3, c("r").as_ptr(), c("0").as_ptr(), 2.0, &mut s) };
    assert_eq!(st, SmmsStatus::Ok);
    let (mut n, mut v, mut area, mut ex) = (0u32, 0.0, 0.0, 1.0);
    unsafe {
        assert_eq!(smms_space_dimension(s, &mut n), SmmsStatus::Ok);
        assert_eq!(smms_ball_volume(s, 1.0, &mut v), SmmsStatus::Ok);
        assert_eq!(smms_sphere_area(s, 1.0, &mut area), SmmsStatus::Ok);
        assert_eq!(smms_curvature_excess(s, 0.0, 1.0, &mut ex), SmmsStatus::Ok);
        assert!(last_error().is_empty());
        assert_eq!(smms_ball_volume(s, 3.0, &mut v), SmmsStatus::Range);
        assert!(last_error().contains("range"));
        smms_space_free(s);
    }
    assert_eq!(n, 3);
    assert!((area - 4.0 * std::f64::consts::PI).abs() < 1e-12);
    assert_eq!(ex, 0.0);
}

#[test]
fn error_codes() {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(smms_space_new(c("bad").as_ptr(), 3, c("2*r").as_ptr(), c("0").as_ptr(), 1.0, &mut s), SmmsStatus::Scenario);
        assert!(s.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(smms_space_new(ptr::null(), 3, c("r").as_ptr(), c("0").as_ptr(), 1.0, &mut s), SmmsStatus::NullPointer);
        let invalid = [0xffu8 as c_char, 0];
        assert_eq!(smms_space_resolve(invalid.as_ptr(), 3, &mut s), SmmsStatus::InvalidUtf8);
        let mut v = 0.0;
        assert_eq!(smms_ball_volume(ptr::null(), 1.0, &mut v), SmmsStatus::NullPointer);
        smms_space_free(ptr::null_mut());
        smms_reports_free(ptr::null_mut());

        let g = resolve("gaussian:c=1");
        let mut rep = ptr::null_mut();
        let mut prm = smms_check_params_default();
        assert_eq!(smms_check(g, c("nope").as_ptr(), &prm, &mut rep), SmmsStatus::UnknownTheorem);
        prm.p = 0.9;
        prm.h = 0.0;
        prm.r = 0.5;
        prm.big_r = 1.0;
        assert_eq!(smms_check(g, c("vol_I").as_ptr(), &prm, &mut rep), SmmsStatus::Parameter);
        assert!(last_error().contains("p"));
        smms_space_free(g);
    }
}

#[test]
fn mc_i_check_through_the_c_abi() {
    let g = resolve("gaussian:c=1");
    let mut prm = smms_check_params_default();
    prm.p = 2.0;
    prm.h = 0.5;
    prm.a = 0.0;
    prm.r = 1.0;
    let mut rep = ptr::null_mut();
    unsafe {
        assert_eq!(smms_check(g, c("mc_I").as_ptr(), &prm, &mut rep), SmmsStatus::Ok);
        let mut len = 0;
        assert_eq!(smms_reports_len(rep, &mut len), SmmsStatus::Ok);
        assert_eq!(len, 2);
        for i in 0..len {
            let mut sum = std::mem::zeroed::<SmmsReportSummary>();
            assert_eq!(smms_reports_get(rep, i, &mut sum), SmmsStatus::Ok);
            assert!(sum.satisfied && sum.status == SmmsCheckStatus::Satisfied);
            assert_eq!(sum.margin, sum.rhs - sum.lhs);
        }
        let mut sum = std::mem::zeroed::<SmmsReportSummary>();
        assert_eq!(smms_reports_get(rep, 2, &mut sum), SmmsStatus::IndexOutOfBounds);

        let mut needed = 0;
        assert_eq!(smms_reports_theorem_id(rep, 0, ptr::null_mut(), 0, &mut needed), SmmsStatus::BufferTooSmall);
        let mut id = vec![0 as c_char; needed];
        assert_eq!(smms_reports_theorem_id(rep, 0, id.as_mut_ptr(), id.len(), &mut needed), SmmsStatus::Ok);
        assert!(CStr::from_ptr(id.as_ptr()).to_str().unwrap().starts_with("mc_I/"));

        let mut v = 0.0;
        assert_eq!(smms_reports_diagnostic(rep, 0, c("curvature_norm").as_ptr(), &mut v), SmmsStatus::Ok);
        assert_eq!(smms_reports_diagnostic(rep, 0, c("missing").as_ptr(), &mut v), SmmsStatus::NotFound);

        smms_reports_render(rep, SmmsFormat::Structured, ptr::null_mut(), 0, &mut needed);
        let mut buf = vec![0 as c_char; needed];
        assert_eq!(smms_reports_render(rep, SmmsFormat::Structured, buf.as_mut_ptr(), buf.len(), &mut needed), SmmsStatus::Ok);
        let json = CStr::from_ptr(buf.as_ptr()).to_str().unwrap();
        assert!(json.contains("\"satisfied\": 2"));
        smms_reports_free(rep);
        smms_space_free(g);
    }
}

#[test]
fn growth_takes_a_radius_list() {
    let e = resolve("model:H=0");
    let radii = [2.0, 3.0, 4.0];
    let mut prm = smms_check_params_default();
    prm.p = 2.0;
    prm.r_list = radii.as_ptr();
    prm.r_list_len = radii.len();
    let mut rep = ptr::null_mut();
    unsafe {
        assert_eq!(smms_check(e, c("growth").as_ptr(), &prm, &mut rep), SmmsStatus::Ok);
        let mut sum = std::mem::zeroed::<SmmsReportSummary>();
        assert_eq!(smms_reports_get(rep, 0, &mut sum), SmmsStatus::Ok);
        assert!(sum.satisfied);
        smms_reports_free(rep);
        smms_space_free(e);
    }
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/smms_compare.h")
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(header()).unwrap();
    for name in [
        "typedef struct SmmsSpace SmmsSpace;",
        "SMMS_STATUS_BUFFER_TOO_SMALL = 10",
        "SmmsStatus smms_check(",
        "void smms_space_free(",
        "SmmsCheckParams smms_check_params_default(void);",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "smms_compare.h"

int main(void) {
    SmmsSpace *s = NULL;
    if (smms_space_resolve("model:n=3,H=1", 3, &s) != SMMS_STATUS_OK) return 10;
    SmmsCheckParams prm = smms_check_params_default();
    prm.p = 2; prm.h = 1; prm.a = 0; prm.r = 0.3; prm.big_r = 0.8;
    SmmsReports *rep = NULL;
    if (smms_check(s, "vol_I", &prm, &rep) != SMMS_STATUS_OK) return 11;
    SmmsReportSummary sum;
    if (smms_reports_get(rep, 0, &sum) != SMMS_STATUS_OK) return 12;
    if (!sum.satisfied || fabs(sum.margin) > 1e-6) return 13;
    if (smms_check(s, "nope", &prm, &rep) != SMMS_STATUS_UNKNOWN_THEOREM) return 14;
    char msg[256];
    size_t needed = 0;
    smms_last_error(msg, sizeof msg, &needed);
    printf("%s\n", msg);
    smms_reports_free(rep);
    smms_space_free(s);
    return 0;
}
"#;

#[test]
fn c_program_links_against_the_static_library() {
    let Some(lib_dir) = std::env::current_exe().unwrap().parent().and_then(Path::parent).map(Path::to_path_buf) else {
        return;
    };
    let lib = lib_dir.join("libsmms_compare_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("unknown theorem"));
}
