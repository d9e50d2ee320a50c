use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use harmonic_shear_ffi::*;

fn parse(spec: &str, order: usize) -> *mut HsMap {
    let s = CString::new(spec).unwrap();
    let mut map = ptr::null_mut();
    assert_eq!(unsafe { hs_map_parse(s.as_ptr(), order, &mut map) }, HsStatus::Ok);
    assert!(!map.is_null());
    map
}

fn last_error() -> String {
    let p = hs_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn koebe_coefficients_and_values() {
    let k = parse("harmonic_koebe", 10);
    let mut order = 0;
    assert_eq!(unsafe { hs_map_order(k, &mut order) }, HsStatus::Ok);
    assert_eq!(order, 10);

    let mut a = vec![HsComplex { re: f64::NAN, im: f64::NAN }; 11];
    let mut b = a.clone();
    unsafe {
        assert_eq!(hs_map_coeffs(k, HsPart::Analytic, a.as_mut_ptr(), a.len()), HsStatus::Ok);
        assert_eq!(hs_map_coeffs(k, HsPart::CoAnalytic, b.as_mut_ptr(), b.len()), HsStatus::Ok);
    }
    assert!((a[2].re - 2.5).abs() < 1e-12 && (b[2].re - 0.5).abs() < 1e-12);

    let mut w = HsComplex { re: 0.0, im: 0.0 };
    let mut j = 0.0;
    let mut d = HsComplex { re: 0.0, im: 0.0 };
    let z = HsComplex { re: 0.3, im: 0.2 };
    unsafe {
        assert_eq!(hs_map_eval(k, HsComplex { re: 0.0, im: 0.0 }, &mut w), HsStatus::Ok);
        assert_eq!((w.re, w.im), (0.0, 0.0));
        assert_eq!(hs_map_jacobian(k, HsComplex { re: 0.0, im: 0.0 }, &mut j), HsStatus::Ok);
        assert_eq!(j, 1.0);
    }
    // The dilatation of K is z; truncation error is about |z|^order.
    let k60 = parse("harmonic_koebe", 60);
    unsafe {
        assert_eq!(hs_map_dilatation(k60, z, &mut d), HsStatus::Ok);
        hs_map_free(k60);
    }
    assert!((d.re - 0.3).abs() < 1e-9 && (d.im - 0.2).abs() < 1e-9);
    unsafe { hs_map_free(k) };
}

#[test]
fn reports_round_trip() {
    let f4 = parse("f4", 30);
    let class = CString::new("SH0S").unwrap();
    let mut report = ptr::null_mut();
    let mut passed = false;
    let mut margin = f64::NAN;
    let mut json = ptr::null_mut();
    unsafe {
        assert_eq!(hs_check_coeff_bounds(f4, 30, class.as_ptr(), &mut report), HsStatus::Ok);
        assert_eq!(hs_report_passed(report, &mut passed), HsStatus::Ok);
        assert_eq!(hs_report_worst_margin(report, &mut margin), HsStatus::Ok);
        assert_eq!(hs_report_to_json(report, &mut json), HsStatus::Ok);
    }
    assert!(passed);
    assert!(margin.abs() < 1e-9);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert!(text.contains("\"schema\": 1"));
    unsafe {
        hs_string_free(json);
        hs_report_free(report);
        hs_map_free(f4);
    }
}

#[test]
fn grid_checks() {
    // z + conj(z^2/2) has J = 1 - |z|^2.
    let f = parse("f1(n=2)", 8);
    let local = CString::new("local").unwrap();
    let mut report = ptr::null_mut();
    let mut passed = false;
    unsafe {
        assert_eq!(hs_check_grid(f, local.as_ptr(), &mut report), HsStatus::Ok);
        assert_eq!(hs_report_passed(report, &mut passed), HsStatus::Ok);
        hs_report_free(report);
    }
    assert!(passed);

    let curvature = CString::new("curvature").unwrap();
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { hs_check_grid(f, curvature.as_ptr(), &mut report) }, HsStatus::InvalidArgument);
    assert!(report.is_null());
    unsafe { hs_map_free(f) };
}

#[test]
fn errors_are_reported() {
    let mut map = ptr::null_mut();
    let s = CString::new("f1(n=").unwrap();
    assert_eq!(unsafe { hs_map_parse(s.as_ptr(), 10, &mut map) }, HsStatus::Parse);
    assert!(map.is_null());
    assert!(last_error().contains("parse error"));

    assert_eq!(unsafe { hs_map_parse(ptr::null(), 10, &mut map) }, HsStatus::NullPointer);
    let s = CString::new("f2(alpha=0.9, n=3)").unwrap();
    assert_eq!(unsafe { hs_map_parse(s.as_ptr(), 10, &mut map) }, HsStatus::Parse);
    assert!(last_error().contains("alpha"));
}

#[test]
fn numerical_failures() {
    // The image curve of the circle r = 0 is stationary.
    let k = parse("harmonic_koebe", 20);
    let mut out = f64::NAN;
    assert_eq!(unsafe { hs_curvature_at(k, 0.0, 0.0, &mut out) }, HsStatus::Numerical);
    assert!(out.is_nan());
    assert!(last_error().contains("stationary"));
    unsafe { hs_map_free(k) };
}

#[test]
fn curvature_and_radius() {
    let id = parse("f1(n=2)", 8);
    let mut k = 0.0;
    let mut r = 0.0;
    unsafe {
        assert_eq!(hs_curvature_at(id, 0.1, 0.0, &mut k), HsStatus::Ok);
        assert_eq!(hs_radius_of_convexity(id, 128, 1e-6, &mut r), HsStatus::Ok);
        hs_map_free(id);
    }
    assert!(k.is_finite());
    assert!(r > 0.0 && r <= 0.999);
}

#[test]
fn render_is_deterministic() {
    let f3 = parse("half_plane_f3", 0);
    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(hs_render_svg(f3, 16, 8, 0.9, &mut a), HsStatus::Ok);
        assert_eq!(hs_render_svg(f3, 16, 8, 0.9, &mut b), HsStatus::Ok);
        assert_eq!(CStr::from_ptr(a), CStr::from_ptr(b));
        assert_eq!(CStr::from_ptr(a).to_str().unwrap().matches("<polyline").count(), 24);
        let mut c = ptr::null_mut();
        assert_eq!(hs_render_svg(f3, 0, 8, 0.9, &mut c), HsStatus::InvalidArgument);
        hs_string_free(a);
        hs_string_free(b);
        hs_map_free(f3);
    }
}

#[test]
fn null_handles_are_rejected() {
    let mut out = 0;
    assert_eq!(unsafe { hs_map_order(ptr::null(), &mut out) }, HsStatus::NullPointer);
    unsafe {
        hs_map_free(ptr::null_mut());
        hs_report_free(ptr::null_mut());
        hs_string_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(hs_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_entry_points() {
    let header = std::fs::read_to_string(crate_dir().join("include/harmonic_shear.h")).unwrap();
    for name in [
        "hs_map_parse",
        "hs_map_free",
        "hs_map_eval",
        "hs_map_jacobian",
        "hs_map_dilatation",
        "hs_map_coeffs",
        "hs_check_coeff_bounds",
        "hs_check_grid",
        "hs_report_to_json",
        "hs_render_svg",
        "hs_last_error",
        "HS_STATUS_OK",
        "typedef struct HsMap HsMap",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

/// Compiles and runs a C program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    // target/<profile>/deps/<test binary>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libharmonic_shear_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include "harmonic_shear.h"
int main(void) {
    HsMap *k = NULL;
    if (hs_map_parse("harmonic_koebe", 10, &k) != HS_STATUS_OK) return 1;
    HsComplex a[11];
    if (hs_map_coeffs(k, HS_PART_ANALYTIC, a, 11) != HS_STATUS_OK) return 2;
    HsReport *r = NULL;
    if (hs_check_coeff_bounds(k, 10, "SH0S", &r) != HS_STATUS_OK) return 3;
    bool passed = false;
    hs_report_passed(r, &passed);
    HsMap *bad = NULL;
    HsStatus s = hs_map_parse("nope(", 10, &bad);
    printf("%.3f %d %d %s\n", a[2].re, passed, (int)s, hs_last_error() ? "err" : "none");
    hs_report_free(r);
    hs_map_free(k);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "2.500 1 3 err");
}
