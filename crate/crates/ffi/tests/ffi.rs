use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use plurilab_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    unsafe { pl_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn region_sample_and_green() {
    let json = CString::new(r#"{"type":"disk","center":[0,0],"radius":1}"#).unwrap();
    let mut region = ptr::null_mut();
    assert_eq!(unsafe { pl_region_from_json(json.as_ptr(), &mut region) }, PlStatus::Ok);
    let mut dim = 0;
    assert_eq!(unsafe { pl_region_dimension(region, &mut dim) }, PlStatus::Ok);
    assert_eq!(dim, 1);
    let mut inside = false;
    assert_eq!(unsafe { pl_region_contains(region, [0.5, 0.5].as_ptr(), 1, &mut inside) }, PlStatus::Ok);
    assert!(inside);

    let mut sample = ptr::null_mut();
    assert_eq!(unsafe { pl_region_sample(region, 1.0, 256, &mut sample) }, PlStatus::Ok);
    let mut len = 0;
    assert_eq!(unsafe { pl_sample_len(sample, &mut len) }, PlStatus::Ok);
    assert!(len >= 200);
    let mut v = 0.0;
    assert_eq!(unsafe { pl_green_value(sample, [2.0, 0.0].as_ptr(), 1, 8, 64, false, &mut v) }, PlStatus::Ok);
    assert!((v - 2f64.ln()).abs() < 0.01);

    let mut gamma = 0.0;
    let mut cap = 0.0;
    assert_eq!(unsafe { pl_robin(region, &mut gamma, &mut cap) }, PlStatus::Ok);
    assert!((cap - 1.0).abs() < 0.03);
    unsafe {
        pl_sample_free(sample);
        pl_region_free(region);
    }
}

#[test]
fn errors_are_reported() {
    let mut region = ptr::null_mut();
    let bad = CString::new("{not json").unwrap();
    assert_eq!(unsafe { pl_region_from_json(bad.as_ptr(), &mut region) }, PlStatus::InvalidJson);
    assert!(region.is_null());
    assert!(!last_error().is_empty());

    let neg = CString::new(r#"{"type":"disk","center":[0,0],"radius":-1}"#).unwrap();
    assert_eq!(unsafe { pl_region_from_json(neg.as_ptr(), &mut region) }, PlStatus::InvalidArgument);
    assert!(last_error().contains("radius"));

    assert_eq!(unsafe { pl_region_from_json(ptr::null(), &mut region) }, PlStatus::NullPointer);
    let mut dim = 0;
    assert_eq!(unsafe { pl_region_dimension(ptr::null(), &mut dim) }, PlStatus::NullPointer);

    let ok = CString::new(r#"{"type":"segment","a":-1,"b":1}"#).unwrap();
    assert_eq!(unsafe { pl_region_from_json(ok.as_ptr(), &mut region) }, PlStatus::Ok);
    assert!(last_error().is_empty());
    let mut sample = ptr::null_mut();
    assert_eq!(unsafe { pl_region_sample(region, 1.0, 64, &mut sample) }, PlStatus::Ok);
    let mut v = 0.0;
    // Phases must be a multiple of 4.
    assert_eq!(unsafe { pl_green_value(sample, [2.0, 0.0].as_ptr(), 1, 4, 6, false, &mut v) }, PlStatus::Computation);
    unsafe {
        pl_sample_free(sample);
        pl_region_free(region);
        pl_region_free(ptr::null_mut());
    }
}

#[test]
fn family_operations() {
    let json = CString::new(r#"{"type":"linear_form_product","form":[[1,0]],"zeros":{"rule":"arithmetic","scale":1}}"#).unwrap();
    let mut fam = ptr::null_mut();
    assert_eq!(unsafe { pl_family_from_json(json.as_ptr(), &mut fam) }, PlStatus::Ok);
    let lambda = [1.0, 0.0];
    let mut count = 0u64;
    assert_eq!(unsafe { pl_family_counting(fam, 10, 5.5, lambda.as_ptr(), 1, &mut count) }, PlStatus::Ok);
    assert_eq!(count, 5);
    let (mut re, mut im, mut bound) = (0.0, 0.0, 0.0);
    assert_eq!(
        unsafe { pl_family_tail_sum(fam, 10, lambda.as_ptr(), 1, 5.5, &mut re, &mut im, &mut bound) },
        PlStatus::Ok
    );
    assert!((re - 1627.0 / 2520.0).abs() < 1e-12 && im == 0.0 && bound == 0.0);
    let (mut la, mut ar) = (0.0, 0.0);
    assert_eq!(unsafe { pl_family_evaluate(fam, 10, [3.0, 0.0].as_ptr(), 1, &mut la, &mut ar) }, PlStatus::Ok);
    assert_eq!(la, f64::NEG_INFINITY);
    let mut avg = 1.0;
    assert_eq!(unsafe { pl_family_circle_average(fam, 4, [0.5, 0.0].as_ptr(), 1, 1024, &mut avg) }, PlStatus::Ok);
    assert!(avg.abs() < 1e-9);
    unsafe { pl_family_free(fam) };
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(pl_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/plurilab.h")).unwrap();
    for name in [
        "PL_STATUS_OK",
        "typedef struct PlRegion PlRegion",
        "pl_region_from_json",
        "pl_green_value",
        "pl_family_circle_average",
        "pl_last_error_message",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

/// `target/<profile>/` of this build.
fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let lib = profile_dir().join("libplurilab_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <math.h>
#include <stdio.h>
#include "plurilab.h"
int main(void) {
    PlRegion *r = NULL;
    if (pl_region_from_json("{\"type\":\"segment\",\"a\":-2,\"b\":2}", &r) != PL_STATUS_OK) return 10;
    PlSample *s = NULL;
    if (pl_region_sample(r, 2.0, 400, &s) != PL_STATUS_OK) return 11;
    double z[2] = {3.0, 0.0}, v = 0.0;
    if (pl_green_value(s, z, 1, 16, 64, true, &v) != PL_STATUS_OK) return 12;
    PlRegion *bad = NULL;
    if (pl_region_from_json("[", &bad) != PL_STATUS_INVALID_JSON || bad != NULL) return 13;
    char msg[256];
    if (pl_last_error_message(msg, sizeof msg) <= 1) return 14;
    pl_sample_free(s);
    pl_region_free(r);
    printf("%.6f\n", v);
    return fabs(v - acosh(1.5)) < 0.02 ? 0 : 15;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(Path::new(env!("CARGO_MANIFEST_DIR")).join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stdout));
}
