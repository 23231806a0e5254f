use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use bordered_moduli_ffi::*;

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    bm_string_free(s);
    out
}

#[test]
fn strata_handle() {
    unsafe {
        let m = [0u32, 0, 0];
        let mut p = ptr::null_mut();
        assert_eq!(bm_strata_enumerate(0, 3, 0, m.as_ptr(), m.len(), &mut p), BmStatus::Ok);
        assert_eq!(bm_strata_len(p), 45);
        let counts: Vec<usize> = (0..=3).rev().map(|d| bm_strata_count_in_dim(p, d)).collect();
        assert_eq!(counts, vec![1, 9, 21, 14]);
        let mut dim = -1;
        assert_eq!(bm_strata_dim(p, 0, &mut dim), BmStatus::Ok);
        assert_eq!(dim, 3);
        let mut json = ptr::null_mut();
        assert_eq!(bm_strata_stratum_json(p, 0, &mut json), BmStatus::Ok);
        let json = take(json);
        assert!(bordered_moduli::strata::StratumGraph::from_json(&json).is_ok());
        let mut dot = ptr::null_mut();
        assert_eq!(bm_strata_dot(p, &mut dot), BmStatus::Ok);
        assert!(take(dot).starts_with("digraph"));
        let mut iso = false;
        assert_eq!(bm_strata_is_associahedron(p, &mut iso), BmStatus::Ok);
        assert!(iso);
        assert_eq!(bm_strata_dim(p, 45, &mut dim), BmStatus::Domain);
        assert!(take(bm_last_error_message()).contains("out of range"));
        bm_strata_free(p);
        bm_strata_free(ptr::null_mut());
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(bm_strata_enumerate(0, 1, 0, [1u32].as_ptr(), 1, &mut p), BmStatus::Domain);
        assert!(p.is_null());
        assert_eq!(bm_strata_enumerate(0, 2, 0, ptr::null(), 2, &mut p), BmStatus::NullPointer);
        assert_eq!(bm_strata_enumerate(0, 3, 0, [0u32; 3].as_ptr(), 3, ptr::null_mut()), BmStatus::NullPointer);
        let mut v = 0;
        assert_eq!(bm_fredholm_index(1, 3, 0, 1, &mut v), BmStatus::Domain);
        assert_eq!(bm_fredholm_index(4, 3, 0, 1, &mut v), BmStatus::Ok);
        assert!(bm_last_error_message().is_null());
        let mut s = ptr::null_mut();
        assert_eq!(bm_invariant(1, 2, 2, [1u32, 1].as_ptr(), 2, 1, &mut s), BmStatus::Unsupported);
        assert_eq!(bm_invariant(0, 1, 3, [3u32, 0].as_ptr(), 1, 1, &mut s), BmStatus::Ok);
        assert_eq!(take(s), "1/9");
    }
}

#[test]
fn scalar_functions() {
    unsafe {
        assert_eq!(bm_classify_count(4), 8);
        let mut v = -1;
        assert_eq!(bm_virtual_dim(0, 3, 2, 2, 0, [0u32, 0].as_ptr(), 2, &mut v), BmStatus::Ok);
        assert_eq!(v, 0);
        assert_eq!(bm_moduli_dim(0, 3, 0, [0u32; 3].as_ptr(), 3, &mut v), BmStatus::Ok);
        assert_eq!(v, 3);
        let mut e = 0.0;
        assert_eq!(bm_beta_energy(1e-2, 256, &mut e), BmStatus::Ok);
        let exact = 4.0 * std::f64::consts::PI / 100f64.ln();
        assert!((e - exact).abs() < 0.02 * exact);
        assert_eq!(bm_beta_energy(2.0, 256, &mut e), BmStatus::Domain);
        assert_eq!(CStr::from_ptr(bm_version()).to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}

fn target_dir() -> PathBuf {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let base = std::env::var_os("CARGO_TARGET_DIR").map(PathBuf::from).unwrap_or_else(|| manifest.join("../../target"));
    let profile = if cfg!(debug_assertions) { "debug" } else { "release" };
    base.join(profile)
}

#[test]
fn header_compiles_and_links_from_c() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/bordered_moduli.h");
    let text = std::fs::read_to_string(&header).expect("header is generated by the build script");
    for symbol in ["bm_strata_enumerate", "bm_strata_free", "bm_invariant", "bm_string_free", "BM_STATUS_OK"] {
        assert!(text.contains(symbol), "{symbol} missing from header");
    }
    let lib = target_dir().join("libbordered_moduli_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping C link test: no C compiler or static library at {}", lib.display());
        return;
    }
    let dir = std::env::temp_dir().join(format!("bm_capi_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("smoke.c");
    std::fs::write(
        &src,
        r#"#include "bordered_moduli.h"
#include <stdio.h>
#include <string.h>
int main(void) {
    uint32_t m[3] = {0, 0, 0};
    BmStrataPoset *p = NULL;
    if (bm_strata_enumerate(0, 3, 0, m, 3, &p) != BM_STATUS_OK) return 1;
    if (bm_strata_len(p) != 45 || bm_strata_count_in_dim(p, 1) != 21) return 2;
    bm_strata_free(p);
    uint32_t n[1] = {3};
    char *v = NULL;
    if (bm_invariant(0, 1, 3, n, 1, 1, &v) != BM_STATUS_OK || strcmp(v, "1/9") != 0) return 3;
    bm_string_free(v);
    if (bm_strata_enumerate(0, 1, 0, NULL, 1, &p) != BM_STATUS_NULL_POINTER) return 4;
    char *err = bm_last_error_message();
    if (err == NULL) return 5;
    bm_string_free(err);
    printf("ok\n");
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke test failed to compile");
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok", "exit status {:?}", out.status);
    let _ = std::fs::remove_dir_all(&dir);
}
