use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use crossnum_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    crossnum_string_free(s);
    out
}

#[test]
fn solve_k33_from_edge_list() {
    unsafe {
        let mut g = ptr::null_mut();
        let text = cstr("0 3\n0 4\n0 5\n1 3\n1 4\n1 5\n2 3\n2 4\n2 5\n");
        assert_eq!(crossnum_graph_from_edge_list(text.as_ptr(), 6, &mut g), CrossnumStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(crossnum_solve(g, ptr::null(), &mut r), CrossnumStatus::Ok);
        let mut v = 0u64;
        assert_eq!(crossnum_report_value_u64(r, &mut v), CrossnumStatus::Ok);
        assert_eq!(v, 1);
        let mut s = ptr::null_mut();
        assert_eq!(crossnum_report_json(r, &mut s), CrossnumStatus::Ok);
        let json: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(json["crossing_number"], "1");
        assert_eq!(crossnum_report_drawing_json(r, g, &mut s), CrossnumStatus::Ok);
        let d = crossnum::drawing::CombinatorialDrawing::from_json(&take(s)).unwrap();
        assert_eq!(d.crossings().len(), 1);
        assert_eq!(crossnum_verify(r, g), CrossnumStatus::Ok);
        let mut o = 0u64;
        assert_eq!(crossnum_oracle(g, 4, &mut o), CrossnumStatus::Ok);
        assert_eq!(o, 1);
        crossnum_report_free(r);
        crossnum_graph_free(g);
    }
}

#[test]
fn errors_map_to_statuses() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(crossnum_graph_from_edge_list(ptr::null(), 6, &mut g), CrossnumStatus::NullArgument);
        assert_eq!(crossnum_graph_from_edge_list(cstr("0 1\n1 x\n").as_ptr(), 6, &mut g), CrossnumStatus::Parse);
        assert!(CStr::from_ptr(crossnum_last_error()).to_str().unwrap().contains("line 2"));
        let bytes = [0xffu8, b'\n', 0];
        assert_eq!(crossnum_graph_from_compressed(bytes.as_ptr().cast(), &mut g), CrossnumStatus::InvalidUtf8);
        let k5 = cstr("0 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n");
        assert_eq!(crossnum_graph_from_edge_list(k5.as_ptr(), 2, &mut g), CrossnumStatus::CoverExceeded);
        let k6 = cstr("0 1\n0 2\n0 3\n0 4\n0 5\n1 2\n1 3\n1 4\n1 5\n2 3\n2 4\n2 5\n3 4\n3 5\n4 5\n");
        assert_eq!(crossnum_graph_from_edge_list(k6.as_ptr(), 6, &mut g), CrossnumStatus::Ok);
        let mut opts = crossnum_options_default();
        opts.budget_cap = 0;
        let mut r = ptr::null_mut();
        assert_eq!(crossnum_solve(g, &opts, &mut r), CrossnumStatus::ResourceCap);
        assert!(r.is_null());
        assert_eq!(crossnum_solve(g, ptr::null(), ptr::null_mut()), CrossnumStatus::NullArgument);
        crossnum_graph_free(g);
        crossnum_graph_free(ptr::null_mut());
        crossnum_report_free(ptr::null_mut());
        crossnum_string_free(ptr::null_mut());
    }
}

#[test]
fn large_values_come_as_decimal_strings() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(crossnum_graph_from_compressed(cstr("3\nh 7 100000000000\n").as_ptr(), &mut g), CrossnumStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(crossnum_solve(g, ptr::null(), &mut r), CrossnumStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(crossnum_report_value(r, &mut s), CrossnumStatus::Ok);
        // ⌊n/2⌋·⌊(n−1)/2⌋ for n = 10^11
        assert_eq!(take(s), "2499999999950000000000");
        let mut v = 0u64;
        assert_eq!(crossnum_report_value_u64(r, &mut v), CrossnumStatus::ResourceCap);
        crossnum_report_free(r);
        crossnum_graph_free(g);
    }
}

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/<test binary>
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/crossnum.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["crossnum_solve", "crossnum_graph_free", "crossnum_last_error", "CROSSNUM_STATUS_RESOURCE_CAP"] {
        assert!(text.contains(name), "{name} missing from the header");
    }
    let Ok(cc) = Command::new("cc").arg("--version").output() else { return };
    if !cc.status.success() {
        return;
    }
    let include = dir.join("include");
    let src = dir.join("tests/smoke.c");
    let lib = target_dir().join("libcrossnum_ffi.a");
    if !lib.exists() {
        let st = Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-I"]).arg(&include).arg(&src).status().unwrap();
        assert!(st.success());
        return;
    }
    let exe = std::env::temp_dir().join(format!("crossnum_smoke_{}", std::process::id()));
    let st = Command::new("cc")
        .args(["-Wall", "-Werror", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(st.success());
    let out = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_file(&exe);
    assert!(out.status.success(), "smoke program exited with {:?}", out.status);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "249999500000\n");
}
