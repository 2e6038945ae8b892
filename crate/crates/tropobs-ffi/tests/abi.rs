use std::ffi::{CStr, CString};
use std::ptr;
use tropobs_ffi::*;

fn data(name: &str) -> CString {
    let p = format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"));
    CString::new(std::fs::read_to_string(p).unwrap()).unwrap()
}

fn parse(name: &str) -> *mut TropCurve {
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { trop_curve_parse(data(name).as_ptr(), &mut c) }, TropStatus::Ok);
    c
}

#[test]
fn gamma_curves_through_the_abi() {
    let c = parse("gamma1.json");
    let (mut g, mut n, mut d, mut e) = (0usize, 0usize, 0usize, 0i64);
    unsafe {
        assert_eq!(trop_curve_genus(c, &mut g), TropStatus::Ok);
        assert_eq!(trop_curve_ambient_dim(c, &mut n), TropStatus::Ok);
        assert_eq!(trop_curve_expected_dim(c, &mut e), TropStatus::Ok);
        assert_eq!(trop_obstruction_dim(c, TropMethod::Chain, ptr::null(), &mut d), TropStatus::Ok);
    }
    assert_eq!((g, n, d, e), (2, 3, 1, 6));
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(trop_obstruction_json(c, TropMethod::Xi, ptr::null(), &mut s), TropStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
        assert_eq!(v["dimH"], 1);
        assert_eq!(v["paramDim"], 7);
        trop_string_free(s);
        trop_curve_free(c);
    }
}

#[test]
fn errors_are_reported() {
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(trop_curve_parse(data("broken_balancing.json").as_ptr(), &mut c), TropStatus::Validation);
        assert!(c.is_null());
        let msg = CStr::from_ptr(trop_last_error()).to_str().unwrap();
        assert!(msg.contains("not balanced"), "{msg}");
        assert_eq!(trop_curve_parse(ptr::null(), &mut c), TropStatus::NullArgument);
        let mut g = 0usize;
        assert_eq!(trop_curve_genus(ptr::null(), &mut g), TropStatus::NullArgument);
        trop_curve_free(ptr::null_mut());
        trop_string_free(ptr::null_mut());
    }
    let c = parse("example_vertex_magnified.json");
    let mut d = 0usize;
    unsafe {
        assert_eq!(trop_obstruction_dim(c, TropMethod::Xi, ptr::null(), &mut d), TropStatus::Precondition);
        let cfg = CString::new(r#"{"vertices":{"v1":{"coords":["0","3","7"]}}}"#).unwrap();
        assert_eq!(trop_obstruction_dim(c, TropMethod::Xi, cfg.as_ptr(), &mut d), TropStatus::Ok);
        assert_eq!(d, 0);
        trop_curve_free(c);
    }
}

#[test]
fn cli_entry_point() {
    let path = format!("{}/../../data/square_loop.json", env!("CARGO_MANIFEST_DIR"));
    let args = CString::new(serde_json::json!(["classify", path, "--format", "json"]).to_string()).unwrap();
    let (mut code, mut out) = (-1i32, ptr::null_mut());
    unsafe {
        assert_eq!(trop_cli_run(args.as_ptr(), &mut code, &mut out), TropStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        trop_string_free(out);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["superabundantDef1"], true);
        assert_eq!(v["schema"], "tropctl-report/1");
    }
    let bad = CString::new("[\"frobnicate\"]").unwrap();
    unsafe {
        assert_eq!(trop_cli_run(bad.as_ptr(), &mut code, &mut out), TropStatus::Ok);
        trop_string_free(out);
    }
    assert_eq!(code, 64);
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(trop_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
