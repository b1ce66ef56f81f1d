//! Exercises the C ABI from Rust and keeps the hand-written header in
//! sync with the exported surface.

use std::ffi::{c_char, CStr};
use std::ptr;

use poisson_rd_ffi::*;

fn last_error() -> String {
    let ptr = prd_last_error_message();
    if ptr.is_null() {
        return String::new();
    }
    unsafe { CStr::from_ptr(ptr) }.to_string_lossy().into_owned()
}

fn take_string(ptr: *mut c_char) -> String {
    assert!(!ptr.is_null());
    let s = unsafe { CStr::from_ptr(ptr) }.to_string_lossy().into_owned();
    unsafe { prd_string_free(ptr) };
    s
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(prd_version()) };
    assert!(!v.to_str().unwrap().is_empty());
}

#[test]
fn polytope_lifecycle_and_json() {
    let mut p: *mut PrdPolytope = ptr::null_mut();
    let status = unsafe { prd_polytope_new_family(PRD_POLYTOPE_CUBE, 3, &mut p) };
    assert_eq!(status, PrdStatus::Ok);
    let mut dim = 0usize;
    let mut count = 0usize;
    assert_eq!(unsafe { prd_polytope_dim(p, &mut dim) }, PrdStatus::Ok);
    assert_eq!(unsafe { prd_polytope_vertex_count(p, &mut count) }, PrdStatus::Ok);
    assert_eq!((dim, count), (3, 8));

    let mut json: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { prd_polytope_to_json(p, &mut json) }, PrdStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v["dim"], 3);
    unsafe { prd_polytope_free(p) };

    // Invalid family: error code plus message.
    let mut q: *mut PrdPolytope = ptr::null_mut();
    let status = unsafe { prd_polytope_new_family(99, 3, &mut q) };
    assert_eq!(status, PrdStatus::InvalidArgument);
    assert!(last_error().contains("family"));
}

#[test]
fn group_handles_and_structure() {
    let mut o3: *mut PrdGroup = ptr::null_mut();
    let mut h3: *mut PrdGroup = ptr::null_mut();
    let mut s3: *mut PrdGroup = ptr::null_mut();
    unsafe {
        assert_eq!(
            prd_group_new_family(PRD_GROUP_HYPEROCTAHEDRAL, 3, &mut o3),
            PrdStatus::Ok
        );
        assert_eq!(prd_group_new_family(PRD_GROUP_REFLECTION, 3, &mut h3), PrdStatus::Ok);
        assert_eq!(prd_group_new_family(PRD_GROUP_PERMUTATION, 3, &mut s3), PrdStatus::Ok);
    }
    let mut order = 0usize;
    assert_eq!(unsafe { prd_group_order(o3, &mut order) }, PrdStatus::Ok);
    assert_eq!(order, 48);

    let mut flag = 0u8;
    assert_eq!(unsafe { prd_group_is_normal_in(h3, o3, &mut flag) }, PrdStatus::Ok);
    assert_eq!(flag, 1);
    assert_eq!(unsafe { prd_group_is_normal_in(s3, o3, &mut flag) }, PrdStatus::Ok);
    assert_eq!(flag, 0);

    assert_eq!(unsafe { prd_group_isomorphic(h3, s3, &mut flag) }, PrdStatus::Ok);
    assert_eq!(flag, 0);

    // The cube's vertex symmetry group is abstractly the dimension-3
    // hyperoctahedral group.
    let mut cube: *mut PrdPolytope = ptr::null_mut();
    unsafe {
        assert_eq!(
            prd_polytope_new_family(PRD_POLYTOPE_CUBE, 3, &mut cube),
            PrdStatus::Ok
        );
    }
    let mut sym: *mut PrdGroup = ptr::null_mut();
    assert_eq!(unsafe { prd_vertex_symmetry_group(cube, &mut sym) }, PrdStatus::Ok);
    assert_eq!(unsafe { prd_group_isomorphic(sym, o3, &mut flag) }, PrdStatus::Ok);
    assert_eq!(flag, 1);

    unsafe { prd_polytope_free(cube) };
    unsafe { prd_group_free(sym) };
    unsafe { prd_group_free(o3) };
    unsafe { prd_group_free(h3) };
    unsafe { prd_group_free(s3) };
}

#[test]
fn cover_bound_and_queueing_distortion() {
    let mut rate = 0.0f64;
    let mut count: *mut c_char = ptr::null_mut();
    let status =
        unsafe { prd_cover_bound(PRD_SHAPE_CUBE, 3, 1, 2, &mut rate, &mut count) };
    assert_eq!(status, PrdStatus::Ok);
    assert_eq!(rate, 1.0);
    assert_eq!(take_string(count), "8");

    let t = [0.3f64, 0.6];
    let xhat = [0.2f64, 0.5];
    let mut value = 0.0f64;
    let mut finite = 0u8;
    let status = unsafe {
        prd_queueing_distortion(t.as_ptr(), 2, xhat.as_ptr(), 2, 1.0, &mut value, &mut finite)
    };
    assert_eq!(status, PrdStatus::Ok);
    assert_eq!(finite, 1);
    assert!((value - 0.2).abs() < 1e-12);

    // Causality violation is infinite, not an error.
    let bad = [0.4f64, 0.5];
    let status = unsafe {
        prd_queueing_distortion(t.as_ptr(), 2, bad.as_ptr(), 2, 1.0, &mut value, &mut finite)
    };
    assert_eq!(status, PrdStatus::Ok);
    assert_eq!(finite, 0);

    // Unsorted input is rejected.
    let unsorted = [0.6f64, 0.3];
    let status = unsafe {
        prd_queueing_distortion(
            unsorted.as_ptr(),
            2,
            xhat.as_ptr(),
            2,
            1.0,
            &mut value,
            &mut finite,
        )
    };
    assert_eq!(status, PrdStatus::InvalidArgument);
}

#[test]
fn sampling_buffer_round_trip() {
    let mut buf: *mut f64 = ptr::null_mut();
    let mut len = 0usize;
    let status = unsafe { prd_sample_homogeneous(5.0, 2.0, 9, &mut buf, &mut len) };
    assert_eq!(status, PrdStatus::Ok);
    let timings = unsafe { std::slice::from_raw_parts(buf, len) };
    assert!(timings.windows(2).all(|w| w[0] < w[1]));
    assert!(timings.iter().all(|&t| t > 0.0 && t < 2.0));
    unsafe { prd_f64_free(buf, len) };

    let status = unsafe { prd_sample_homogeneous(-1.0, 2.0, 9, &mut buf, &mut len) };
    assert_eq!(status, PrdStatus::ComputationFailed);
    assert!(!last_error().is_empty());
}

#[test]
fn symmetry_checks() {
    let mut sym = 0usize;
    let mut aut = 0usize;
    let mut equal = 0u8;
    let status = unsafe {
        prd_verify_sym_equals_aut(PRD_POLYTOPE_OCTAHEDRON, 3, &mut sym, &mut aut, &mut equal)
    };
    assert_eq!(status, PrdStatus::Ok);
    assert_eq!((sym, aut, equal), (48, 48, 1));

    let mut pass = 0u8;
    assert_eq!(unsafe { prd_hamming_l2_check(4, &mut pass) }, PrdStatus::Ok);
    assert_eq!(pass, 1);

    let mut json: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { prd_symmetrize_run(2, 8, 0, &mut json) }, PrdStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v["expansions"], 2);
    assert_eq!(v["terminated"], true);
}

#[test]
fn ba_solver_small_lambda_grid() {
    // A coarser lambda keeps the grid small for the FFI smoke test.
    let mut rate = 0.0f64;
    let mut d = 0.0f64;
    let status = unsafe { prd_ba_solve(PRD_SOURCE_LAPLACIAN, 0.1, 0.5, &mut rate, &mut d) };
    assert_eq!(status, PrdStatus::Ok);
    assert!((rate - 1.0).abs() < 0.05, "R = {rate}");

    let status = unsafe { prd_ba_solve(7, 1.0, 0.5, &mut rate, &mut d) };
    assert_eq!(status, PrdStatus::InvalidArgument);
}

#[test]
fn null_pointers_are_reported() {
    let mut out = 0usize;
    assert_eq!(
        unsafe { prd_polytope_dim(ptr::null(), &mut out) },
        PrdStatus::NullPointer
    );
    let mut p: *mut PrdPolytope = ptr::null_mut();
    unsafe {
        assert_eq!(
            prd_polytope_new_family(PRD_POLYTOPE_SIMPLEX, 2, &mut p),
            PrdStatus::Ok
        );
        assert_eq!(prd_polytope_dim(p, ptr::null_mut()), PrdStatus::NullPointer);
    }
    unsafe { prd_polytope_free(p) };
    // Free of NULL is a no-op.
    unsafe { prd_polytope_free(ptr::null_mut()) };
    unsafe { prd_group_free(ptr::null_mut()) };
    unsafe { prd_string_free(ptr::null_mut()) };
    unsafe { prd_f64_free(ptr::null_mut(), 0) };
}

#[test]
fn header_declares_every_exported_function() {
    // The hand-written header must mention each #[no_mangle] symbol.
    let header = include_str!("../include/poisson_rd.h");
    let source = include_str!("../src/lib.rs");
    let mut checked = 0;
    for line in source.lines() {
        let line = line.trim();
        if let Some(rest) = line
            .strip_prefix("pub extern \"C\" fn ")
            .or_else(|| line.strip_prefix("pub unsafe extern \"C\" fn "))
        {
            let name = rest.split('(').next().unwrap().trim();
            assert!(
                header.contains(name),
                "header is missing declaration for {name}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 20, "only {checked} exported functions found");
}
