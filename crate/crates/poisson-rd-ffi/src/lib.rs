//! C ABI for the poisson-rd library.
//!
//! Conventions:
//! * every function returns a [`PrdStatus`]; outputs go through out
//!   pointers, which are written only on `PRD_OK`;
//! * handles (`PrdPolytope`, `PrdGroup`) are opaque and freed with their
//!   `_free` function;
//! * strings returned through `char**` are UTF-8, owned by the caller,
//!   and freed with `prd_string_free`; f64 buffers with `prd_f64_free`;
//! * after a non-OK status, `prd_last_error_message` returns a
//!   thread-local description valid until the next failing call;
//! * panics are caught at the boundary and reported as
//!   `PRD_COMPUTATION_FAILED`.
//!
//! The header `include/poisson_rd.h` is generated by cbindgen from this
//! file (see `build.rs` and `cbindgen.toml`) and checked by the tests in
//! `tests/`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use poisson_rd::distortion::queueing_distortion_raw;
use poisson_rd::geometry::{hypercube, octahedron, order_simplex, standard_simplex, Rational};
use poisson_rd::groups::{iso, FiniteGroup};
use poisson_rd::poisson::sample_homogeneous;
use poisson_rd::rd::ba::{solve_for_distortion, BaOptions, DiscretizedSource, PerLetterDistortion};
use poisson_rd::rd::covering::{covering_lower_bound, SourceShape};
use poisson_rd::symmetrize::run_canonical;
use poisson_rd::symmetry::{hamming_l2_check, vertex_symmetry_group, verify_sym_equals_aut, PolytopeFamily};
use poisson_rd::Polytope;

/// Status codes. Stable values; additions only.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ComputationFailed = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into()).unwrap_or_else(|_| CString::new("invalid error").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Message for the most recent failure on this thread, or NULL.
#[no_mangle]
pub extern "C" fn prd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map(|c| c.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Crate version as a static string.
#[no_mangle]
pub extern "C" fn prd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

fn guard(body: impl FnOnce() -> Result<(), (PrdStatus, String)>) -> PrdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PrdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside the library");
            PrdStatus::ComputationFailed
        }
    }
}

fn invalid(msg: impl Into<String>) -> (PrdStatus, String) {
    (PrdStatus::InvalidArgument, msg.into())
}

fn failed(err: impl std::fmt::Display) -> (PrdStatus, String) {
    (PrdStatus::ComputationFailed, err.to_string())
}

unsafe fn out_write<T>(ptr: *mut T, value: T) -> Result<(), (PrdStatus, String)> {
    if ptr.is_null() {
        return Err((PrdStatus::NullPointer, "null out pointer".to_string()));
    }
    unsafe { ptr.write(value) };
    Ok(())
}

unsafe fn as_ref<'a, T>(ptr: *const T) -> Result<&'a T, (PrdStatus, String)> {
    unsafe { ptr.as_ref() }.ok_or((PrdStatus::NullPointer, "null handle".to_string()))
}

fn string_out(s: String) -> *mut c_char {
    CString::new(s)
        .unwrap_or_else(|_| CString::new("").unwrap())
        .into_raw()
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a string obtained from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn prd_string_free(s: *mut c_char) {
    if !s.is_null() {
        unsafe { drop(CString::from_raw(s)) };
    }
}

/// Frees an f64 buffer returned by this library.
///
/// # Safety
/// `ptr`/`len` must come from a poisson-rd function returning a buffer.
#[no_mangle]
pub unsafe extern "C" fn prd_f64_free(ptr: *mut f64, len: usize) {
    if !ptr.is_null() {
        unsafe { drop(Vec::from_raw_parts(ptr, len, len)) };
    }
}

// ---------------------------------------------------------------------
// Polytopes
// ---------------------------------------------------------------------

/// Opaque polytope handle.
pub struct PrdPolytope(Polytope);

pub const PRD_POLYTOPE_CUBE: c_int = 0;
pub const PRD_POLYTOPE_OCTAHEDRON: c_int = 1;
pub const PRD_POLYTOPE_SIMPLEX: c_int = 2;
pub const PRD_POLYTOPE_ORDER_SIMPLEX: c_int = 3;

fn build_polytope(family: c_int, n: usize) -> Result<Polytope, (PrdStatus, String)> {
    let p = match family {
        PRD_POLYTOPE_CUBE => hypercube(n),
        PRD_POLYTOPE_OCTAHEDRON => octahedron(n),
        PRD_POLYTOPE_SIMPLEX => standard_simplex(n, &Rational::from_integer(1.into())),
        PRD_POLYTOPE_ORDER_SIMPLEX => order_simplex(n),
        _ => return Err(invalid(format!("unknown polytope family {family}"))),
    };
    p.map_err(failed)
}

/// Builds a canonical polytope (family constants above).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn prd_polytope_new_family(
    family: c_int,
    n: usize,
    out: *mut *mut PrdPolytope,
) -> PrdStatus {
    guard(|| {
        let p = build_polytope(family, n)?;
        unsafe { out_write(out, Box::into_raw(Box::new(PrdPolytope(p)))) }
    })
}

/// # Safety
/// `p` must be NULL or a live handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn prd_polytope_free(p: *mut PrdPolytope) {
    if !p.is_null() {
        unsafe { drop(Box::from_raw(p)) };
    }
}

/// # Safety
/// `p` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn prd_polytope_dim(p: *const PrdPolytope, out: *mut usize) -> PrdStatus {
    guard(|| {
        let p = unsafe { as_ref(p) }?;
        unsafe { out_write(out, p.0.dim()) }
    })
}

/// # Safety
/// `p` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn prd_polytope_vertex_count(
    p: *const PrdPolytope,
    out: *mut usize,
) -> PrdStatus {
    guard(|| {
        let p = unsafe { as_ref(p) }?;
        unsafe { out_write(out, p.0.vertex_count()) }
    })
}

/// Serializes the polytope as `{"dim": n, "vertices": [["p/q", ...]]}`.
///
/// # Safety
/// `p` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn prd_polytope_to_json(
    p: *const PrdPolytope,
    out: *mut *mut c_char,
) -> PrdStatus {
    guard(|| {
        let p = unsafe { as_ref(p) }?;
        let json = serde_json::to_string(&p.0).map_err(failed)?;
        unsafe { out_write(out, string_out(json)) }
    })
}

// ---------------------------------------------------------------------
// Groups
// ---------------------------------------------------------------------

/// Opaque finite-group handle.
pub struct PrdGroup(FiniteGroup);

pub const PRD_GROUP_PERMUTATION: c_int = 0;
pub const PRD_GROUP_REFLECTION: c_int = 1;
pub const PRD_GROUP_HYPEROCTAHEDRAL: c_int = 2;
pub const PRD_GROUP_TRIVIAL: c_int = 3;

/// Builds a canonical signed-permutation group.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn prd_group_new_family(
    family: c_int,
    n: usize,
    out: *mut *mut PrdGroup,
) -> PrdStatus {
    guard(|| {
        if n == 0 || n > 8 {
            return Err(invalid("group dimension must be in 1..=8"));
        }
        let g = match family {
            PRD_GROUP_PERMUTATION => FiniteGroup::permutation_group(n),
            PRD_GROUP_REFLECTION => FiniteGroup::reflection_group(n),
            PRD_GROUP_HYPEROCTAHEDRAL => FiniteGroup::hyperoctahedral(n),
            PRD_GROUP_TRIVIAL => FiniteGroup::trivial(n),
            _ => return Err(invalid(format!("unknown group family {family}"))),
        };
        unsafe { out_write(out, Box::into_raw(Box::new(PrdGroup(g)))) }
    })
}

/// # Safety
/// `g` must be NULL or a live handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn prd_group_free(g: *mut PrdGroup) {
    if !g.is_null() {
        unsafe { drop(Box::from_raw(g)) };
    }
}

/// # Safety
/// `g` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn prd_group_order(g: *const PrdGroup, out: *mut usize) -> PrdStatus {
    guard(|| {
        let g = unsafe { as_ref(g) }?;
        unsafe { out_write(out, g.0.order()) }
    })
}

/// Writes 1 when `h` is a normal subgroup of `g`, else 0.
///
/// # Safety
/// Both handles must be live; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn prd_group_is_normal_in(
    h: *const PrdGroup,
    g: *const PrdGroup,
    out: *mut u8,
) -> PrdStatus {
    guard(|| {
        let h = unsafe { as_ref(h) }?;
        let g = unsafe { as_ref(g) }?;
        unsafe { out_write(out, u8::from(h.0.is_normal_in(&g.0))) }
    })
}

/// Writes 1 when the groups are isomorphic (exact search up to the cap).
///
/// # Safety
/// Both handles must be live; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn prd_group_isomorphic(
    a: *const PrdGroup,
    b: *const PrdGroup,
    out: *mut u8,
) -> PrdStatus {
    guard(|| {
        let a = unsafe { as_ref(a) }?;
        let b = unsafe { as_ref(b) }?;
        let witness = iso::isomorphic(&a.0, &b.0, poisson_rd::caps::iso_cap()).map_err(failed)?;
        unsafe { out_write(out, u8::from(witness.is_some())) }
    })
}

/// Vertex symmetry group of a polytope, as a new group handle acting on
/// vertex indices.
///
/// # Safety
/// `p` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn prd_vertex_symmetry_group(
    p: *const PrdPolytope,
    out: *mut *mut PrdGroup,
) -> PrdStatus {
    guard(|| {
        let p = unsafe { as_ref(p) }?;
        let g = vertex_symmetry_group(&p.0).map_err(failed)?;
        unsafe { out_write(out, Box::into_raw(Box::new(PrdGroup(g)))) }
    })
}

// ---------------------------------------------------------------------
// Rate-distortion and distortion measures
// ---------------------------------------------------------------------

pub const PRD_SHAPE_CUBE: c_int = 0;
pub const PRD_SHAPE_ORDER_SIMPLEX: c_int = 1;

/// Exact covering bound: rate log2(1/D) and the count (1/D)^n as a
/// decimal string.
///
/// # Safety
/// `out_rate` and `out_count` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn prd_cover_bound(
    shape: c_int,
    n: usize,
    d_num: i64,
    d_den: i64,
    out_rate: *mut f64,
    out_count: *mut *mut c_char,
) -> PrdStatus {
    guard(|| {
        let shape = match shape {
            PRD_SHAPE_CUBE => SourceShape::Cube,
            PRD_SHAPE_ORDER_SIMPLEX => SourceShape::OrderSimplex,
            _ => return Err(invalid(format!("unknown shape {shape}"))),
        };
        if d_den == 0 {
            return Err(invalid("zero denominator"));
        }
        let d = Rational::new(d_num.into(), d_den.into());
        let bound = covering_lower_bound(shape, n, &d).map_err(failed)?;
        unsafe { out_write(out_rate, bound.rate_per_point) }?;
        unsafe { out_write(out_count, string_out(bound.count.to_string())) }
    })
}

/// Canonical queueing distortion between two timing vectors on [0, T].
/// Writes the value and a finiteness flag (value is meaningful only when
/// finite = 1).
///
/// # Safety
/// `t`/`xhat` must point to `t_len`/`xhat_len` doubles; out pointers
/// valid.
#[no_mangle]
pub unsafe extern "C" fn prd_queueing_distortion(
    t: *const f64,
    t_len: usize,
    xhat: *const f64,
    xhat_len: usize,
    duration: f64,
    out_value: *mut f64,
    out_finite: *mut u8,
) -> PrdStatus {
    guard(|| {
        if (t.is_null() && t_len > 0) || (xhat.is_null() && xhat_len > 0) {
            return Err((PrdStatus::NullPointer, "null buffer".to_string()));
        }
        if !(duration.is_finite() && duration > 0.0) {
            return Err(invalid("duration must be positive"));
        }
        let t = unsafe { std::slice::from_raw_parts(t, t_len) };
        let xhat = unsafe { std::slice::from_raw_parts(xhat, xhat_len) };
        let sorted_in_range = |v: &[f64]| {
            v.windows(2).all(|w| w[0] <= w[1])
                && v.iter().all(|&x| x.is_finite() && (0.0..=duration).contains(&x))
        };
        if !sorted_in_range(t) || !sorted_in_range(xhat) {
            return Err(invalid("timings must be nondecreasing within [0, T]"));
        }
        let value = queueing_distortion_raw(t, xhat, duration);
        match value.finite() {
            Some(v) => {
                unsafe { out_write(out_value, v) }?;
                unsafe { out_write(out_finite, 1) }
            }
            None => {
                unsafe { out_write(out_value, f64::INFINITY) }?;
                unsafe { out_write(out_finite, 0) }
            }
        }
    })
}

/// Samples a homogeneous Poisson realization; the caller frees the buffer
/// with `prd_f64_free`.
///
/// # Safety
/// `out_buf` and `out_len` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn prd_sample_homogeneous(
    lambda: f64,
    duration: f64,
    seed: u64,
    out_buf: *mut *mut f64,
    out_len: *mut usize,
) -> PrdStatus {
    guard(|| {
        let pattern = sample_homogeneous(lambda, duration, seed).map_err(failed)?;
        let boxed = pattern.timings().to_vec().into_boxed_slice();
        let len = boxed.len();
        let ptr = Box::into_raw(boxed) as *mut f64;
        unsafe { out_write(out_len, len) }?;
        unsafe { out_write(out_buf, ptr) }
    })
}

pub const PRD_SOURCE_LAPLACIAN: c_int = 0;
pub const PRD_SOURCE_EXPONENTIAL: c_int = 1;

/// Blahut-Arimoto rate at a target distortion on the default grids.
///
/// # Safety
/// `out_rate` and `out_distortion` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn prd_ba_solve(
    source: c_int,
    lambda: f64,
    target_d: f64,
    out_rate: *mut f64,
    out_distortion: *mut f64,
) -> PrdStatus {
    guard(|| {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(invalid("lambda must be positive"));
        }
        let step = 0.01 / lambda;
        let (src, dist) = match source {
            PRD_SOURCE_LAPLACIAN => (
                DiscretizedSource::laplacian_grid(lambda, 8.0 / lambda, step).map_err(failed)?,
                PerLetterDistortion::ScaledAbs { lambda },
            ),
            PRD_SOURCE_EXPONENTIAL => (
                DiscretizedSource::exponential_grid(lambda, 12.0 / lambda, step).map_err(failed)?,
                PerLetterDistortion::OneSidedScaledAbs { lambda },
            ),
            _ => return Err(invalid(format!("unknown source {source}"))),
        };
        let recon = src.support().to_vec();
        let point = solve_for_distortion(&src, &recon, &dist, target_d, &BaOptions::default())
            .map_err(failed)?;
        unsafe { out_write(out_rate, point.rate_bits) }?;
        unsafe { out_write(out_distortion, point.distortion) }
    })
}

// ---------------------------------------------------------------------
// Symmetry verification and the symmetrization algorithm
// ---------------------------------------------------------------------

/// Symmetry-equals-automorphism comparison for cube (0), octahedron (1)
/// or simplex (2) families.
///
/// # Safety
/// Out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn prd_verify_sym_equals_aut(
    family: c_int,
    n: usize,
    out_sym_order: *mut usize,
    out_aut_order: *mut usize,
    out_equal: *mut u8,
) -> PrdStatus {
    guard(|| {
        let family = match family {
            PRD_POLYTOPE_CUBE => PolytopeFamily::Cube,
            PRD_POLYTOPE_OCTAHEDRON => PolytopeFamily::Octahedron,
            PRD_POLYTOPE_SIMPLEX => PolytopeFamily::Simplex,
            _ => return Err(invalid(format!("unknown family {family}"))),
        };
        let rep = verify_sym_equals_aut(family, n).map_err(failed)?;
        unsafe { out_write(out_sym_order, rep.sym_order) }?;
        unsafe { out_write(out_aut_order, rep.aut_order) }?;
        unsafe { out_write(out_equal, u8::from(rep.isomorphic)) }
    })
}

/// Shortest-path = Hamming = squared-l2 check over hypercube vertices.
///
/// # Safety
/// `out_pass` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn prd_hamming_l2_check(n: usize, out_pass: *mut u8) -> PrdStatus {
    guard(|| {
        if n == 0 || n > 10 {
            return Err(invalid("n must be in 1..=10"));
        }
        let pass = hamming_l2_check(n).map_err(failed)?;
        unsafe { out_write(out_pass, u8::from(pass)) }
    })
}

/// Runs the canonical symmetrization and returns the trace as JSON.
///
/// # Safety
/// `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn prd_symmetrize_run(
    n: usize,
    max_steps: usize,
    order_heuristic: u8,
    out_json: *mut *mut c_char,
) -> PrdStatus {
    guard(|| {
        if n == 0 || max_steps == 0 {
            return Err(invalid("n and max_steps must be positive"));
        }
        let trace = run_canonical(n, max_steps, order_heuristic != 0).map_err(failed)?;
        let json = serde_json::to_string(&trace).map_err(failed)?;
        unsafe { out_write(out_json, string_out(json)) }
    })
}
