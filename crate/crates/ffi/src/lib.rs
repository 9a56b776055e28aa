//! C ABI for the cartan-lab laboratory.
//!
//! Conventions:
//!
//! * Objects live behind opaque handles created by `*_from_json` or the
//!   builders and released by the matching `*_free`.
//! * Every fallible call returns a [`CartanLabCode`]; on any non-OK code
//!   the last error message is available through
//!   [`cartan_lab_last_error_message`].
//! * Strings returned by the library are UTF-8, heap-allocated, and must
//!   be released with [`cartan_lab_string_free`].
//! * Extended reals cross the boundary as IEEE doubles; `-inf` is a valid
//!   function value.
//!
//! The header `include/cartan_lab.h` is generated by cbindgen at build
//! time.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // NaN-rejecting guards

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cartan_lab::cartan::{
    cartan_cover, gorin_cover, verify_cartan, BallCover, GorinParams, Majorant,
};
use cartan_lab::functions::{sup_on_ball, DiscreteMeasure, EvaluableFunction};
use cartan_lab::geometry::{
    cantor_maps, generate_ifs_set, moran_dimension, regularity_constants, DSet, Point,
};
use cartan_lab::grid::GridSpec;
use cartan_lab::trace::{bmo_norm, dyadic_ball_family};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CartanLabCode {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidJson = 3,
    DomainError = 4,
    InvalidArgument = 5,
    Panic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(msg).ok();
    });
}

fn guard<F: FnOnce() -> CartanLabCode>(f: F) -> CartanLabCode {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic");
            CartanLabCode::Panic
        }
    }
}

/// Opaque sampled set with its natural measure.
pub struct CartanLabSet {
    inner: DSet,
}

/// Opaque evaluable function.
pub struct CartanLabFunction {
    inner: EvaluableFunction,
}

/// Opaque finite atomic measure.
pub struct CartanLabMeasure {
    inner: DiscreteMeasure,
}

/// Opaque ball cover with its budget certificate.
pub struct CartanLabCover {
    inner: BallCover,
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, CartanLabCode> {
    if ptr.is_null() {
        set_error("null string pointer");
        return Err(CartanLabCode::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        CartanLabCode::InvalidUtf8
    })
}

unsafe fn read_slice<'a, T>(ptr: *const T, len: usize) -> Result<&'a [T], CartanLabCode> {
    if ptr.is_null() && len > 0 {
        set_error("null slice pointer");
        return Err(CartanLabCode::NullPointer);
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

fn alloc_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

fn write_out<T>(out: *mut *mut T, value: T) -> CartanLabCode {
    if out.is_null() {
        set_error("null output pointer");
        return CartanLabCode::NullPointer;
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    CartanLabCode::Ok
}

/// Static version string; do not free.
#[no_mangle]
pub extern "C" fn cartan_lab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copy of the most recent error message on this thread, or NULL when no
/// error has occurred. Free with [`cartan_lab_string_free`].
#[no_mangle]
pub extern "C" fn cartan_lab_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow().as_ref().map_or(ptr::null_mut(), |s| {
            alloc_string(s.to_string_lossy().into_owned())
        })
    })
}

/// Release a string allocated by this library.
///
/// # Safety
/// `s` must be a pointer previously returned by a `cartan_lab_*` call that
/// allocates a string, not yet freed; NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// sets
// ---------------------------------------------------------------------------

/// Parse a set from its JSON schema
/// `{dimension_d, depth, diameter, points, weights}`.
///
/// # Safety
/// `json` must point to a NUL-terminated string and `out` to writable
/// storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_set_from_json(
    json: *const c_char,
    out: *mut *mut CartanLabSet,
) -> CartanLabCode {
    guard(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(c) => return c,
        };
        match serde_json::from_str::<DSet>(text) {
            Ok(set) => match set.validate() {
                Ok(()) => write_out(out, CartanLabSet { inner: set }),
                Err(e) => {
                    set_error(e.to_string());
                    CartanLabCode::DomainError
                }
            },
            Err(e) => {
                set_error(e.to_string());
                CartanLabCode::InvalidJson
            }
        }
    })
}

/// Build the depth-`depth` middle-thirds sample embedded in C^ambient_n.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_set_cantor(
    depth: u32,
    ambient_n: usize,
    out: *mut *mut CartanLabSet,
) -> CartanLabCode {
    guard(
        || match generate_ifs_set(&cantor_maps(), depth, ambient_n) {
            Ok(set) => write_out(out, CartanLabSet { inner: set }),
            Err(e) => {
                set_error(e.to_string());
                CartanLabCode::DomainError
            }
        },
    )
}

/// Serialize the set back to its JSON schema. Free the result with
/// [`cartan_lab_string_free`].
///
/// # Safety
/// `set` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_set_to_json(set: *const CartanLabSet) -> *mut c_char {
    if set.is_null() {
        set_error("null set handle");
        return ptr::null_mut();
    }
    match serde_json::to_string(&(*set).inner) {
        Ok(s) => alloc_string(s),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// Number of sample points.
///
/// # Safety
/// `set` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_set_len(set: *const CartanLabSet) -> usize {
    if set.is_null() {
        return 0;
    }
    (*set).inner.len()
}

/// Similarity dimension of the sampled set.
///
/// # Safety
/// `set` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_set_dimension(set: *const CartanLabSet) -> f64 {
    if set.is_null() {
        return f64::NAN;
    }
    (*set).inner.dimension_d
}

/// Total mass of the natural measure.
///
/// # Safety
/// `set` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_set_total_mass(set: *const CartanLabSet) -> f64 {
    if set.is_null() {
        return f64::NAN;
    }
    (*set).inner.total_mass()
}

/// Scan regularity ratios at the given scales and certify the two-sided
/// constants onto the handle; the certified values land in `out_a`,
/// `out_b`.
///
/// # Safety
/// `set` must be a live mutable handle; `scales` must point to `n_scales`
/// doubles; `out_a`/`out_b` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_set_certify(
    set: *mut CartanLabSet,
    scales: *const f64,
    n_scales: usize,
    out_a: *mut f64,
    out_b: *mut f64,
) -> CartanLabCode {
    guard(|| {
        if set.is_null() {
            set_error("null set handle");
            return CartanLabCode::NullPointer;
        }
        let scales = match read_slice(scales, n_scales) {
            Ok(s) => s,
            Err(c) => return c,
        };
        match regularity_constants(&(*set).inner, scales) {
            Ok(report) => {
                (*set).inner.certify(&report);
                if !out_a.is_null() {
                    *out_a = report.certified_a;
                }
                if !out_b.is_null() {
                    *out_b = report.certified_b;
                }
                CartanLabCode::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                CartanLabCode::DomainError
            }
        }
    })
}

/// Release a set handle.
///
/// # Safety
/// `set` must be a live handle from this library or NULL; it must not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_set_free(set: *mut CartanLabSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

// ---------------------------------------------------------------------------
// functions
// ---------------------------------------------------------------------------

/// Parse a function from its tagged JSON schema (`potential`, `logpoly`,
/// `lognormmap`, `constant`, `max`, `shifted`, `scaled`).
///
/// # Safety
/// `json` must point to a NUL-terminated string and `out` to writable
/// storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_function_from_json(
    json: *const c_char,
    out: *mut *mut CartanLabFunction,
) -> CartanLabCode {
    guard(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(c) => return c,
        };
        match serde_json::from_str::<EvaluableFunction>(text) {
            Ok(f) => match f.validate() {
                Ok(()) => write_out(out, CartanLabFunction { inner: f }),
                Err(e) => {
                    set_error(e.to_string());
                    CartanLabCode::DomainError
                }
            },
            Err(e) => {
                set_error(e.to_string());
                CartanLabCode::InvalidJson
            }
        }
    })
}

/// Evaluate at a point given as `len` real coordinates (2n for C^n).
/// `-inf` is a legitimate result at a logarithmic pole.
///
/// # Safety
/// `f` must be a live handle; `coords` must point to `len` doubles; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_function_evaluate(
    f: *const CartanLabFunction,
    coords: *const f64,
    len: usize,
    out: *mut f64,
) -> CartanLabCode {
    guard(|| {
        if f.is_null() || out.is_null() {
            set_error("null handle or output");
            return CartanLabCode::NullPointer;
        }
        let coords = match read_slice(coords, len) {
            Ok(c) => c,
            Err(code) => return code,
        };
        match (*f).inner.evaluate(&Point::new(coords.to_vec())) {
            Ok(v) => {
                *out = v;
                CartanLabCode::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                CartanLabCode::InvalidArgument
            }
        }
    })
}

/// Boundary-sampled supremum over the closed ball.
///
/// # Safety
/// `f` must be a live handle; `center` must point to `len` doubles; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_function_sup_on_ball(
    f: *const CartanLabFunction,
    center: *const f64,
    len: usize,
    radius: f64,
    resolution: usize,
    out: *mut f64,
) -> CartanLabCode {
    guard(|| {
        if f.is_null() || out.is_null() {
            set_error("null handle or output");
            return CartanLabCode::NullPointer;
        }
        let center = match read_slice(center, len) {
            Ok(c) => c,
            Err(code) => return code,
        };
        match sup_on_ball(
            &(*f).inner,
            &Point::new(center.to_vec()),
            radius,
            resolution,
        ) {
            Ok(est) => {
                *out = est.value;
                CartanLabCode::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                CartanLabCode::InvalidArgument
            }
        }
    })
}

/// Release a function handle.
///
/// # Safety
/// `f` must be a live handle from this library or NULL; it must not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_function_free(f: *mut CartanLabFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

// ---------------------------------------------------------------------------
// measures and covers
// ---------------------------------------------------------------------------

/// Parse a measure from `{atoms: [[...]], masses: [...]}`.
///
/// # Safety
/// `json` must point to a NUL-terminated string and `out` to writable
/// storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_measure_from_json(
    json: *const c_char,
    out: *mut *mut CartanLabMeasure,
) -> CartanLabCode {
    guard(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(c) => return c,
        };
        match serde_json::from_str::<DiscreteMeasure>(text) {
            Ok(mu) => write_out(out, CartanLabMeasure { inner: mu }),
            Err(e) => {
                set_error(e.to_string());
                CartanLabCode::InvalidJson
            }
        }
    })
}

/// Critical radius `tau` of a point for the power gauge `(p t)^d`.
///
/// # Safety
/// `mu` must be a live handle; `coords` must point to `len` doubles; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_measure_tau(
    mu: *const CartanLabMeasure,
    coords: *const f64,
    len: usize,
    p: f64,
    d: f64,
    out: *mut f64,
) -> CartanLabCode {
    guard(|| {
        if mu.is_null() || out.is_null() {
            set_error("null handle or output");
            return CartanLabCode::NullPointer;
        }
        let coords = match read_slice(coords, len) {
            Ok(c) => c,
            Err(code) => return code,
        };
        let phi = match Majorant::power(p, d) {
            Ok(m) => m,
            Err(e) => {
                set_error(e.to_string());
                return CartanLabCode::InvalidArgument;
            }
        };
        match cartan_lab::cartan::tau(&Point::new(coords.to_vec()), &(*mu).inner, &phi) {
            Ok(t) => {
                *out = t;
                CartanLabCode::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                CartanLabCode::DomainError
            }
        }
    })
}

/// Release a measure handle.
///
/// # Safety
/// `mu` must be a live handle from this library or NULL; it must not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_measure_free(mu: *mut CartanLabMeasure) {
    if !mu.is_null() {
        drop(Box::from_raw(mu));
    }
}

/// Exceptional cover with radius budget `(2H)^d / d`, off which the
/// potential of the measure stays above `mass * log(H/e)`.
///
/// # Safety
/// `mu` must be a live handle and `out` writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_cartan_cover(
    mu: *const CartanLabMeasure,
    h: f64,
    d: f64,
    out: *mut *mut CartanLabCover,
) -> CartanLabCode {
    guard(|| {
        if mu.is_null() {
            set_error("null measure handle");
            return CartanLabCode::NullPointer;
        }
        match cartan_cover(&(*mu).inner, h, d) {
            Ok(cover) => write_out(out, CartanLabCover { inner: cover }),
            Err(e) => {
                set_error(e.to_string());
                CartanLabCode::DomainError
            }
        }
    })
}

/// Greedy cover for an explicit power gauge and parameter triple.
///
/// # Safety
/// `mu` must be a live handle and `out` writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_gorin_cover(
    mu: *const CartanLabMeasure,
    p: f64,
    d: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    out: *mut *mut CartanLabCover,
) -> CartanLabCode {
    guard(|| {
        if mu.is_null() {
            set_error("null measure handle");
            return CartanLabCode::NullPointer;
        }
        let phi = match Majorant::power(p, d) {
            Ok(m) => m,
            Err(e) => {
                set_error(e.to_string());
                return CartanLabCode::InvalidArgument;
            }
        };
        let params = GorinParams { alpha, beta, gamma };
        match gorin_cover(&(*mu).inner, &phi, params) {
            Ok(cover) => write_out(out, CartanLabCover { inner: cover }),
            Err(e) => {
                set_error(e.to_string());
                CartanLabCode::DomainError
            }
        }
    })
}

/// Number of balls in the cover.
///
/// # Safety
/// `cover` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_cover_ball_count(cover: *const CartanLabCover) -> usize {
    if cover.is_null() {
        return 0;
    }
    (*cover).inner.balls.len()
}

/// Spent radius-power budget `sum r_j^d`.
///
/// # Safety
/// `cover` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_cover_budget_used(cover: *const CartanLabCover) -> f64 {
    if cover.is_null() {
        return f64::NAN;
    }
    (*cover).inner.budget_used
}

/// Certified budget limit.
///
/// # Safety
/// `cover` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_cover_budget_limit(cover: *const CartanLabCover) -> f64 {
    if cover.is_null() {
        return f64::NAN;
    }
    (*cover).inner.budget_limit
}

/// 1 when the point lies inside some cover ball, else 0.
///
/// # Safety
/// `cover` must be a live handle; `coords` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_cover_contains(
    cover: *const CartanLabCover,
    coords: *const f64,
    len: usize,
) -> i32 {
    if cover.is_null() || coords.is_null() {
        return 0;
    }
    let coords = std::slice::from_raw_parts(coords, len);
    (*cover).inner.covers(&Point::new(coords.to_vec())) as i32
}

/// Serialize the cover as `{balls, d_exponent, budget_used, budget_limit}`.
/// Free the result with [`cartan_lab_string_free`].
///
/// # Safety
/// `cover` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_cover_to_json(cover: *const CartanLabCover) -> *mut c_char {
    if cover.is_null() {
        set_error("null cover handle");
        return ptr::null_mut();
    }
    match serde_json::to_string(&(*cover).inner) {
        Ok(s) => alloc_string(s),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// Release a cover handle.
///
/// # Safety
/// `cover` must be a live handle from this library or NULL; it must not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_cover_free(cover: *mut CartanLabCover) {
    if !cover.is_null() {
        drop(Box::from_raw(cover));
    }
}

// ---------------------------------------------------------------------------
// verification and scalar helpers
// ---------------------------------------------------------------------------

/// Solve `sum ratio_i^d = 1` for the similarity dimension.
///
/// # Safety
/// `ratios` must point to `len` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_moran_dimension(
    ratios: *const f64,
    len: usize,
    out: *mut f64,
) -> CartanLabCode {
    guard(|| {
        if out.is_null() {
            set_error("null output");
            return CartanLabCode::NullPointer;
        }
        let ratios = match read_slice(ratios, len) {
            Ok(r) => r,
            Err(c) => return c,
        };
        match moran_dimension(ratios) {
            Ok(d) => {
                *out = d;
                CartanLabCode::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                CartanLabCode::DomainError
            }
        }
    })
}

/// Evaluate the function at every lattice point of
/// `[xmin,xmax] x [ymin,ymax]` outside the cover and compare against the
/// bound. Returns the verification report as JSON in `out_report`; free it
/// with [`cartan_lab_string_free`].
///
/// # Safety
/// `f` and `cover` must be live handles; `out_report` must be writable
/// storage for one pointer.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn cartan_lab_verify_cartan(
    f: *const CartanLabFunction,
    cover: *const CartanLabCover,
    bound: f64,
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
    n: usize,
    out_report: *mut *mut c_char,
) -> CartanLabCode {
    guard(|| {
        if f.is_null() || cover.is_null() || out_report.is_null() {
            set_error("null handle or output");
            return CartanLabCode::NullPointer;
        }
        if n < 2 || !(xmin < xmax) || !(ymin < ymax) {
            set_error("degenerate grid");
            return CartanLabCode::InvalidArgument;
        }
        let grid = GridSpec::rect(xmin, xmax, ymin, ymax, n);
        match verify_cartan(&(*f).inner, &(*cover).inner, bound, &grid) {
            Ok(report) => match serde_json::to_string(&report) {
                Ok(s) => {
                    *out_report = alloc_string(s);
                    CartanLabCode::Ok
                }
                Err(e) => {
                    set_error(e.to_string());
                    CartanLabCode::DomainError
                }
            },
            Err(e) => {
                set_error(e.to_string());
                CartanLabCode::DomainError
            }
        }
    })
}

/// Largest mean oscillation of the function over the set's dyadic ball
/// family.
///
/// # Safety
/// `f` and `set` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cartan_lab_bmo_norm(
    f: *const CartanLabFunction,
    set: *const CartanLabSet,
    out: *mut f64,
) -> CartanLabCode {
    guard(|| {
        if f.is_null() || set.is_null() || out.is_null() {
            set_error("null handle or output");
            return CartanLabCode::NullPointer;
        }
        let (centers, radii) = dyadic_ball_family(&(*set).inner);
        match bmo_norm(&(*f).inner, &(*set).inner, &centers, &radii) {
            Ok(report) => {
                *out = report.bmo_norm;
                CartanLabCode::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                CartanLabCode::DomainError
            }
        }
    })
}
