//! C ABI over `plurilab`.
//!
//! Conventions:
//! - Every fallible function returns a [`PlStatus`]; results go through out
//!   pointers, which are written only on `PL_STATUS_OK`.
//! - Points in `C^m` are `2m` doubles, interleaved `re, im` per coordinate.
//! - Handles are opaque and owned by the caller; release each with its
//!   `*_free` function. Passing NULL to a `*_free` function is a no-op.
//! - After a failure, [`pl_last_error_message`] returns a description. The
//!   message is thread-local.
//! - Panics never cross the boundary; they surface as `PL_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use plurilab::asymptotics::{robin_constant, RobinOptions};
use plurilab::extremal::{extremal_value, green_trend};
use plurilab::genus0::GenusZeroFamily;
use plurilab::point::Point;
use plurilab::regions::{sample, Density, RegionSpec, SampledRegion};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidJson = 2,
    InvalidArgument = 3,
    Computation = 4,
    Panic = 5,
}

/// A region specification.
pub struct PlRegion {
    spec: RegionSpec,
}

/// A finite sample of a truncated region.
pub struct PlSample {
    region: SampledRegion,
}

/// A genus-zero family.
pub struct PlFamily {
    family: GenusZeroFamily,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("NULs removed"));
}

type Result<T> = std::result::Result<T, (PlStatus, String)>;

fn guard(f: impl FnOnce() -> Result<()>) -> PlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            PlStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PlStatus::Panic
        }
    }
}

fn null(name: &str) -> (PlStatus, String) {
    (PlStatus::NullPointer, format!("{name} is NULL"))
}

fn arg(e: impl std::fmt::Display) -> (PlStatus, String) {
    (PlStatus::InvalidArgument, e.to_string())
}

fn compute(e: impl std::fmt::Display) -> (PlStatus, String) {
    (PlStatus::Computation, e.to_string())
}

unsafe fn borrow<'a, T>(p: *const T, name: &str) -> Result<&'a T> {
    // SAFETY: the caller guarantees `p` is NULL or a live handle from this library.
    unsafe { p.as_ref() }.ok_or_else(|| null(name))
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str> {
    if p.is_null() {
        return Err(null(name));
    }
    // SAFETY: non-null, NUL-terminated per the API contract.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| (PlStatus::InvalidJson, format!("{name} is not UTF-8")))
}

unsafe fn point(coords: *const f64, dim: usize) -> Result<Point> {
    if coords.is_null() {
        return Err(null("coordinates"));
    }
    if !(1..=2).contains(&dim) {
        return Err(arg(format!("dimension must be 1 or 2, got {dim}")));
    }
    // SAFETY: the caller provides 2·dim readable doubles.
    let raw = unsafe { std::slice::from_raw_parts(coords, 2 * dim) };
    let zs: Vec<Complex64> = raw.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
    let p = Point::from_slice(&zs).ok_or_else(|| arg("bad point"))?;
    if !p.is_finite() {
        return Err(arg("coordinates must be finite"));
    }
    Ok(p)
}

unsafe fn out<T>(dst: *mut T, value: T, name: &str) -> Result<()> {
    if dst.is_null() {
        return Err(null(name));
    }
    // SAFETY: non-null and writable per the API contract.
    unsafe { dst.write(value) };
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`) and returns the full length including the NUL.
///
/// # Safety
/// `buf` must be NULL or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn pl_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len);
            // SAFETY: `buf` has `len >= n` bytes.
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
                *buf.add(n - 1) = 0;
            }
        }
        bytes.len()
    })
}

/// Parses a region specification from JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_region` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_region_from_json(json: *const c_char, out_region: *mut *mut PlRegion) -> PlStatus {
    guard(|| {
        let s = unsafe { text(json, "json") }?;
        let spec: RegionSpec = serde_json::from_str(s).map_err(|e| (PlStatus::InvalidJson, e.to_string()))?;
        spec.validate().map_err(arg)?;
        let handle = Box::into_raw(Box::new(PlRegion { spec }));
        unsafe { out(out_region, handle, "out_region") }.inspect_err(|_| {
            // SAFETY: just allocated above and not shared.
            drop(unsafe { Box::from_raw(handle) });
        })
    })
}

/// # Safety
/// `region` must be NULL or a handle from [`pl_region_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pl_region_free(region: *mut PlRegion) {
    if !region.is_null() {
        // SAFETY: ownership returns from the caller.
        drop(unsafe { Box::from_raw(region) });
    }
}

/// Dimension of the region's ambient space.
///
/// # Safety
/// Valid handle and writable out pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_region_dimension(region: *const PlRegion, out_dim: *mut usize) -> PlStatus {
    guard(|| {
        let r = unsafe { borrow(region, "region") }?;
        unsafe { out(out_dim, r.spec.dimension(), "out_dim") }
    })
}

/// Membership test for a point given as `2·dim` doubles.
///
/// # Safety
/// Valid handle, `2·dim` readable doubles, writable out pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_region_contains(
    region: *const PlRegion,
    coords: *const f64,
    dim: usize,
    out_contains: *mut bool,
) -> PlStatus {
    guard(|| {
        let r = unsafe { borrow(region, "region") }?;
        let z = unsafe { point(coords, dim) }?;
        if z.dim() != r.spec.dimension() {
            return Err(arg("point dimension differs from the region"));
        }
        unsafe { out(out_contains, r.spec.contains(&z), "out_contains") }
    })
}

/// Samples `E ∩ {|z| <= radius}` with `total` points (4:1 boundary:interior).
///
/// # Safety
/// Valid handle and writable out pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_region_sample(
    region: *const PlRegion,
    radius: f64,
    total: usize,
    out_sample: *mut *mut PlSample,
) -> PlStatus {
    guard(|| {
        let r = unsafe { borrow(region, "region") }?;
        let s = sample(&r.spec, radius, Density::from_total(total)).map_err(arg)?;
        let handle = Box::into_raw(Box::new(PlSample { region: s }));
        unsafe { out(out_sample, handle, "out_sample") }.inspect_err(|_| {
            // SAFETY: just allocated above and not shared.
            drop(unsafe { Box::from_raw(handle) });
        })
    })
}

/// # Safety
/// `sample` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pl_sample_free(sample: *mut PlSample) {
    if !sample.is_null() {
        // SAFETY: ownership returns from the caller.
        drop(unsafe { Box::from_raw(sample) });
    }
}

/// Number of sample points.
///
/// # Safety
/// Valid handle and writable out pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_sample_len(sample: *const PlSample, out_len: *mut usize) -> PlStatus {
    guard(|| {
        let s = unsafe { borrow(sample, "sample") }?;
        unsafe { out(out_len, s.region.len(), "out_len") }
    })
}

/// Degree-`degree` extremal value `(1/n) log max |P(z)|` over the sample,
/// with `phases` polygon sides (a positive multiple of 4). With `trend`,
/// the extrapolated value over degrees `n/4, n/2, n` (n a multiple of 4).
///
/// # Safety
/// Valid handle, `2·dim` readable doubles, writable out pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_green_value(
    sample: *const PlSample,
    coords: *const f64,
    dim: usize,
    degree: usize,
    phases: usize,
    trend: bool,
    out_value: *mut f64,
) -> PlStatus {
    guard(|| {
        let s = unsafe { borrow(sample, "sample") }?;
        let z = unsafe { point(coords, dim) }?;
        let v = if trend {
            green_trend(&s.region, &z, degree, phases).map_err(compute)?.value
        } else {
            extremal_value(&s.region, &z, degree, phases).map_err(compute)?.value
        };
        unsafe { out(out_value, v, "out_value") }
    })
}

/// Robin constant and capacity of a bounded region with default options.
///
/// # Safety
/// Valid handle; out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn pl_robin(region: *const PlRegion, out_gamma: *mut f64, out_capacity: *mut f64) -> PlStatus {
    guard(|| {
        let r = unsafe { borrow(region, "region") }?;
        if out_gamma.is_null() || out_capacity.is_null() {
            return Err(null("output"));
        }
        let est = robin_constant(&r.spec, None, &RobinOptions::default()).map_err(compute)?;
        unsafe {
            out(out_gamma, est.gamma, "out_gamma")?;
            out(out_capacity, est.capacity, "out_capacity")
        }
    })
}

/// Parses a genus-zero family from JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_family` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_family_from_json(json: *const c_char, out_family: *mut *mut PlFamily) -> PlStatus {
    guard(|| {
        let s = unsafe { text(json, "json") }?;
        let family: GenusZeroFamily =
            serde_json::from_str(s).map_err(|e| (PlStatus::InvalidJson, e.to_string()))?;
        family.validate().map_err(arg)?;
        let handle = Box::into_raw(Box::new(PlFamily { family }));
        unsafe { out(out_family, handle, "out_family") }.inspect_err(|_| {
            // SAFETY: just allocated above and not shared.
            drop(unsafe { Box::from_raw(handle) });
        })
    })
}

/// # Safety
/// `family` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pl_family_free(family: *mut PlFamily) {
    if !family.is_null() {
        // SAFETY: ownership returns from the caller.
        drop(unsafe { Box::from_raw(family) });
    }
}

/// Zeros of `w ↦ P_n(wλ)` in `|w| <= t`, with multiplicity, plus the
/// vanishing order at the origin.
///
/// # Safety
/// Valid handle, `2·dim` readable doubles for `lambda`, writable out pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_family_counting(
    family: *const PlFamily,
    n: usize,
    t: f64,
    lambda: *const f64,
    dim: usize,
    out_count: *mut u64,
) -> PlStatus {
    guard(|| {
        let f = unsafe { borrow(family, "family") }?;
        let l = unsafe { point(lambda, dim) }?;
        let count = f.family.counting(n, t, &l).map_err(compute)?;
        unsafe { out(out_count, count, "out_count") }
    })
}

/// `Σ_{|w_j| >= R} 1/w_j` over slice zeros; `out_bound` receives the
/// declared-tail error bound (0 for finite lists).
///
/// # Safety
/// Valid handle, `2·dim` readable doubles, writable out pointers.
#[no_mangle]
pub unsafe extern "C" fn pl_family_tail_sum(
    family: *const PlFamily,
    n: usize,
    lambda: *const f64,
    dim: usize,
    radius: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    out_bound: *mut f64,
) -> PlStatus {
    guard(|| {
        let f = unsafe { borrow(family, "family") }?;
        let l = unsafe { point(lambda, dim) }?;
        if out_re.is_null() || out_im.is_null() || out_bound.is_null() {
            return Err(null("output"));
        }
        let t = f.family.tail_sum(n, &l, radius).map_err(compute)?;
        unsafe {
            out(out_re, t.value.re, "out_re")?;
            out(out_im, t.value.im, "out_im")?;
            out(out_bound, t.bound, "out_bound")
        }
    })
}

/// `P_n(z)` as `log|P_n(z)|` (−∞ at a zero) and `arg P_n(z)`.
///
/// # Safety
/// Valid handle, `2·dim` readable doubles, writable out pointers.
#[no_mangle]
pub unsafe extern "C" fn pl_family_evaluate(
    family: *const PlFamily,
    n: usize,
    coords: *const f64,
    dim: usize,
    out_log_abs: *mut f64,
    out_arg: *mut f64,
) -> PlStatus {
    guard(|| {
        let f = unsafe { borrow(family, "family") }?;
        let z = unsafe { point(coords, dim) }?;
        if out_log_abs.is_null() || out_arg.is_null() {
            return Err(null("output"));
        }
        let e = f.family.evaluate(n, &z, None).map_err(compute)?;
        unsafe {
            out(out_log_abs, e.log_abs, "out_log_abs")?;
            out(out_arg, e.arg, "out_arg")
        }
    })
}

/// `(1/2π k_n) ∫ log|P_n(e^{iθ}λ)| dθ` with `points` trapezoid nodes.
///
/// # Safety
/// Valid handle, `2·dim` readable doubles, writable out pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_family_circle_average(
    family: *const PlFamily,
    n: usize,
    lambda: *const f64,
    dim: usize,
    points: usize,
    out_value: *mut f64,
) -> PlStatus {
    guard(|| {
        let f = unsafe { borrow(family, "family") }?;
        let l = unsafe { point(lambda, dim) }?;
        let avg = f.family.circle_average(n, &l, points).map_err(compute)?;
        unsafe { out(out_value, avg.value, "out_value") }
    })
}
