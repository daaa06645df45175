//! C ABI over `cechkit`.
//!
//! Samples and complexes cross the boundary as opaque handles owned by the
//! caller and released with the matching `*_free` function. Every fallible
//! call returns a [`CechStatus`]; on failure the message is kept per thread
//! and can be read back with [`cech_last_error`].

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cechkit::complex::{build_cech, SimplicialComplex};
use cechkit::error::Error;
use cechkit::geometry::vacant_component_count;
use cechkit::homology::{betti_numbers, FieldSpec};
use cechkit::point_process::{sample_homogeneous_poisson, PointSample, Window};

/// Result codes shared by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CechStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Precondition = 3,
    Numerical = 4,
    Io = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// A point sample together with its observation window.
pub struct CechSample(PointSample);

/// A Čech complex built from a sample.
pub struct CechComplex(SimplicialComplex);

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut e = e.borrow_mut();
        e.clear();
        e.extend(msg.bytes().filter(|&b| b != 0));
    });
}

fn status_of(err: &Error) -> CechStatus {
    match err {
        Error::InvalidArgument(_) | Error::DegenerateWindow(_) | Error::Parse { .. } | Error::Config { .. } => {
            CechStatus::InvalidArgument
        }
        Error::Precondition(_) | Error::IncompatibleComplexes(_) | Error::NotASubcomplex(_) => {
            CechStatus::Precondition
        }
        Error::ConstructionFailed(_) | Error::Numerical(_) => CechStatus::Numerical,
        Error::Io(_) | Error::Json(_) => CechStatus::Io,
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), (CechStatus, String)>) -> CechStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CechStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CechStatus::Panic
        }
    }
}

fn lib<T>(r: cechkit::error::Result<T>) -> Result<T, (CechStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (CechStatus, String) {
    (CechStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> (CechStatus, String) {
    (CechStatus::InvalidArgument, msg.into())
}

unsafe fn sample_ref<'a>(s: *const CechSample) -> Result<&'a PointSample, (CechStatus, String)> {
    s.as_ref().map(|s| &s.0).ok_or_else(|| null("sample"))
}

fn cube(dim: usize, side: f64) -> Result<Window, (CechStatus, String)> {
    if !(1..=3).contains(&dim) {
        return Err(invalid(format!("dimension {dim} outside 1..=3")));
    }
    lib(Window::cube(dim, side))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cech_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (always
/// NUL-terminated when `len > 0`) and returns its full length in bytes,
/// excluding the terminator.
///
/// # Safety
/// `buf` must be null or valid for `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cech_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = e.len().min(len - 1);
            ptr::copy_nonoverlapping(e.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        e.len()
    })
}

/// Builds a sample from `n` points of dimension `dim` stored row-major in
/// `coords`, observed in the cube of side `side` centred at the origin.
///
/// # Safety
/// `coords` must be valid for `n * dim` reads (it may be null when `n == 0`)
/// and `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cech_sample_from_coords(
    coords: *const f64,
    n: usize,
    dim: usize,
    side: f64,
    out: *mut *mut CechSample,
) -> CechStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let window = cube(dim, side)?;
        let pts: Vec<Vec<f64>> = if n == 0 {
            Vec::new()
        } else {
            if coords.is_null() {
                return Err(null("coords"));
            }
            let len = n.checked_mul(dim).ok_or_else(|| invalid("coordinate count overflows"))?;
            std::slice::from_raw_parts(coords, len).chunks(dim).map(<[f64]>::to_vec).collect()
        };
        let s = if pts.is_empty() { PointSample::empty(window) } else { lib(PointSample::manual(&pts, window))? };
        *out = Box::into_raw(Box::new(CechSample(s)));
        Ok(())
    })
}

/// Samples a homogeneous Poisson process of intensity `lambda` on the cube
/// of side `side` centred at the origin.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cech_sample_poisson(
    lambda: f64,
    dim: usize,
    side: f64,
    seed: u64,
    out: *mut *mut CechSample,
) -> CechStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let window = cube(dim, side)?;
        let s = lib(sample_homogeneous_poisson(lambda, &window, seed))?;
        *out = Box::into_raw(Box::new(CechSample(s)));
        Ok(())
    })
}

/// Number of points in a sample, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cech_sample_len(s: *const CechSample) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

/// Ambient dimension of a sample, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cech_sample_dim(s: *const CechSample) -> usize {
    s.as_ref().map_or(0, |s| s.0.dim())
}

/// Copies the coordinates (row-major) into `buf`, which must hold
/// `len * dim` values.
///
/// # Safety
/// `s` must be a live handle and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn cech_sample_coords(s: *const CechSample, buf: *mut f64, cap: usize) -> CechStatus {
    guard(|| {
        let s = sample_ref(s)?;
        let coords = s.coords();
        if coords.is_empty() {
            return Ok(());
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        if cap < coords.len() {
            return Err((CechStatus::BufferTooSmall, format!("need {} values, got {cap}", coords.len())));
        }
        ptr::copy_nonoverlapping(coords.as_ptr(), buf, coords.len());
        Ok(())
    })
}

/// Releases a sample. Null is ignored.
///
/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cech_sample_free(s: *mut CechSample) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Builds the Čech complex of radius `r` up to dimension `k_cap`.
///
/// # Safety
/// `s` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cech_complex_build(
    s: *const CechSample,
    r: f64,
    k_cap: usize,
    out: *mut *mut CechComplex,
) -> CechStatus {
    guard(|| {
        let s = sample_ref(s)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = lib(build_cech(s, r, k_cap))?;
        *out = Box::into_raw(Box::new(CechComplex(c)));
        Ok(())
    })
}

/// Highest dimension stored, so counts and Betti numbers have `k_cap + 1`
/// entries. Returns 0 for a null handle.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cech_complex_k_cap(c: *const CechComplex) -> usize {
    c.as_ref().map_or(0, |c| c.0.k_cap())
}

/// Writes the number of `j`-simplices for `j = 0..=k_cap` into `buf`.
///
/// # Safety
/// `c` must be a live handle and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn cech_complex_face_counts(c: *const CechComplex, buf: *mut usize, cap: usize) -> CechStatus {
    guard(|| {
        let c = c.as_ref().map(|c| &c.0).ok_or_else(|| null("complex"))?;
        let counts: Vec<usize> = (0..=c.k_cap()).map(|j| c.count(j)).collect();
        write_all(&counts, buf, cap)
    })
}

/// Writes the Betti numbers over GF(`p`) for `k = 0..=k_cap` into `buf`.
/// The top entry ignores simplices above `k_cap`.
///
/// # Safety
/// `c` must be a live handle and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn cech_complex_betti(c: *const CechComplex, p: u32, buf: *mut usize, cap: usize) -> CechStatus {
    guard(|| {
        let c = c.as_ref().map(|c| &c.0).ok_or_else(|| null("complex"))?;
        let field = lib(FieldSpec::new(p))?;
        write_all(&betti_numbers(c, field).as_is, buf, cap)
    })
}

/// Releases a complex. Null is ignored.
///
/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cech_complex_free(c: *mut CechComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Counts vacant components of the union of radius-`r` balls on a grid with
/// `resolution` cells per unit length over the sample's window.
///
/// # Safety
/// `s` must be a live handle; the outputs must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cech_vacant_components(
    s: *const CechSample,
    r: f64,
    resolution: f64,
    bounded: *mut usize,
    touches_boundary: *mut usize,
) -> CechStatus {
    guard(|| {
        let s = sample_ref(s)?;
        if bounded.is_null() || touches_boundary.is_null() {
            return Err(null("output"));
        }
        let v = lib(vacant_component_count(s, r, s.window(), resolution))?;
        *bounded = v.bounded;
        *touches_boundary = v.touches_boundary;
        Ok(())
    })
}

unsafe fn write_all(vals: &[usize], buf: *mut usize, cap: usize) -> Result<(), (CechStatus, String)> {
    if buf.is_null() {
        return Err(null("buf"));
    }
    if cap < vals.len() {
        return Err((CechStatus::BufferTooSmall, format!("need {} entries, got {cap}", vals.len())));
    }
    ptr::copy_nonoverlapping(vals.as_ptr(), buf, vals.len());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    unsafe fn message(p: *const c_char) -> String {
        CStr::from_ptr(p).to_string_lossy().into_owned()
    }

    #[test]
    fn null_out_is_reported() {
        let st = unsafe { cech_sample_poisson(1.0, 2, 4.0, 1, ptr::null_mut()) };
        assert_eq!(st, CechStatus::NullPointer);
        let mut buf = [0 as c_char; 64];
        let n = unsafe { cech_last_error(buf.as_mut_ptr(), buf.len()) };
        assert!(n > 0);
        assert_eq!(unsafe { message(buf.as_ptr()) }, "out is null");
    }

    #[test]
    fn version_is_terminated() {
        assert_eq!(unsafe { message(cech_version()) }, env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn status_mapping() {
        assert_eq!(status_of(&Error::Numerical("x".into())), CechStatus::Numerical);
        assert_eq!(status_of(&Error::Parse { line: 1, msg: "x".into() }), CechStatus::InvalidArgument);
        assert_eq!(status_of(&Error::NotASubcomplex("x".into())), CechStatus::Precondition);
    }
}
