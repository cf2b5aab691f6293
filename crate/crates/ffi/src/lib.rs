//! C ABI for `mixvol`.
//!
//! Polytopes are opaque handles created by `mixvol_polytope_from_json` or
//! `mixvol_polytope_from_vertices` and released with
//! `mixvol_polytope_free`. Every fallible call returns a `MixvolStatus`; on
//! failure the message is available from `mixvol_last_error_message` on the
//! same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mixvol::{bezout, io, isoperimetric, mixed, scalar, Error, VPolytope, Vector};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MixvolStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    DimensionMismatch = 4,
    Degenerate = 5,
    InvalidArgument = 6,
    /// The quantity is undefined for the input (e.g. a zero denominator).
    Undefined = 7,
    Panic = 8,
}

/// Opaque polytope handle.
pub struct MixvolPolytope {
    inner: VPolytope,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MixvolStatus {
    match e {
        Error::Parse(_) => MixvolStatus::Parse,
        Error::DimensionMismatch { .. } | Error::WrongCount { .. } => MixvolStatus::DimensionMismatch,
        Error::Degenerate(_) | Error::Empty(_) | Error::DependentDirections | Error::Collapsed(_) => {
            MixvolStatus::Degenerate
        }
        _ => MixvolStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (MixvolStatus, String)>) -> MixvolStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MixvolStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            MixvolStatus::Panic
        }
    }
}

fn lib(e: Error) -> (MixvolStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (MixvolStatus, String) {
    (MixvolStatus::NullPointer, format!("{what} is null"))
}

unsafe fn polytope<'a>(p: *const MixvolPolytope, what: &str) -> Result<&'a VPolytope, (MixvolStatus, String)> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| null(what))
}

fn write_out<T>(out: *mut T, v: T) -> Result<(), (MixvolStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    unsafe { out.write(v) };
    Ok(())
}

fn emit(p: VPolytope, out: *mut *mut MixvolPolytope) -> Result<(), (MixvolStatus, String)> {
    write_out(out, Box::into_raw(Box::new(MixvolPolytope { inner: p })))
}

/// Parses `{"dim": n, "vertices": [[...], ...]}`; coordinates may be
/// integers, decimal numbers or `"p/q"` strings.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mixvol_polytope_from_json(json: *const c_char, out: *mut *mut MixvolPolytope) -> MixvolStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let s = CStr::from_ptr(json).to_str().map_err(|e| (MixvolStatus::InvalidUtf8, e.to_string()))?;
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| (MixvolStatus::Parse, e.to_string()))?;
        emit(io::polytope_from_json(&v).map_err(lib)?, out)
    })
}

/// Convex hull of `count` points stored row-major in `coords`
/// (`count * dim` doubles, converted exactly).
///
/// # Safety
/// `coords` must point to `count * dim` doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mixvol_polytope_from_vertices(
    dim: usize,
    coords: *const f64,
    count: usize,
    out: *mut *mut MixvolPolytope,
) -> MixvolStatus {
    guard(|| {
        if coords.is_null() {
            return Err(null("coords"));
        }
        if dim == 0 || count == 0 {
            return Err((MixvolStatus::InvalidArgument, "dim and count must be positive".into()));
        }
        let flat = std::slice::from_raw_parts(coords, dim * count);
        let pts = flat
            .chunks(dim)
            .map(|c| c.iter().map(|&x| scalar::from_f64(x)).collect::<mixvol::Result<Vec<_>>>().map(Vector))
            .collect::<mixvol::Result<Vec<_>>>()
            .map_err(lib)?;
        emit(mixvol::convex_hull(&pts).map_err(lib)?, out)
    })
}

/// # Safety
/// `p` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn mixvol_polytope_free(p: *mut MixvolPolytope) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Ambient dimension, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn mixvol_polytope_dim(p: *const MixvolPolytope) -> usize {
    p.as_ref().map_or(0, |h| h.inner.dim())
}

/// # Safety
/// `p` must be null or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn mixvol_polytope_num_vertices(p: *const MixvolPolytope) -> usize {
    p.as_ref().map_or(0, |h| h.inner.vertices().len())
}

/// # Safety
/// `p` must be null or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn mixvol_polytope_num_facets(p: *const MixvolPolytope) -> usize {
    p.as_ref().map_or(0, |h| h.inner.facets().len())
}

/// # Safety
/// `p` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mixvol_volume(p: *const MixvolPolytope, out: *mut f64) -> MixvolStatus {
    guard(|| {
        let v = polytope(p, "polytope")?.volume().map_err(lib)?;
        write_out(out, scalar::to_f64(&v))
    })
}

/// # Safety
/// `p` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mixvol_surface_area(p: *const MixvolPolytope, out: *mut f64) -> MixvolStatus {
    guard(|| {
        let v = polytope(p, "polytope")?.surface_area().map_err(lib)?;
        write_out(out, v.value)
    })
}

/// `(1/n)|∂K|/|K|`.
///
/// # Safety
/// `p` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mixvol_isop(p: *const MixvolPolytope, out: *mut f64) -> MixvolStatus {
    guard(|| {
        let v = isoperimetric::isop(polytope(p, "polytope")?).map_err(lib)?;
        write_out(out, v.value)
    })
}

/// Largest `Isop(F)/Isop(K)` over facets `F`.
///
/// # Safety
/// `p` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mixvol_max_facet_ratio(p: *const MixvolPolytope, out: *mut f64) -> MixvolStatus {
    guard(|| {
        let r = isoperimetric::facet_ratios(polytope(p, "polytope")?).map_err(lib)?;
        write_out(out, r.max_ratio.value)
    })
}

unsafe fn bodies<'a>(ps: *const *const MixvolPolytope, n: usize) -> Result<Vec<&'a VPolytope>, (MixvolStatus, String)> {
    if ps.is_null() {
        return Err(null("bodies"));
    }
    std::slice::from_raw_parts(ps, n).iter().map(|&p| polytope(p, "body")).collect()
}

fn exact_mixed(bs: &[&VPolytope]) -> Result<mixvol::Scalar, (MixvolStatus, String)> {
    mixed::mixed_volume(bs).map_err(lib)
}

/// `V(K_1, ..., K_n)` of `n` bodies in `R^n`.
///
/// # Safety
/// `ps` must point to `n` valid handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mixvol_mixed_volume(ps: *const *const MixvolPolytope, n: usize, out: *mut f64) -> MixvolStatus {
    guard(|| write_out(out, scalar::to_f64(&exact_mixed(&bodies(ps, n)?)?)))
}

/// Exact mixed volume as a newly allocated `"p/q"` string; release it with
/// `mixvol_string_free`.
///
/// # Safety
/// `ps` must point to `n` valid handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mixvol_mixed_volume_exact(
    ps: *const *const MixvolPolytope,
    n: usize,
    out: *mut *mut c_char,
) -> MixvolStatus {
    guard(|| {
        let s = scalar::format_scalar(&exact_mixed(&bodies(ps, n)?)?);
        write_out(out, CString::new(s).expect("digits only").into_raw())
    })
}

/// `V(A,B,K[n-2])V(K) / (V(A,K[n-1])V(B,K[n-1]))`; `Undefined` when the
/// denominator vanishes.
///
/// # Safety
/// All handles must be valid and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mixvol_bezout_ratio(
    k: *const MixvolPolytope,
    a: *const MixvolPolytope,
    b: *const MixvolPolytope,
    out: *mut f64,
) -> MixvolStatus {
    guard(|| {
        let (k, a, b) = (polytope(k, "k")?, polytope(a, "a")?, polytope(b, "b")?);
        match bezout::bezout_ratio(a, b, k).map_err(lib)? {
            Some(r) => write_out(out, scalar::to_f64(&r)),
            None => Err((MixvolStatus::Undefined, "Bezout ratio has a zero denominator".into())),
        }
    })
}

/// Message of the last failed call on this thread as a newly allocated
/// string (release with `mixvol_string_free`), or null.
#[no_mangle]
pub extern "C" fn mixvol_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null_mut(), |s| s.clone().into_raw()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn mixvol_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
