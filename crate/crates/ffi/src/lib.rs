//! C ABI for the bordered-moduli toolkit.
//!
//! Every fallible function returns a [`BmStatus`]; on failure the message is
//! available from [`bm_last_error_message`]. Strings handed out by the library
//! are owned by the caller and released with [`bm_string_free`]; handles are
//! released with their own `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use bordered_moduli::gluing;
use bordered_moduli::index;
use bordered_moduli::invariants::{self, builtin_oracle_g1};
use bordered_moduli::pants::{self, FaceLattice};
use bordered_moduli::strata::{self, DegenerationPoset};
use bordered_moduli::surface_types::{self, MarkedTopType};
use bordered_moduli::Error;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BmStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Validation = 3,
    InternalConsistency = 4,
    Unsupported = 5,
    Overflow = 6,
    Panic = 7,
}

/// Opaque handle to an enumerated degeneration poset.
pub struct BmStrataPoset {
    inner: DegenerationPoset,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(e: Error) -> BmStatus {
    let status = match e {
        Error::Domain { .. } => BmStatus::Domain,
        Error::Validation(_) => BmStatus::Validation,
        Error::InternalConsistency(_) => BmStatus::InternalConsistency,
        Error::Unsupported(_) => BmStatus::Unsupported,
    };
    set_error(e.to_string());
    status
}

fn guard(f: impl FnOnce() -> Result<(), BmStatus>) -> BmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BmStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside the library".into());
            BmStatus::Panic
        }
    }
}

fn null(what: &str) -> BmStatus {
    set_error(format!("null pointer passed as `{what}`"));
    BmStatus::NullPointer
}

/// # Safety
/// `ptr` must be null with `len == 0`, or point to `len` readable values.
unsafe fn slice<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], BmStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), BmStatus> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(std::ptr::null_mut(), CString::into_raw)
}

fn bigint_to_i64(v: BigInt) -> Result<i64, BmStatus> {
    v.to_i64().ok_or_else(|| {
        set_error(format!("{v} does not fit in 64 bits"));
        BmStatus::Overflow
    })
}

fn marked(g: u32, h: u32, n: u32, m: &[u32]) -> Result<MarkedTopType, BmStatus> {
    MarkedTopType::new(g, h, n, m.to_vec()).map_err(fail)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or null. Free with
/// [`bm_string_free`].
#[no_mangle]
pub extern "C" fn bm_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().clone()).map_or(std::ptr::null_mut(), to_c_string)
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of topological types of symmetric surfaces of genus `g_tilde`.
#[no_mangle]
pub extern "C" fn bm_classify_count(g_tilde: u32) -> usize {
    surface_types::classify_symmetric(g_tilde).len()
}

/// Enumerates the strata of the moduli space of type `(g, h)` with `n`
/// interior and `m[i]` boundary marked points; `h == 0` selects closed curves.
///
/// # Safety
/// `m` must point to `m_len` values (or be null when `m_len == 0`); `out`
/// must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_strata_enumerate(
    g: u32,
    h: u32,
    n: u32,
    m: *const u32,
    m_len: usize,
    out: *mut *mut BmStrataPoset,
) -> BmStatus {
    guard(|| {
        let m = slice(m, m_len, "m")?;
        let inner = if h == 0 {
            if !m.is_empty() {
                return Err(fail(Error::domain("m", "closed surfaces carry no boundary points")));
            }
            strata::enumerate_closed_strata(g, n).map_err(fail)?
        } else {
            strata::enumerate_strata(&marked(g, h, n, m)?).map_err(fail)?
        };
        write(out, Box::into_raw(Box::new(BmStrataPoset { inner })), "out")
    })
}

/// # Safety
/// `p` must be null or a handle from [`bm_strata_enumerate`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bm_strata_free(p: *mut BmStrataPoset) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bm_strata_len(p: *const BmStrataPoset) -> usize {
    p.as_ref().map_or(0, |p| p.inner.len())
}

/// Number of strata of real dimension `dim`.
///
/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bm_strata_count_in_dim(p: *const BmStrataPoset, dim: i64) -> usize {
    p.as_ref().map_or(0, |p| p.inner.dims.iter().filter(|&&d| d == dim).count())
}

/// Real dimension of stratum `i`.
///
/// # Safety
/// `p` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_strata_dim(p: *const BmStrataPoset, i: usize, out: *mut i64) -> BmStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("p"))?;
        let d = *p.inner.dims.get(i).ok_or_else(|| fail(Error::domain("i", format!("index {i} out of range"))))?;
        write(out, d, "out")
    })
}

/// Canonical JSON encoding of stratum `i`.
///
/// # Safety
/// `p` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_strata_stratum_json(p: *const BmStrataPoset, i: usize, out: *mut *mut c_char) -> BmStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("p"))?;
        let s = p.inner.strata.get(i).ok_or_else(|| fail(Error::domain("i", format!("index {i} out of range"))))?;
        write(out, to_c_string(s.to_json()), "out")
    })
}

/// Graphviz rendering of the degeneration poset.
///
/// # Safety
/// `p` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_strata_dot(p: *const BmStrataPoset, out: *mut *mut c_char) -> BmStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("p"))?;
        write(out, to_c_string(FaceLattice::from(&p.inner).to_dot("strata")), "out")
    })
}

/// Whether the poset is isomorphic to the face lattice of the associahedron
/// of the same dimension.
///
/// # Safety
/// `p` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_strata_is_associahedron(p: *const BmStrataPoset, out: *mut bool) -> BmStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("p"))?;
        let top = p.inner.dims.first().copied().unwrap_or(0).max(0) as u32;
        let cert = pants::poset_isomorphism(&FaceLattice::from(&p.inner), &pants::associahedron(top));
        write(out, cert.is_isomorphic(), "out")
    })
}

/// Real dimension of the moduli space of domains.
///
/// # Safety
/// `m` must point to `m_len` values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_moduli_dim(g: u32, h: u32, n: u32, m: *const u32, m_len: usize, out: *mut i64) -> BmStatus {
    guard(|| {
        let t = marked(g, h, n, slice(m, m_len, "m")?)?;
        write(out, bigint_to_i64(index::moduli_dim(&t))?, "out")
    })
}

/// Fredholm index `μ + N(2 - 2g - h)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_fredholm_index(mu: i64, big_n: u32, g: u32, h: u32, out: *mut i64) -> BmStatus {
    guard(|| {
        let v = index::fredholm_index_smooth(&BigInt::from(mu), big_n, g, h).map_err(fail)?;
        write(out, bigint_to_i64(v)?, "out")
    })
}

/// Virtual dimension of the moduli space of stable maps.
///
/// # Safety
/// `m` must point to `m_len` values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_virtual_dim(
    mu: i64,
    big_n: u32,
    g: u32,
    h: u32,
    n: u32,
    m: *const u32,
    m_len: usize,
    out: *mut i64,
) -> BmStatus {
    guard(|| {
        let t = marked(g, h, n, slice(m, m_len, "m")?)?;
        let v = index::virtual_dim(&BigInt::from(mu), big_n, &t).map_err(fail)?;
        write(out, bigint_to_i64(v)?, "out")
    })
}

/// Multiple-cover invariant `C(g;h|d;n|a)` as a `"num/den"` string.
///
/// # Safety
/// `n` must point to `n_len` values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_invariant(
    g: u32,
    h: u32,
    d: u32,
    n: *const u32,
    n_len: usize,
    a: i64,
    out: *mut *mut c_char,
) -> BmStatus {
    guard(|| {
        let n = slice(n, n_len, "n")?;
        let v = invariants::invariant(g, h, d, n, a, &builtin_oracle_g1()).map_err(fail)?;
        write(out, to_c_string(invariants::rational_string(&v)), "out")
    })
}

/// Dirichlet energy of the logarithmic cutoff `β_r` on an `n × n` grid.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_beta_energy(r: f64, n: usize, out: *mut f64) -> BmStatus {
    guard(|| {
        let b = gluing::beta_r(r, n).map_err(fail)?;
        write(out, b.energy, "out")
    })
}

/// Runs the default gluing verification and returns its JSON report.
///
/// # Safety
/// `passed` and `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bm_verify_gluing_json(passed: *mut bool, out: *mut *mut c_char) -> BmStatus {
    guard(|| {
        let report = gluing::verify_gluing(&gluing::GluingConfig::default()).map_err(fail)?;
        let json = serde_json::to_string(&report).map_err(|e| fail(Error::Validation(e.to_string())))?;
        write(passed, report.passed, "passed")?;
        write(out, to_c_string(json), "out")
    })
}
