//! C ABI over `numlab`.
//!
//! Objects cross the boundary as opaque handles created by `nl_*_new`-style
//! constructors and released with the matching `nl_*_free`. Every fallible
//! call returns an [`NlStatus`]; on failure the message is kept per thread and
//! can be fetched with [`nl_last_error_message`]. Panics are caught and
//! reported as [`NlStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use numlab::frames::{self, FrameMatrix};
use numlab::graph::{self, CirculantSpec, Graph};
use numlab::phase::{self, MeasurementMatrix};
use numlab::theta::{self, LpFormulation};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    CapExceeded = 3,
    Internal = 4,
    Panic = 5,
}

/// LP formulation selector for [`nl_theta_circulant`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NlFormulation {
    TimePrimal = 0,
    TimeDual = 1,
    FreqPrimal = 2,
    FreqDual = 3,
}

/// Opaque graph handle.
pub struct NlGraph(Graph);

/// Opaque circulant connection-set handle.
pub struct NlCirculant(CirculantSpec);

/// Opaque complex frame handle (`d × n`, columns are frame vectors).
pub struct NlFrame(FrameMatrix);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct NlThetaValue {
    pub value: f64,
    pub gap: f64,
    pub converged: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct NlEtfReport {
    pub max_norm_dev: f64,
    pub max_equiangularity_dev: f64,
    pub tightness_dev: f64,
    pub coherence: f64,
    pub welch_bound: f64,
    pub pass: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &numlab::Error) -> NlStatus {
    match e {
        numlab::Error::InvalidArgument(_) | numlab::Error::Parse { .. } => NlStatus::InvalidArgument,
        numlab::Error::CapExceeded { .. } => NlStatus::CapExceeded,
        _ => NlStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), NlStatus>) -> NlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NlStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            NlStatus::Panic
        }
    }
}

fn lift<T>(r: numlab::Result<T>) -> Result<T, NlStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn null() -> NlStatus {
    set_error("null pointer argument".into());
    NlStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, NlStatus> {
    p.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), NlStatus> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

unsafe fn slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], NlStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null());
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length in bytes
/// excluding the terminator.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn nl_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let k = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, k);
            *buf.add(k) = 0;
        }
        msg.len()
    })
}

/// Seed derived from `master` and a NUL-terminated label.
///
/// # Safety
/// `label` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nl_derive_seed(master: u64, label: *const c_char, out: *mut u64) -> NlStatus {
    guard(|| {
        if label.is_null() {
            return Err(null());
        }
        let l = CStr::from_ptr(label).to_str().map_err(|_| {
            set_error("label is not UTF-8".into());
            NlStatus::InvalidArgument
        })?;
        put(out, numlab::rng::derive_seed(master, l))
    })
}

/// Graph on `n` vertices from `edge_count` pairs stored flat in `edges`.
///
/// # Safety
/// `edges` must hold `2 * edge_count` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_graph_from_edges(
    n: usize,
    edges: *const u32,
    edge_count: usize,
    out: *mut *mut NlGraph,
) -> NlStatus {
    guard(|| {
        let flat = slice(edges, 2 * edge_count)?;
        let pairs: Vec<(usize, usize)> = flat.chunks(2).map(|c| (c[0] as usize, c[1] as usize)).collect();
        let g = lift(Graph::from_edges(n, &pairs))?;
        put(out, Box::into_raw(Box::new(NlGraph(g))))
    })
}

/// Erdős–Rényi graph `G(n, p)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_graph_er(n: usize, p: f64, seed: u64, out: *mut *mut NlGraph) -> NlStatus {
    guard(|| {
        let g = lift(graph::sample_er(n, p, seed))?;
        put(out, Box::into_raw(Box::new(NlGraph(g))))
    })
}

/// # Safety
/// `g` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nl_graph_free(g: *mut NlGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nl_graph_vertex_count(g: *const NlGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nl_graph_edge_count(g: *const NlGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Circulant graph on `Z_n` with the given connection set.
///
/// # Safety
/// `conn` must hold `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_circulant_new(n: usize, conn: *const u32, len: usize, out: *mut *mut NlCirculant) -> NlStatus {
    guard(|| {
        let c = slice(conn, len)?;
        let spec = lift(CirculantSpec::new(n, c.iter().map(|&k| k as usize)))?;
        put(out, Box::into_raw(Box::new(NlCirculant(spec))))
    })
}

/// Random circulant graph: each shift pair is present with probability 1/2.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_circulant_random(n: usize, seed: u64, out: *mut *mut NlCirculant) -> NlStatus {
    guard(|| {
        let spec = lift(graph::sample_random_circulant(n, seed))?;
        put(out, Box::into_raw(Box::new(NlCirculant(spec))))
    })
}

/// Paley graph on `Z_p`, `p ≡ 1 (mod 4)` prime.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_paley(p: usize, out: *mut *mut NlCirculant) -> NlStatus {
    guard(|| {
        let spec = lift(graph::build_paley(p))?;
        put(out, Box::into_raw(Box::new(NlCirculant(spec))))
    })
}

/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nl_circulant_complement(c: *const NlCirculant, out: *mut *mut NlCirculant) -> NlStatus {
    guard(|| {
        let c = deref(c)?;
        put(out, Box::into_raw(Box::new(NlCirculant(c.0.complement()))))
    })
}

/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nl_circulant_to_graph(c: *const NlCirculant, out: *mut *mut NlGraph) -> NlStatus {
    guard(|| {
        let c = deref(c)?;
        put(out, Box::into_raw(Box::new(NlGraph(c.0.to_graph()))))
    })
}

/// # Safety
/// `c` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nl_circulant_free(c: *mut NlCirculant) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Theta of a circulant graph by the selected LP.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nl_theta_circulant(
    c: *const NlCirculant,
    formulation: NlFormulation,
    out: *mut NlThetaValue,
) -> NlStatus {
    guard(|| {
        let c = deref(c)?;
        let f = match formulation {
            NlFormulation::TimePrimal => LpFormulation::TimePrimal,
            NlFormulation::TimeDual => LpFormulation::TimeDual,
            NlFormulation::FreqPrimal => LpFormulation::FreqPrimal,
            NlFormulation::FreqDual => LpFormulation::FreqDual,
        };
        let r = lift(theta::theta_circulant(&c.0, f))?;
        put(out, NlThetaValue { value: r.value, gap: r.gap, converged: r.converged })
    })
}

/// Theta of a general graph by the SDP path, to absolute bracket `tol`.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nl_theta_sdp(g: *const NlGraph, tol: f64, out: *mut NlThetaValue) -> NlStatus {
    guard(|| {
        let g = deref(g)?;
        let r = lift(theta::theta_sdp(&g.0, tol))?;
        put(out, NlThetaValue { value: r.value, gap: r.gap, converged: r.converged })
    })
}

/// Exact ω of a real `rows × cols` measurement matrix given row-major.
///
/// # Safety
/// `data` must hold `rows * cols` values and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_omega(data: *const f64, rows: usize, cols: usize, out: *mut f64) -> NlStatus {
    guard(|| {
        let flat = slice(data, rows.checked_mul(cols).ok_or(NlStatus::InvalidArgument)?)?;
        if cols == 0 {
            set_error("matrix must have at least one column".into());
            return Err(NlStatus::InvalidArgument);
        }
        let r: Vec<Vec<f64>> = flat.chunks(cols).map(|c| c.to_vec()).collect();
        let a = lift(MeasurementMatrix::from_rows(&r))?;
        let w = lift(phase::omega(&a))?;
        put(out, w.value)
    })
}

/// Paley equiangular tight frame for a prime `p ≡ 1 (mod 4)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_paley_etf(p: usize, out: *mut *mut NlFrame) -> NlStatus {
    guard(|| {
        let f = lift(frames::paley_etf(p))?;
        put(out, Box::into_raw(Box::new(NlFrame(f))))
    })
}

/// # Safety
/// `f` must be a live handle; `d` and `n` writable.
#[no_mangle]
pub unsafe extern "C" fn nl_frame_dims(f: *const NlFrame, d: *mut usize, n: *mut usize) -> NlStatus {
    guard(|| {
        let f = deref(f)?;
        put(d, f.0.d())?;
        put(n, f.0.n())
    })
}

/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nl_verify_etf(f: *const NlFrame, tol: f64, out: *mut NlEtfReport) -> NlStatus {
    guard(|| {
        let f = deref(f)?;
        let r = frames::verify_etf(&f.0, tol);
        put(
            out,
            NlEtfReport {
                max_norm_dev: r.max_norm_dev,
                max_equiangularity_dev: r.max_equiangularity_dev.unwrap_or(0.0),
                tightness_dev: r.tightness_dev,
                coherence: r.coherence,
                welch_bound: r.welch_bound,
                pass: r.pass,
            },
        )
    })
}

/// # Safety
/// `f` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nl_frame_free(f: *mut NlFrame) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}
