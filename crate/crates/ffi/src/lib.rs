//! C interface to crossnum.
//!
//! Every function returns a [`CrossnumStatus`]. Objects are opaque handles
//! released with their `_free` function; strings handed out must be released
//! with [`crossnum_string_free`]. After a failure,
//! [`crossnum_last_error`] describes it (per thread).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use crossnum::graph::{compress, find_vertex_cover, CompressedGraph, Graph};
use crossnum::oracle::{oracle_cr, OracleConfig};
use crossnum::pipeline::{crossing_number, verify, SolveOptions, SolveReport};
use crossnum::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossnumStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    CoverExceeded = 4,
    ResourceCap = 5,
    Mismatch = 6,
    Invalid = 7,
    Internal = 8,
}

/// A graph in compressed form.
pub struct CrossnumGraph {
    cg: CompressedGraph,
}

/// Result of [`crossnum_solve`].
pub struct CrossnumReport {
    report: SolveReport,
}

/// Search limits; start from [`crossnum_options_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct CrossnumOptions {
    /// Negative: no limit.
    pub budget_cap: i64,
    pub iqp_node_cap: u64,
    pub max_crossing_sets: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> CrossnumStatus {
    match e {
        Error::Parse { .. } | Error::NotSimple(_) => CrossnumStatus::Parse,
        Error::CoverExceeded { .. } => CrossnumStatus::CoverExceeded,
        Error::ResourceCap(_) => CrossnumStatus::ResourceCap,
        Error::Mismatch(_) => CrossnumStatus::Mismatch,
        _ => CrossnumStatus::Invalid,
    }
}

/// Runs `f`, turning errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (CrossnumStatus, String)>) -> CrossnumStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CrossnumStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            CrossnumStatus::Internal
        }
    }
}

fn fail(e: Error) -> (CrossnumStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (CrossnumStatus, String) {
    (CrossnumStatus::NullArgument, "null argument".into())
}

unsafe fn utf8<'a>(p: *const c_char) -> Result<&'a str, (CrossnumStatus, String)> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| (CrossnumStatus::InvalidUtf8, "input is not UTF-8".into()))
}

fn hand_out(s: String, out: *mut *mut c_char) {
    // strings built here never contain NUL
    unsafe { *out = CString::new(s).unwrap_or_default().into_raw() };
}

/// Message of the last failure on this thread; empty when none. Owned by
/// the library and valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn crossnum_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn crossnum_options_default() -> CrossnumOptions {
    let d = SolveOptions::default();
    CrossnumOptions { budget_cap: -1, iqp_node_cap: d.iqp_node_cap, max_crossing_sets: d.max_crossing_sets }
}

/// Parses an edge list and compresses it around a smallest vertex cover of
/// size at most `k_max`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crossnum_graph_from_edge_list(text: *const c_char, k_max: usize, out: *mut *mut CrossnumGraph) -> CrossnumStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let g = Graph::parse_edge_list(utf8(text)?).map_err(fail)?;
        let x = find_vertex_cover(&g, k_max).map_err(fail)?;
        let cg = compress(&g, &x).map_err(fail)?;
        *out = Box::into_raw(Box::new(CrossnumGraph { cg }));
        Ok(())
    })
}

/// Parses the compressed text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crossnum_graph_from_compressed(text: *const c_char, out: *mut *mut CrossnumGraph) -> CrossnumStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let cg = CompressedGraph::parse(utf8(text)?).map_err(fail)?;
        *out = Box::into_raw(Box::new(CrossnumGraph { cg }));
        Ok(())
    })
}

/// # Safety
/// `graph` must come from this library and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn crossnum_graph_free(graph: *mut CrossnumGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Exact crossing number with the given limits (null for the defaults).
///
/// # Safety
/// `graph` must be a live handle, `opts` null or valid, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crossnum_solve(
    graph: *const CrossnumGraph,
    opts: *const CrossnumOptions,
    out: *mut *mut CrossnumReport,
) -> CrossnumStatus {
    guard(|| {
        if graph.is_null() || out.is_null() {
            return Err(null());
        }
        let mut o = SolveOptions::default();
        if let Some(c) = opts.as_ref() {
            o.budget_cap = usize::try_from(c.budget_cap).ok();
            o.iqp_node_cap = c.iqp_node_cap;
            o.max_crossing_sets = c.max_crossing_sets;
        }
        let report = crossing_number(&(*graph).cg, &o).map_err(fail)?;
        *out = Box::into_raw(Box::new(CrossnumReport { report }));
        Ok(())
    })
}

/// # Safety
/// `report` must come from this library and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn crossnum_report_free(report: *mut CrossnumReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// The crossing number in decimal.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crossnum_report_value(report: *const CrossnumReport, out: *mut *mut c_char) -> CrossnumStatus {
    guard(|| {
        if report.is_null() || out.is_null() {
            return Err(null());
        }
        hand_out((*report).report.crossing_number.to_string(), out);
        Ok(())
    })
}

/// The crossing number, failing with `ResourceCap` above `u64::MAX`.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crossnum_report_value_u64(report: *const CrossnumReport, out: *mut u64) -> CrossnumStatus {
    guard(|| {
        if report.is_null() || out.is_null() {
            return Err(null());
        }
        let v = u64::try_from(&(*report).report.crossing_number).map_err(|_| (CrossnumStatus::ResourceCap, "value exceeds 64 bits".into()))?;
        *out = v;
        Ok(())
    })
}

/// The full report as JSON.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crossnum_report_json(report: *const CrossnumReport, out: *mut *mut c_char) -> CrossnumStatus {
    guard(|| {
        if report.is_null() || out.is_null() {
            return Err(null());
        }
        hand_out((*report).report.to_json(), out);
        Ok(())
    })
}

/// The lifted drawing of the whole graph in the interchange format.
///
/// # Safety
/// Both handles must be live, `report` solved from `graph`; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn crossnum_report_drawing_json(
    report: *const CrossnumReport,
    graph: *const CrossnumGraph,
    out: *mut *mut c_char,
) -> CrossnumStatus {
    guard(|| {
        if report.is_null() || graph.is_null() || out.is_null() {
            return Err(null());
        }
        let d = (*report).report.lifted(&(*graph).cg).map_err(fail)?;
        hand_out(d.to_json(), out);
        Ok(())
    })
}

/// Rechecks a report; `Mismatch` names the failing check.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn crossnum_verify(report: *const CrossnumReport, graph: *const CrossnumGraph) -> CrossnumStatus {
    guard(|| {
        if report.is_null() || graph.is_null() {
            return Err(null());
        }
        verify(&(*report).report, &(*graph).cg).map(|_| ()).map_err(fail)
    })
}

/// Brute-force crossing number of the expanded graph (tiny graphs only).
///
/// # Safety
/// `graph` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crossnum_oracle(graph: *const CrossnumGraph, max_crossings: usize, out: *mut u64) -> CrossnumStatus {
    guard(|| {
        if graph.is_null() || out.is_null() {
            return Err(null());
        }
        let g = crossnum::graph::expand(&(*graph).cg).map_err(fail)?;
        let cfg = OracleConfig { max_crossings, ..OracleConfig::default() };
        *out = oracle_cr(&g, &cfg).map_err(fail)? as u64;
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn crossnum_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
