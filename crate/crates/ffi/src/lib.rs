//! C interface over the core structures.
//!
//! Every structure is an opaque handle created by a `*_new` function and
//! released by the matching `*_free`. Functions return a [`DynsepStatus`];
//! results come back through out-pointers. Panics never cross the boundary:
//! they are caught and reported as `DYNSEP_STATUS_INTERNAL`.
//!
//! Vertex ids are `size_t`. Set-valued results use the caller-buffer
//! convention: pass `buf`/`cap`, the required length is always written to
//! `*len`, and `DYNSEP_STATUS_BUFFER_TOO_SMALL` is returned if `cap < *len`.

#![allow(clippy::missing_safety_doc)]

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dynsep::clique::{CliqueError, Mccc};
use dynsep::decr_triangle::DecrTriangle;
use dynsep::mis::{CounterMis, MisBackend};
use dynsep::triangle_values::Triangle;
use dynsep::{Edge, Graph, GraphError};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynsepStatus {
    Ok = 0,
    NullPointer = 1,
    SelfLoop = 2,
    OutOfRange = 3,
    DuplicateEdge = 4,
    MissingEdge = 5,
    /// No vertex can serve as a pivot; the structure declared failure.
    NoValidPivot = 6,
    EmptyGraph = 7,
    BufferTooSmall = 8,
    /// A Rust panic was caught; the handle should be freed.
    Internal = 9,
}

impl From<GraphError> for DynsepStatus {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::SelfLoop(_) => DynsepStatus::SelfLoop,
            GraphError::OutOfRange { .. } => DynsepStatus::OutOfRange,
            GraphError::DuplicateEdge(_) => DynsepStatus::DuplicateEdge,
            GraphError::MissingEdge(_) => DynsepStatus::MissingEdge,
            GraphError::Parse { .. } => DynsepStatus::Internal,
        }
    }
}

impl From<CliqueError> for DynsepStatus {
    fn from(e: CliqueError) -> Self {
        match e {
            CliqueError::Graph(g) => g.into(),
            CliqueError::NoValidPivot { .. } => DynsepStatus::NoValidPivot,
            CliqueError::EmptyGraph => DynsepStatus::EmptyGraph,
        }
    }
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn dynsep_status_message(status: DynsepStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        DynsepStatus::Ok => b"ok\0",
        DynsepStatus::NullPointer => b"null pointer argument\0",
        DynsepStatus::SelfLoop => b"self-loop\0",
        DynsepStatus::OutOfRange => b"vertex out of range\0",
        DynsepStatus::DuplicateEdge => b"edge already present\0",
        DynsepStatus::MissingEdge => b"edge not present\0",
        DynsepStatus::NoValidPivot => b"no valid pivot; declared failure\0",
        DynsepStatus::EmptyGraph => b"empty graph\0",
        DynsepStatus::BufferTooSmall => b"output buffer too small\0",
        DynsepStatus::Internal => b"internal error\0",
    };
    s.as_ptr().cast()
}

/// Opaque undirected graph on a fixed vertex set.
pub struct DynsepGraph(Graph);

/// Opaque decremental triangle detector.
pub struct DynsepDecrTriangle(DecrTriangle);

/// Opaque fully dynamic maximal independent set.
pub struct DynsepMis(CounterMis);

/// Opaque decremental maximal clique per connected component.
pub struct DynsepMccc(Mccc);

fn guard(f: impl FnOnce() -> Result<(), DynsepStatus>) -> DynsepStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DynsepStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => DynsepStatus::Internal,
    }
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, DynsepStatus> {
    p.as_ref().ok_or(DynsepStatus::NullPointer)
}

unsafe fn get_mut<'a, T>(p: *mut T) -> Result<&'a mut T, DynsepStatus> {
    p.as_mut().ok_or(DynsepStatus::NullPointer)
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), DynsepStatus> {
    if out.is_null() {
        return Err(DynsepStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

unsafe fn put_handle<T>(out: *mut *mut T, value: T) -> Result<(), DynsepStatus> {
    put(out, Box::into_raw(Box::new(value)))
}

unsafe fn free_handle<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

unsafe fn put_slice(items: &[usize], buf: *mut usize, cap: usize, len: *mut usize) -> Result<(), DynsepStatus> {
    put(len, items.len())?;
    if cap < items.len() {
        return Err(DynsepStatus::BufferTooSmall);
    }
    if !items.is_empty() {
        if buf.is_null() {
            return Err(DynsepStatus::NullPointer);
        }
        ptr::copy_nonoverlapping(items.as_ptr(), buf, items.len());
    }
    Ok(())
}

unsafe fn put_triangle(t: Option<Triangle>, found: *mut bool, out: *mut usize) -> Result<(), DynsepStatus> {
    put(found, t.is_some())?;
    if let Some(t) = t {
        if out.is_null() {
            return Err(DynsepStatus::NullPointer);
        }
        for (i, v) in [t.x, t.y, t.z].into_iter().enumerate() {
            out.add(i).write(v);
        }
    }
    Ok(())
}

fn edge(u: usize, v: usize) -> Result<Edge, DynsepStatus> {
    Ok(Edge::new(u, v)?)
}

// ---- graph -------------------------------------------------------------

/// Creates an edgeless graph on `n` vertices.
#[no_mangle]
pub unsafe extern "C" fn dynsep_graph_new(n: usize, out: *mut *mut DynsepGraph) -> DynsepStatus {
    guard(|| put_handle(out, DynsepGraph(Graph::empty(n))))
}

#[no_mangle]
pub unsafe extern "C" fn dynsep_graph_free(g: *mut DynsepGraph) {
    free_handle(g)
}

#[no_mangle]
pub unsafe extern "C" fn dynsep_graph_insert_edge(g: *mut DynsepGraph, u: usize, v: usize) -> DynsepStatus {
    guard(|| Ok(get_mut(g)?.0.insert_edge(edge(u, v)?)?))
}

#[no_mangle]
pub unsafe extern "C" fn dynsep_graph_delete_edge(g: *mut DynsepGraph, u: usize, v: usize) -> DynsepStatus {
    guard(|| Ok(get_mut(g)?.0.delete_edge(edge(u, v)?)?))
}

#[no_mangle]
pub unsafe extern "C" fn dynsep_graph_has_edge(g: *const DynsepGraph, u: usize, v: usize, out: *mut bool) -> DynsepStatus {
    guard(|| {
        let g = &get(g)?.0;
        if u >= g.n() || v >= g.n() {
            return Err(DynsepStatus::OutOfRange);
        }
        put(out, u != v && g.has_edge(u, v))
    })
}

#[no_mangle]
pub unsafe extern "C" fn dynsep_graph_vertex_count(g: *const DynsepGraph, out: *mut usize) -> DynsepStatus {
    guard(|| put(out, get(g)?.0.n()))
}

#[no_mangle]
pub unsafe extern "C" fn dynsep_graph_edge_count(g: *const DynsepGraph, out: *mut usize) -> DynsepStatus {
    guard(|| put(out, get(g)?.0.m()))
}

// ---- decremental triangle detection -------------------------------------

/// Builds a detector over a snapshot of `g`; later changes to `g` are not seen.
#[no_mangle]
pub unsafe extern "C" fn dynsep_decr_triangle_new(
    g: *const DynsepGraph,
    seed: u64,
    out: *mut *mut DynsepDecrTriangle,
) -> DynsepStatus {
    guard(|| {
        let g = &get(g)?.0;
        put_handle(out, DynsepDecrTriangle(DecrTriangle::new(g, seed)))
    })
}

#[no_mangle]
pub unsafe extern "C" fn dynsep_decr_triangle_free(t: *mut DynsepDecrTriangle) {
    free_handle(t)
}

/// Current triangle. `*found` is false once the graph is triangle-free;
/// otherwise the sorted vertices are written to `triangle[0..3]`.
#[no_mangle]
pub unsafe extern "C" fn dynsep_decr_triangle_active(
    t: *const DynsepDecrTriangle,
    found: *mut bool,
    triangle: *mut usize,
) -> DynsepStatus {
    guard(|| put_triangle(get(t)?.0.active(), found, triangle))
}

/// Deletes edge `{u, v}` and reports the triangle afterwards, as in
/// `dynsep_decr_triangle_active`.
#[no_mangle]
pub unsafe extern "C" fn dynsep_decr_triangle_delete(
    t: *mut DynsepDecrTriangle,
    u: usize,
    v: usize,
    found: *mut bool,
    triangle: *mut usize,
) -> DynsepStatus {
    guard(|| {
        let t = &mut get_mut(t)?.0;
        let e = edge(u, v)?;
        let after = t.delete(e)?;
        put_triangle(after, found, triangle)
    })
}

/// Number of stages begun so far.
#[no_mangle]
pub unsafe extern "C" fn dynsep_decr_triangle_stage_count(t: *const DynsepDecrTriangle, out: *mut usize) -> DynsepStatus {
    guard(|| put(out, get(t)?.0.stage_count()))
}

// ---- maximal independent set --------------------------------------------

/// Builds a fully dynamic MIS over a snapshot of `g`.
#[no_mangle]
pub unsafe extern "C" fn dynsep_mis_new(g: *const DynsepGraph, out: *mut *mut DynsepMis) -> DynsepStatus {
    guard(|| {
        let g = get(g)?.0.clone();
        put_handle(out, DynsepMis(CounterMis::init(g)))
    })
}

#[no_mangle]
pub unsafe extern "C" fn dynsep_mis_free(m: *mut DynsepMis) {
    free_handle(m)
}

#[no_mangle]
pub unsafe extern "C" fn dynsep_mis_insert_edge(m: *mut DynsepMis, u: usize, v: usize) -> DynsepStatus {
    guard(|| {
        get_mut(m)?.0.insert_edge(edge(u, v)?)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn dynsep_mis_delete_edge(m: *mut DynsepMis, u: usize, v: usize) -> DynsepStatus {
    guard(|| {
        get_mut(m)?.0.delete_edge(edge(u, v)?)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn dynsep_mis_contains(m: *const DynsepMis, v: usize, out: *mut bool) -> DynsepStatus {
    guard(|| {
        let m = &get(m)?.0;
        if v >= m.graph().n() {
            return Err(DynsepStatus::OutOfRange);
        }
        put(out, m.in_mis(v))
    })
}

/// Members in increasing order (caller-buffer convention).
#[no_mangle]
pub unsafe extern "C" fn dynsep_mis_members(
    m: *const DynsepMis,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> DynsepStatus {
    guard(|| put_slice(&get(m)?.0.members(), buf, cap, len))
}

/// Total membership changes since construction.
#[no_mangle]
pub unsafe extern "C" fn dynsep_mis_recourse(m: *const DynsepMis, out: *mut u64) -> DynsepStatus {
    guard(|| put(out, get(m)?.0.recourse()))
}

// ---- maximal clique per component ---------------------------------------

/// Builds the decremental per-component maximal clique structure.
#[no_mangle]
pub unsafe extern "C" fn dynsep_mccc_new(g: *const DynsepGraph, seed: u64, out: *mut *mut DynsepMccc) -> DynsepStatus {
    guard(|| {
        let g = &get(g)?.0;
        put_handle(out, DynsepMccc(Mccc::new(g, seed)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn dynsep_mccc_free(c: *mut DynsepMccc) {
    free_handle(c)
}

/// Deletes edge `{u, v}`. `DYNSEP_STATUS_NO_VALID_PIVOT` means the
/// structure declared failure; its output is no longer meaningful.
#[no_mangle]
pub unsafe extern "C" fn dynsep_mccc_delete_edge(c: *mut DynsepMccc, u: usize, v: usize) -> DynsepStatus {
    guard(|| Ok(get_mut(c)?.0.apply(edge(u, v)?)?))
}

/// Union of the per-component cliques, sorted (caller-buffer convention).
#[no_mangle]
pub unsafe extern "C" fn dynsep_mccc_output(
    c: *const DynsepMccc,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> DynsepStatus {
    guard(|| put_slice(&get(c)?.0.output(), buf, cap, len))
}

/// Clique reported for the component of `v`, sorted.
#[no_mangle]
pub unsafe extern "C" fn dynsep_mccc_component_clique(
    c: *const DynsepMccc,
    v: usize,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> DynsepStatus {
    guard(|| {
        let c = &get(c)?.0;
        if v >= c.n() {
            return Err(DynsepStatus::OutOfRange);
        }
        put_slice(&c.component_clique(v), buf, cap, len)
    })
}
