//! C interface to `ramsey-copies`.
//!
//! Objects cross the boundary as opaque handles created by `rf_*_new`-style
//! functions and released with the matching `rf_*_free`. Every fallible
//! call returns an [`RfStatus`]; on failure `rf_last_error` describes the
//! problem until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ramsey_copies::arrowing::{arrows, verify_colouring, ArrowConfig, ArrowMode};
use ramsey_copies::colouring::{cycle_free_colouring, multipartite_free_colouring, EdgeColouring};
use ramsey_copies::constructions::{amalgam, parse_template, sum_hypergraph, DEFAULT_PACKING_BUDGET};
use ramsey_copies::density::density_report;
use ramsey_copies::graph::{Edge, Graph};
use ramsey_copies::hypergraph::LinearHypergraph;
use ramsey_copies::inseparable::is_ev_inseparable;
use ramsey_copies::io::{read_object, write_object, Format, Object};
use ramsey_copies::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RfStatus {
    Ok = 0,
    InvalidInput = 1,
    Precondition = 2,
    BudgetExhausted = 3,
    LemmaViolation = 4,
    NullPointer = 5,
    Panic = 6,
}

/// Arrowing modes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RfMode {
    Nni = 0,
    Induced = 1,
    Ordered = 2,
}

impl From<RfMode> for ArrowMode {
    fn from(m: RfMode) -> Self {
        match m {
            RfMode::Nni => ArrowMode::Nni,
            RfMode::Induced => ArrowMode::Induced,
            RfMode::Ordered => ArrowMode::Ordered,
        }
    }
}

/// A simple graph.
pub struct RfGraph(Graph);

/// A linear hypergraph.
pub struct RfHypergraph(LinearHypergraph);

/// An edge colouring of some graph.
pub struct RfColouring(EdgeColouring);

/// `d2` and `m2` as reduced fractions.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RfDensity {
    pub d2_numer: i64,
    pub d2_denom: i64,
    pub m2_numer: i64,
    pub m2_denom: i64,
    pub strictly_balanced: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RfStatus {
    match e {
        Error::InvalidInput(_) | Error::Parse { .. } => RfStatus::InvalidInput,
        Error::Precondition(_) => RfStatus::Precondition,
        Error::LemmaViolation(_) => RfStatus::LemmaViolation,
        e if e.is_budget() => RfStatus::BudgetExhausted,
        _ => RfStatus::InvalidInput,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard<F: FnOnce() -> Result<(), Error>>(f: F) -> RfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RfStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            RfStatus::Panic
        }
    }
}

macro_rules! nonnull {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            set_error(format!("{} is null", stringify!($p)));
            return RfStatus::NullPointer;
        })+
    };
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Error> {
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Error::InvalidInput("string is not UTF-8".into()))
}

/// Message for the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn rf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a graph from `edge_count` pairs stored flat in `edges`.
///
/// # Safety
/// `edges` must point to `2 * edge_count` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_graph_new(n: usize, edges: *const usize, edge_count: usize, out: *mut *mut RfGraph) -> RfStatus {
    nonnull!(out);
    if edge_count > 0 {
        nonnull!(edges);
    }
    guard(|| {
        let flat = if edge_count == 0 { &[][..] } else { std::slice::from_raw_parts(edges, 2 * edge_count) };
        let g = Graph::new(n, flat.chunks(2).map(|p| Edge::new(p[0], p[1])))?;
        *out = Box::into_raw(Box::new(RfGraph(g)));
        Ok(())
    })
}

/// A named template such as `K3`, `C5`, `K2,2,2` or `petersen`.
///
/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_graph_template(name: *const c_char, out: *mut *mut RfGraph) -> RfStatus {
    nonnull!(name, out);
    guard(|| {
        *out = Box::into_raw(Box::new(RfGraph(parse_template(str_arg(name)?)?)));
        Ok(())
    })
}

/// Reads a graph in the canonical or edge-list format.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_graph_parse(text: *const c_char, out: *mut *mut RfGraph) -> RfStatus {
    nonnull!(text, out);
    guard(|| {
        let obj = read_object(str_arg(text)?)?;
        let g = obj
            .as_graph()
            .cloned()
            .ok_or_else(|| Error::InvalidInput("not a graph".into()))?;
        *out = Box::into_raw(Box::new(RfGraph(g)));
        Ok(())
    })
}

/// Canonical text of a graph; release with `rf_string_free`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_graph_to_json(g: *const RfGraph, out: *mut *mut c_char) -> RfStatus {
    nonnull!(g, out);
    guard(|| {
        let text = write_object(&Object::Graph((*g).0.clone()), Format::Json);
        *out = CString::new(text).expect("no nul bytes").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn rf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn rf_graph_free(g: *mut RfGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rf_graph_vertex_count(g: *const RfGraph) -> usize {
    (*g).0.vertex_count()
}

/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rf_graph_edge_count(g: *const RfGraph) -> usize {
    (*g).0.edge_count()
}

/// `m` copies of `template` glued along an edge.
///
/// # Safety
/// `template` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_amalgam(template: *const RfGraph, m: usize, out: *mut *mut RfGraph) -> RfStatus {
    nonnull!(template, out);
    guard(|| {
        *out = Box::into_raw(Box::new(RfGraph(amalgam(&(*template).0, m)?.graph)));
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_density(g: *const RfGraph, out: *mut RfDensity) -> RfStatus {
    nonnull!(g, out);
    guard(|| {
        let r = density_report(&(*g).0)?;
        *out = RfDensity {
            d2_numer: r.d2.numer(),
            d2_denom: r.d2.denom(),
            m2_numer: r.m2.numer(),
            m2_denom: r.m2.denom(),
            strictly_balanced: r.strictly_2_balanced,
        };
        Ok(())
    })
}

/// Decides `host -> (template)_r`. When it does not arrow and `witness` is
/// non-null, a colouring without monochromatic copies is stored there.
///
/// # Safety
/// Handles must be live; `arrows_out` must be writable; `witness` may be null.
#[no_mangle]
pub unsafe extern "C" fn rf_arrows(
    host: *const RfGraph,
    template: *const RfGraph,
    r: usize,
    mode: RfMode,
    max_nodes: u64,
    arrows_out: *mut bool,
    witness: *mut *mut RfColouring,
) -> RfStatus {
    nonnull!(host, template, arrows_out);
    guard(|| {
        let config = ArrowConfig {
            max_nodes,
            ..ArrowConfig::default()
        };
        let res = arrows(&(*host).0, &(*template).0, r, mode.into(), config)?;
        *arrows_out = res.arrows;
        if !witness.is_null() {
            *witness = res.witness.map_or(ptr::null_mut(), |w| Box::into_raw(Box::new(RfColouring(w))));
        }
        Ok(())
    })
}

/// Number of monochromatic copies of `template` under `colouring`.
///
/// # Safety
/// Handles must be live; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_verify_colouring(
    host: *const RfGraph,
    template: *const RfGraph,
    colouring: *const RfColouring,
    mode: RfMode,
    count: *mut usize,
) -> RfStatus {
    nonnull!(host, template, colouring, count);
    guard(|| {
        *count = verify_colouring(&(*host).0, &(*template).0, &(*colouring).0, mode.into())?.len();
        Ok(())
    })
}

/// Colouring of a host without `(m, template)`, template balanced complete multipartite.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_multipartite_colouring(
    host: *const RfGraph,
    template: *const RfGraph,
    m: usize,
    out: *mut *mut RfColouring,
) -> RfStatus {
    nonnull!(host, template, out);
    guard(|| {
        let c = multipartite_free_colouring(&(*host).0, &(*template).0, m, DEFAULT_PACKING_BUDGET)?;
        *out = Box::into_raw(Box::new(RfColouring(c)));
        Ok(())
    })
}

/// Colouring of a host without `(m, C_length)` without monochromatic `length`-cycles.
///
/// # Safety
/// `host` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_cycle_colouring(host: *const RfGraph, length: usize, m: usize, out: *mut *mut RfColouring) -> RfStatus {
    nonnull!(host, out);
    guard(|| {
        let c = cycle_free_colouring(&(*host).0, length, m, DEFAULT_PACKING_BUDGET)?;
        *out = Box::into_raw(Box::new(RfColouring(c.colouring)));
        Ok(())
    })
}

/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rf_colouring_colour_count(c: *const RfColouring) -> usize {
    (*c).0.colour_count()
}

/// Colour of the `edge`-th host edge in sorted order, or `usize::MAX` when out of range.
///
/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rf_colouring_colour(c: *const RfColouring, edge: usize) -> usize {
    (*c).0.colours().get(edge).copied().unwrap_or(usize::MAX)
}

/// # Safety
/// `c` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn rf_colouring_free(c: *mut RfColouring) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Triples of `1..n` summing to `n` or `2n`, stored 0-based.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_sum_hypergraph(n: usize, out: *mut *mut RfHypergraph) -> RfStatus {
    nonnull!(out);
    guard(|| {
        *out = Box::into_raw(Box::new(RfHypergraph(sum_hypergraph(n)?.hypergraph)));
        Ok(())
    })
}

/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rf_hypergraph_edge_count(h: *const RfHypergraph) -> usize {
    (*h).0.edge_count()
}

/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_hypergraph_is_inseparable(h: *const RfHypergraph, out: *mut bool) -> RfStatus {
    nonnull!(h, out);
    guard(|| {
        *out = is_ev_inseparable(&(*h).0);
        Ok(())
    })
}

/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn rf_hypergraph_free(h: *mut RfHypergraph) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}
