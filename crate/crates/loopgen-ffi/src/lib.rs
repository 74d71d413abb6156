//! C ABI for the exact multi-j-symbol engine.
//!
//! Graphs are opaque handles created by [`loopgen_graph_parse`] or
//! [`loopgen_graph_standard`] and released with [`loopgen_graph_free`].
//! Every function returns a [`LoopgenStatus`]; on failure a thread-local
//! message is available through [`loopgen_last_error`] until the next failing
//! call on the same thread. Strings returned through out-pointers are
//! allocated by this library and must be released with
//! [`loopgen_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use loopgen::assign::parse_assignment;
use loopgen::curves::{curve_polynomial, loop_polynomial};
use loopgen::graph::{five_j, nine_j, six_j, three_j, RecouplingGraph};
use loopgen::symbol::symbol_value;

/// Result of every C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopgenStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    CapExceeded = 5,
    BudgetExceeded = 6,
}

/// Opaque graph handle.
pub struct LoopgenGraph {
    inner: RecouplingGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: LoopgenStatus, message: &str) -> LoopgenStatus {
    set_error(message);
    status
}

/// Message of the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn loopgen_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, LoopgenStatus> {
    if p.is_null() {
        return Err(fail(LoopgenStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        fail(
            LoopgenStatus::InvalidUtf8,
            "string argument is not valid UTF-8",
        )
    })
}

fn give_string(out: *mut *mut c_char, s: String) -> LoopgenStatus {
    let c = match CString::new(s) {
        Ok(c) => c,
        Err(_) => return fail(LoopgenStatus::InvalidInput, "output contained NUL"),
    };
    unsafe { *out = c.into_raw() };
    LoopgenStatus::Ok
}

fn give_graph(out: *mut *mut LoopgenGraph, g: RecouplingGraph) -> LoopgenStatus {
    let boxed = Box::new(LoopgenGraph { inner: g });
    unsafe { *out = Box::into_raw(boxed) };
    LoopgenStatus::Ok
}

/// Parses a graph from its line-oriented text format.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be a valid
/// pointer. On success `*out` owns the graph.
#[no_mangle]
pub unsafe extern "C" fn loopgen_graph_parse(
    text: *const c_char,
    out: *mut *mut LoopgenGraph,
) -> LoopgenStatus {
    if out.is_null() {
        return fail(LoopgenStatus::NullArgument, "null out pointer");
    }
    let text = match read_str(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match RecouplingGraph::parse(text) {
        Ok(g) => give_graph(out, g),
        Err(e) => fail(LoopgenStatus::ParseError, &e.to_string()),
    }
}

/// Builds one of the standard graphs: `"3j"`, `"5j"`, `"6j"` or `"9j"`.
///
/// # Safety
/// `name` must be a valid NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn loopgen_graph_standard(
    name: *const c_char,
    out: *mut *mut LoopgenGraph,
) -> LoopgenStatus {
    if out.is_null() {
        return fail(LoopgenStatus::NullArgument, "null out pointer");
    }
    let name = match read_str(name) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let g = match name.to_ascii_lowercase().as_str() {
        "3j" => three_j(),
        "5j" => five_j(),
        "6j" => six_j(),
        "9j" => nine_j(),
        other => {
            return fail(
                LoopgenStatus::InvalidInput,
                &format!("unknown standard graph `{other}`"),
            )
        }
    };
    give_graph(out, g)
}

/// Releases a graph handle. Passing NULL is a no-op.
///
/// # Safety
/// `g` must be a pointer previously returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn loopgen_graph_free(g: *mut LoopgenGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Writes the vertex, internal-edge and leg counts.
///
/// # Safety
/// All pointers must be valid; `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn loopgen_graph_counts(
    g: *const LoopgenGraph,
    vertices: *mut u32,
    edges: *mut u32,
    legs: *mut u32,
) -> LoopgenStatus {
    if g.is_null() || vertices.is_null() || edges.is_null() || legs.is_null() {
        return fail(LoopgenStatus::NullArgument, "null argument");
    }
    let graph = &(*g).inner;
    *vertices = graph.vertex_count() as u32;
    *edges = graph.edge_count() as u32;
    *legs = graph.leg_count() as u32;
    LoopgenStatus::Ok
}

/// Serializes a graph back to its text format.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be valid. The returned string
/// must be freed with [`loopgen_string_free`].
#[no_mangle]
pub unsafe extern "C" fn loopgen_graph_serialize(
    g: *const LoopgenGraph,
    out: *mut *mut c_char,
) -> LoopgenStatus {
    if g.is_null() || out.is_null() {
        return fail(LoopgenStatus::NullArgument, "null argument");
    }
    give_string(out, (*g).inner.serialize())
}

/// Canonical text of the closed-loop-set polynomial.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be valid. Free the string
/// with [`loopgen_string_free`].
#[no_mangle]
pub unsafe extern "C" fn loopgen_loop_polynomial(
    g: *const LoopgenGraph,
    out: *mut *mut c_char,
) -> LoopgenStatus {
    if g.is_null() || out.is_null() {
        return fail(LoopgenStatus::NullArgument, "null argument");
    }
    give_string(out, loop_polynomial(&(*g).inner).to_string())
}

/// Canonical text of the open-curve polynomial from `from_leg` to `to_leg`.
///
/// # Safety
/// `g` must be a live graph handle; strings NUL-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn loopgen_curve_polynomial(
    g: *const LoopgenGraph,
    from_leg: *const c_char,
    to_leg: *const c_char,
    out: *mut *mut c_char,
) -> LoopgenStatus {
    if g.is_null() || out.is_null() {
        return fail(LoopgenStatus::NullArgument, "null argument");
    }
    let from = match read_str(from_leg) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let to = match read_str(to_leg) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match curve_polynomial(&(*g).inner, from, to) {
        Ok(p) => give_string(out, p.to_string()),
        Err(e) => fail(LoopgenStatus::InvalidInput, &e.to_string()),
    }
}

/// Replaces two legs by one oriented internal edge running from `leg1` to
/// `leg2`, producing a new graph handle.
///
/// # Safety
/// `g` must be a live graph handle; strings NUL-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn loopgen_glue_legs(
    g: *const LoopgenGraph,
    leg1: *const c_char,
    leg2: *const c_char,
    new_edge: *const c_char,
    out: *mut *mut LoopgenGraph,
) -> LoopgenStatus {
    if g.is_null() || out.is_null() {
        return fail(LoopgenStatus::NullArgument, "null argument");
    }
    let leg1 = match read_str(leg1) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let leg2 = match read_str(leg2) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let name = match read_str(new_edge) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match (*g).inner.glue_legs(leg1, leg2, name) {
        Ok(glued) => give_graph(out, glued),
        Err(e) => fail(LoopgenStatus::InvalidInput, &e.to_string()),
    }
}

/// Evaluates one symbol exactly. `assignment` is a space-separated list of
/// `name=2j` (internal edges) and `name=2j,2m` (legs) tokens. On success
/// `*exact` holds the canonical exact value (possibly `0`, or
/// `0 (selection rule: ...)` when a selection rule fires) and `*approx` a
/// floating-point approximation.
///
/// # Safety
/// `g` must be a live graph handle; `assignment` NUL-terminated;
/// `exact` and `approx` valid pointers. Free `*exact` with
/// [`loopgen_string_free`].
#[no_mangle]
pub unsafe extern "C" fn loopgen_symbol(
    g: *const LoopgenGraph,
    assignment: *const c_char,
    exact: *mut *mut c_char,
    approx: *mut f64,
) -> LoopgenStatus {
    if g.is_null() || exact.is_null() || approx.is_null() {
        return fail(LoopgenStatus::NullArgument, "null argument");
    }
    let assignment = match read_str(assignment) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let graph = &(*g).inner;
    let tokens: Vec<String> = assignment.split_whitespace().map(str::to_string).collect();
    let q = match parse_assignment(graph, &tokens, None) {
        Ok(q) => q,
        Err(e) => return fail(LoopgenStatus::InvalidInput, &e.to_string()),
    };
    match symbol_value(graph, &q) {
        Ok(v) => {
            *approx = v.value.to_f64();
            let text = match v.vanished_by {
                Some(rule) => format!("0 (selection rule: {rule})"),
                None => v.value.to_string(),
            };
            give_string(exact, text)
        }
        Err(e) => fail(LoopgenStatus::CapExceeded, &e.to_string()),
    }
}

/// Frees a string returned by this library. Passing NULL is a no-op.
///
/// # Safety
/// `s` must have been returned by a loopgen function, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn loopgen_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take_string(p: *mut c_char) -> String {
        let s = CStr::from_ptr(p).to_str().unwrap().to_string();
        loopgen_string_free(p);
        s
    }

    #[test]
    fn standard_graph_and_polynomial() {
        unsafe {
            let mut g: *mut LoopgenGraph = ptr::null_mut();
            let st = loopgen_graph_standard(cstr("6j").as_ptr(), &mut g);
            assert_eq!(st, LoopgenStatus::Ok);
            let (mut v, mut e, mut l) = (0u32, 0u32, 0u32);
            assert_eq!(
                loopgen_graph_counts(g, &mut v, &mut e, &mut l),
                LoopgenStatus::Ok
            );
            assert_eq!((v, e, l), (4, 6, 0));
            let mut s: *mut c_char = ptr::null_mut();
            assert_eq!(loopgen_loop_polynomial(g, &mut s), LoopgenStatus::Ok);
            assert_eq!(
                take_string(s),
                "1 + A*B*F + A*C*E + B*C*D + D*E*F + A*B*D*E + A*C*D*F + B*C*E*F"
            );
            loopgen_graph_free(g);
        }
    }

    #[test]
    fn parse_round_trip_and_errors() {
        unsafe {
            let text = cstr("vertex v: a b c\nleg A: a\nleg B: b\nleg C: c\n");
            let mut g: *mut LoopgenGraph = ptr::null_mut();
            assert_eq!(loopgen_graph_parse(text.as_ptr(), &mut g), LoopgenStatus::Ok);
            let mut s: *mut c_char = ptr::null_mut();
            assert_eq!(loopgen_graph_serialize(g, &mut s), LoopgenStatus::Ok);
            let round = take_string(s);
            let mut g2: *mut LoopgenGraph = ptr::null_mut();
            assert_eq!(
                loopgen_graph_parse(cstr(&round).as_ptr(), &mut g2),
                LoopgenStatus::Ok
            );
            loopgen_graph_free(g);
            loopgen_graph_free(g2);

            let bad = cstr("vertex v: a b\n");
            let mut g3: *mut LoopgenGraph = ptr::null_mut();
            assert_eq!(
                loopgen_graph_parse(bad.as_ptr(), &mut g3),
                LoopgenStatus::ParseError
            );
            let msg = CStr::from_ptr(loopgen_last_error()).to_str().unwrap();
            assert!(msg.contains("non-trivalent"), "{msg}");
        }
    }

    #[test]
    fn symbol_evaluation() {
        unsafe {
            let mut g: *mut LoopgenGraph = ptr::null_mut();
            assert_eq!(
                loopgen_graph_standard(cstr("3j").as_ptr(), &mut g),
                LoopgenStatus::Ok
            );
            let mut exact: *mut c_char = ptr::null_mut();
            let mut approx = 0.0f64;
            let st = loopgen_symbol(
                g,
                cstr("A=2,0 B=2,0 C=0,0").as_ptr(),
                &mut exact,
                &mut approx,
            );
            assert_eq!(st, LoopgenStatus::Ok);
            assert_eq!(take_string(exact), "-1/3 * sqrt(3)");
            assert!((approx + 0.5773502691896257).abs() < 1e-12);
            loopgen_graph_free(g);
        }
    }

    #[test]
    fn glue_via_ffi() {
        unsafe {
            let mut g: *mut LoopgenGraph = ptr::null_mut();
            assert_eq!(
                loopgen_graph_standard(cstr("3j").as_ptr(), &mut g),
                LoopgenStatus::Ok
            );
            let mut glued: *mut LoopgenGraph = ptr::null_mut();
            let st = loopgen_glue_legs(
                g,
                cstr("B").as_ptr(),
                cstr("C").as_ptr(),
                cstr("L").as_ptr(),
                &mut glued,
            );
            assert_eq!(st, LoopgenStatus::Ok);
            let (mut v, mut e, mut l) = (0u32, 0u32, 0u32);
            loopgen_graph_counts(glued, &mut v, &mut e, &mut l);
            assert_eq!((v, e, l), (1, 1, 1));
            loopgen_graph_free(glued);
            loopgen_graph_free(g);
        }
    }

    #[test]
    fn null_arguments_rejected() {
        unsafe {
            let mut g: *mut LoopgenGraph = ptr::null_mut();
            assert_eq!(
                loopgen_graph_parse(ptr::null(), &mut g),
                LoopgenStatus::NullArgument
            );
            assert_eq!(
                loopgen_graph_standard(cstr("6j").as_ptr(), ptr::null_mut()),
                LoopgenStatus::NullArgument
            );
            loopgen_graph_free(ptr::null_mut()); // no-op
            loopgen_string_free(ptr::null_mut()); // no-op
        }
    }
}
