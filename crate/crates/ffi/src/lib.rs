//! C ABI for knotsum.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free`. Strings returned through `char **` are
//! released with [`ks_string_free`]. Every function returns a [`KsStatus`];
//! on failure [`ks_last_error`] describes the problem.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use knotsum::alexander::{default_column, twisted_alexander};
use knotsum::coloring::{composite_shadow, connected_sum_coloring, factor_coloring, restrict_regions, Conjugator};
use knotsum::diagram::{parse_pd, wirtinger, OrientedDiagram, Side};
use knotsum::fixtures;
use knotsum::json::{float, matrix_from_json, poly_to_json, to_text, ColoringDocument, JsonScalar};
use knotsum::scalar::{QOmega, Scalar, XRoot};
use knotsum::volume::{complex_volume, RESIDUAL_TOLERANCE};
use knotsum::Error;
use num_complex::Complex64;
use serde_json::json;

/// Outcome of a call. Mirrors the CLI exit codes for 0, 1 and 2.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KsStatus {
    Ok = 0,
    /// Residuals, remainders or colorings out of tolerance.
    MathFailure = 1,
    /// Malformed or inconsistent input.
    InputError = 2,
    NullPointer = 3,
    Panic = 4,
}

/// Complex volume `vol + i cs` and the solution check behind it.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct KsVolume {
    pub vol: f64,
    pub cs: f64,
    pub w0_re: f64,
    pub w0_im: f64,
    pub max_residual: f64,
    pub residual_ok: bool,
}

/// An oriented knot diagram.
pub struct KsDiagram {
    inner: OrientedDiagram,
}

/// A coloring document, exact over `Q(x)` or floating.
pub struct KsColoring {
    inner: Doc,
}

#[derive(Clone)]
#[allow(clippy::large_enum_variant)]
enum Doc {
    Exact(ColoringDocument<QOmega>),
    Floating(ColoringDocument<Complex64>),
}

enum Failure {
    Lib(Error),
    Null(&'static str),
    Input(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Lib(Error::Json(e))
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn call(f: impl FnOnce() -> Result<(), Failure>) -> KsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            KsStatus::Ok
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            if e.is_mathematical() {
                KsStatus::MathFailure
            } else {
                KsStatus::InputError
            }
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            KsStatus::NullPointer
        }
        Ok(Err(Failure::Input(msg))) => {
            set_error(msg);
            KsStatus::InputError
        }
        Ok(Err(Failure::Math(msg))) => {
            set_error(msg);
            KsStatus::MathFailure
        }
        Err(_) => {
            set_error("internal panic".into());
            KsStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure::Input(format!("{what}: invalid UTF-8")))
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    *out = CString::new(s).map_err(|_| Failure::Input("string contains NUL".into()))?.into_raw();
    Ok(())
}

fn root_of(x_root: i32) -> Result<Option<XRoot>, Failure> {
    match x_root {
        0 => Ok(None),
        r => XRoot::from_sign(r as i64).map(Some).ok_or_else(|| Failure::Input("x_root must be -1, 0 or 1".into())),
    }
}

/// Message describing the last failure on this thread, or NULL after a
/// successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ks_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn ks_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a PD code such as `X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)`.
///
/// # Safety
/// `pd` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ks_diagram_from_pd(pd: *const c_char, out: *mut *mut KsDiagram) -> KsStatus {
    call(|| put(out, KsDiagram { inner: parse_pd(text(pd, "pd")?)? }))
}

/// Diagram JSON, as produced by [`ks_diagram_to_json`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ks_diagram_from_json(json: *const c_char, out: *mut *mut KsDiagram) -> KsStatus {
    call(|| put(out, KsDiagram { inner: OrientedDiagram::from_json_str(text(json, "json")?)? }))
}

/// Built-in diagram `3_1`, `4_1` or `3_1#4_1`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ks_diagram_builtin(name: *const c_char, out: *mut *mut KsDiagram) -> KsStatus {
    call(|| put(out, KsDiagram { inner: fixtures::builtin(text(name, "name")?)? }))
}

/// # Safety
/// `d` must be NULL or a live diagram handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ks_diagram_to_json(d: *const KsDiagram, out: *mut *mut c_char) -> KsStatus {
    call(|| put_string(out, get(d, "diagram")?.inner.to_json_string()))
}

/// Wirtinger presentation as JSON: generators and relator words.
///
/// # Safety
/// `d` must be NULL or a live diagram handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ks_diagram_wirtinger(d: *const KsDiagram, out: *mut *mut c_char) -> KsStatus {
    call(|| {
        let p = wirtinger(&get(d, "diagram")?.inner);
        let words: Vec<String> = p.relators.iter().map(|r| r.to_string()).collect();
        put_string(out, json!({"generators": p.generators, "words": words}).to_string())
    })
}

/// Crossing, arc and face counts; any output pointer may be NULL.
///
/// # Safety
/// `d` must be NULL or a live diagram handle; non-NULL outputs valid.
#[no_mangle]
pub unsafe extern "C" fn ks_diagram_counts(
    d: *const KsDiagram,
    crossings: *mut usize,
    arcs: *mut usize,
    faces: *mut usize,
) -> KsStatus {
    call(|| {
        let d = &get(d, "diagram")?.inner;
        for (p, v) in [(crossings, d.crossing_count()), (arcs, d.arc_count()), (faces, d.face_count())] {
            if !p.is_null() {
                *p = v;
            }
        }
        Ok(())
    })
}

/// # Safety
/// `d` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn ks_diagram_free(d: *mut KsDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Exact shadow coloring of a built-in fixture; the composite carries its
/// splice record.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ks_coloring_builtin(name: *const c_char, out: *mut *mut KsColoring) -> KsStatus {
    call(|| {
        let name = text(name, "name")?;
        let mut doc = ColoringDocument::from_shadow(fixtures::exact_shadow(name)?);
        if name == fixtures::COMPOSITE {
            doc.splice = Some(fixtures::splice_record()?);
        }
        put(out, KsColoring { inner: Doc::Exact(doc) })
    })
}

/// Coloring JSON; exact or floating is detected from the encoding.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ks_coloring_from_json(json: *const c_char, out: *mut *mut KsColoring) -> KsStatus {
    call(|| {
        let v: serde_json::Value = serde_json::from_str(text(json, "json")?)?;
        let inner = if knotsum::json::is_exact_document(&v) {
            Doc::Exact(ColoringDocument::from_json(&v)?)
        } else {
            Doc::Floating(ColoringDocument::from_json(&v)?)
        };
        put(out, KsColoring { inner })
    })
}

/// # Safety
/// `c` must be NULL or a live coloring handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ks_coloring_to_json(c: *const KsColoring, out: *mut *mut c_char) -> KsStatus {
    call(|| {
        let v = match &get(c, "coloring")?.inner {
            Doc::Exact(d) => d.to_json(),
            Doc::Floating(d) => d.to_json(),
        };
        put_string(out, to_text(&v))
    })
}

/// # Safety
/// `c` must be NULL or a live coloring handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ks_coloring_is_exact(c: *const KsColoring, out: *mut bool) -> KsStatus {
    call(|| {
        let exact = matches!(get(c, "coloring")?.inner, Doc::Exact(_));
        *out.as_mut().ok_or(Failure::Null("out"))? = exact;
        Ok(())
    })
}

/// Floating copy of a coloring. Exact colorings are evaluated at `x_root`
/// (`-1` or `1`; `0` uses the document's root, defaulting to `-1`).
///
/// # Safety
/// `c` must be NULL or a live coloring handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ks_coloring_to_floating(
    c: *const KsColoring,
    x_root: i32,
    out: *mut *mut KsColoring,
) -> KsStatus {
    call(|| {
        let root = root_of(x_root)?;
        let doc = match &get(c, "coloring")?.inner {
            Doc::Exact(d) => d.to_complex(root),
            Doc::Floating(d) => d.clone(),
        };
        put(out, KsColoring { inner: Doc::Floating(doc) })
    })
}

/// Whether the arc relation holds at every crossing within `tol`
/// (exactly, for exact colorings).
///
/// # Safety
/// `c` must be NULL or a live coloring handle; `passed` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ks_coloring_verify(c: *const KsColoring, tol: f64, passed: *mut bool) -> KsStatus {
    call(|| {
        let ok = match &get(c, "coloring")?.inner {
            Doc::Exact(d) => d.arcs.verify(0.0).ok(),
            Doc::Floating(d) => d.arcs.verify(tol).ok(),
        };
        *passed.as_mut().ok_or(Failure::Null("passed"))? = ok;
        Ok(())
    })
}

/// # Safety
/// `c` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn ks_coloring_free(c: *mut KsColoring) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Complex volume of a shadow coloring (region colors and `p` required).
/// Exact colorings are evaluated at `x_root` as in
/// [`ks_coloring_to_floating`]. Returns `KS_STATUS_MATH_FAILURE` when the
/// residual check fails; `out` is filled either way.
///
/// # Safety
/// `c` must be NULL or a live coloring handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ks_complex_volume(
    c: *const KsColoring,
    x_root: i32,
    tol: f64,
    out: *mut KsVolume,
) -> KsStatus {
    call(|| {
        let root = root_of(x_root)?;
        let (shadow, tol) = match &get(c, "coloring")?.inner {
            Doc::Exact(d) => {
                let root = root.or(d.x_root).unwrap_or(XRoot::Minus);
                (d.shadow(0.0)?.to_complex(root), RESIDUAL_TOLERANCE)
            }
            Doc::Floating(d) => (d.shadow(tol)?, tol),
        };
        let r = complex_volume(&shadow, tol)?;
        *out.as_mut().ok_or(Failure::Null("out"))? = KsVolume {
            vol: r.volume.vol,
            cs: r.volume.cs,
            w0_re: r.w0.re,
            w0_im: r.w0.im,
            max_residual: r.max_residual,
            residual_ok: r.residual_ok,
        };
        if r.residual_ok {
            Ok(())
        } else {
            Err(Failure::Math(format!("hyperbolicity residual {:e} exceeds tolerance", r.max_residual)))
        }
    })
}

fn alexander_json<S: JsonScalar>(doc: &ColoringDocument<S>, column: i64, tol: f64) -> Result<String, Failure> {
    let pres = wirtinger(doc.arcs.diagram()).without_last_relator()?;
    let column = if column < 0 {
        default_column(&pres, doc.splice.as_ref().map(|r| r.connecting_arcs(doc.arcs.diagram()).0))
    } else {
        column as usize
    };
    let a = twisted_alexander(&pres, &doc.arcs, column, tol)?;
    Ok(json!({
        "delta": poly_to_json(&a.delta),
        "delta_prime": poly_to_json(&a.delta_prime),
        "removed_column": a.removed_column,
        "division_remainder_norm": float(a.remainder_norm),
    })
    .to_string())
}

/// Twisted Alexander polynomial as JSON, with the layout of the CLI's
/// `alexander` output. A negative `column` selects the default.
///
/// # Safety
/// `c` must be NULL or a live coloring handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ks_twisted_alexander(
    c: *const KsColoring,
    column: i64,
    tol: f64,
    out: *mut *mut c_char,
) -> KsStatus {
    call(|| {
        let s = match &get(c, "coloring")?.inner {
            Doc::Exact(d) => alexander_json(d, column, 0.0)?,
            Doc::Floating(d) => alexander_json(d, column, tol)?,
        };
        put_string(out, s)
    })
}

fn sum_docs<S: JsonScalar>(
    a: &ColoringDocument<S>,
    arc1: usize,
    b: &ColoringDocument<S>,
    arc2: usize,
    conjugator: Option<&str>,
    tol: f64,
) -> Result<ColoringDocument<S>, Failure> {
    let conj = match conjugator {
        None | Some("canonical") => Conjugator::Canonical,
        Some(t) => Conjugator::Matrix(matrix_from_json(&serde_json::from_str(t)?)?),
    };
    let sum = connected_sum_coloring(&a.arcs, arc1, &b.arcs, arc2, &conj, tol)?;
    let mut doc = ColoringDocument::from_arcs(sum.coloring.clone());
    if let Ok(left) = a.shadow(tol) {
        let s = composite_shadow(&sum.coloring, &sum.record, &left, tol)?;
        doc.regions = Some(s.regions);
        doc.p = Some(s.p);
    }
    doc.splice = Some(sum.record);
    doc.conjugator = Some(sum.conjugator);
    doc.x_root = a.x_root;
    Ok(doc)
}

/// Connected sum of two colorings of the same kind, cutting `arc1` of `a`
/// and `arc2` of `b`. `conjugator` is NULL or `"canonical"` for the
/// canonical conjugator, otherwise a 2×2 JSON matrix.
///
/// # Safety
/// `a`, `b` must be NULL or live coloring handles; `conjugator` NULL or a
/// NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ks_connected_sum(
    a: *const KsColoring,
    arc1: usize,
    b: *const KsColoring,
    arc2: usize,
    conjugator: *const c_char,
    tol: f64,
    out: *mut *mut KsColoring,
) -> KsStatus {
    call(|| {
        let conj = if conjugator.is_null() { None } else { Some(text(conjugator, "conjugator")?) };
        let inner = match (&get(a, "a")?.inner, &get(b, "b")?.inner) {
            (Doc::Exact(x), Doc::Exact(y)) => Doc::Exact(sum_docs(x, arc1, y, arc2, conj, 0.0)?),
            (Doc::Floating(x), Doc::Floating(y)) => Doc::Floating(sum_docs(x, arc1, y, arc2, conj, tol)?),
            _ => return Err(Failure::Input("cannot sum an exact and a floating coloring".into())),
        };
        put(out, KsColoring { inner })
    })
}

fn factor_doc<S: Scalar + JsonScalar>(
    doc: &ColoringDocument<S>,
    tol: f64,
) -> Result<(ColoringDocument<S>, ColoringDocument<S>), Failure> {
    let record = doc.splice.as_ref().ok_or_else(|| Failure::Input("coloring has no splice record".into()))?;
    let (l, r) = factor_coloring(&doc.arcs, record, tol)?;
    let part = |arcs, side| {
        let mut d = ColoringDocument::from_arcs(arcs);
        if let (Some(regions), Some(p)) = (&doc.regions, &doc.p) {
            d.regions = Some(restrict_regions(doc.arcs.diagram(), regions, record, side));
            d.p = Some(p.clone());
        }
        d.x_root = doc.x_root;
        d
    };
    Ok((part(l, Side::Left), part(r, Side::Right)))
}

/// Split a connected-sum coloring carrying a splice record into its two
/// summands.
///
/// # Safety
/// `c` must be NULL or a live coloring handle; outputs valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ks_factor(
    c: *const KsColoring,
    tol: f64,
    left: *mut *mut KsColoring,
    right: *mut *mut KsColoring,
) -> KsStatus {
    call(|| {
        if left.is_null() || right.is_null() {
            return Err(Failure::Null("out"));
        }
        let (l, r) = match &get(c, "coloring")?.inner {
            Doc::Exact(d) => {
                let (l, r) = factor_doc(d, 0.0)?;
                (Doc::Exact(l), Doc::Exact(r))
            }
            Doc::Floating(d) => {
                let (l, r) = factor_doc(d, tol)?;
                (Doc::Floating(l), Doc::Floating(r))
            }
        };
        put(left, KsColoring { inner: l })?;
        put(right, KsColoring { inner: r })
    })
}
