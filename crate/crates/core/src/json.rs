//! JSON interchange: vectors, colorings, splice records and polynomials.
//!
//! Floating scalars are `[re, im]` and floating vectors the flat
//! `[re α, im α, re β, im β]`. Exact scalars are `{"u": [p, q], "v": [r, s]}`
//! meaning `p/q + (r/s)·x`, and exact vectors are pairs of those. Floats are
//! written with 15 significant digits.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::alexander::laurent::LaurentPoly;
use crate::coloring::{ArcColoring, ShadowColoring};
use crate::diagram::{OrientedDiagram, SpliceRecord};
use crate::error::{Error, Result};
use crate::parabolic::{Mat2, ParabolicVector};
use crate::scalar::{QOmega, Scalar, XRoot};

/// `x` rounded to 15 significant digits, with `-0` mapped to `0`.
pub fn round15(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn float(x: f64) -> Value {
    json!(round15(x))
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn as_f64(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| schema(format!("{what}: expected a number")))
}

fn as_array<'a>(v: &'a Value, len: usize, what: &str) -> Result<&'a Vec<Value>> {
    match v.as_array() {
        Some(a) if a.len() == len => Ok(a),
        _ => Err(schema(format!("{what}: expected an array of length {len}"))),
    }
}

fn bigint_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(i) => json!(i),
        None => json!(n.to_string()),
    }
}

fn bigint_from(v: &Value, what: &str) -> Result<BigInt> {
    if let Some(i) = v.as_i64() {
        return Ok(BigInt::from(i));
    }
    v.as_str().and_then(|s| s.parse().ok()).ok_or_else(|| schema(format!("{what}: expected an integer")))
}

fn rational_json(r: &BigRational) -> Value {
    json!([bigint_json(r.numer()), bigint_json(r.denom())])
}

fn rational_from(v: &Value, what: &str) -> Result<BigRational> {
    let a = as_array(v, 2, what)?;
    let q = bigint_from(&a[1], what)?;
    if q.is_zero() {
        return Err(schema(format!("{what}: zero denominator")));
    }
    Ok(BigRational::new(bigint_from(&a[0], what)?, q))
}

/// Scalars with a JSON encoding.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
    fn vector_to_json(v: &ParabolicVector<Self>) -> Value;
    fn vector_from_json(v: &Value) -> Result<ParabolicVector<Self>>;
}

impl JsonScalar for Complex64 {
    fn to_json(&self) -> Value {
        json!([float(self.re), float(self.im)])
    }

    /// Accepts `[re, im]` or a plain real number.
    fn from_json(v: &Value) -> Result<Self> {
        if let Some(x) = v.as_f64() {
            return Ok(Complex64::new(x, 0.0));
        }
        let a = as_array(v, 2, "complex scalar")?;
        Ok(Complex64::new(as_f64(&a[0], "complex scalar")?, as_f64(&a[1], "complex scalar")?))
    }

    fn vector_to_json(v: &ParabolicVector<Self>) -> Value {
        json!([float(v.alpha.re), float(v.alpha.im), float(v.beta.re), float(v.beta.im)])
    }

    fn vector_from_json(v: &Value) -> Result<ParabolicVector<Self>> {
        let a = as_array(v, 4, "vector")?;
        let x: Vec<f64> = a.iter().map(|e| as_f64(e, "vector")).collect::<Result<_>>()?;
        ParabolicVector::new(Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3]))
    }
}

impl JsonScalar for QOmega {
    fn to_json(&self) -> Value {
        json!({"u": rational_json(&self.u), "v": rational_json(&self.v)})
    }

    fn from_json(v: &Value) -> Result<Self> {
        let o = v.as_object().ok_or_else(|| schema("exact scalar: expected {\"u\", \"v\"}"))?;
        let part = |k: &str| o.get(k).ok_or_else(|| schema(format!("exact scalar: missing \"{k}\"")));
        if o.len() != 2 {
            return Err(schema("exact scalar: expected exactly \"u\" and \"v\""));
        }
        Ok(QOmega::new(rational_from(part("u")?, "u")?, rational_from(part("v")?, "v")?))
    }

    fn vector_to_json(v: &ParabolicVector<Self>) -> Value {
        json!([v.alpha.to_json(), v.beta.to_json()])
    }

    fn vector_from_json(v: &Value) -> Result<ParabolicVector<Self>> {
        let a = as_array(v, 2, "exact vector")?;
        ParabolicVector::new(QOmega::from_json(&a[0])?, QOmega::from_json(&a[1])?)
    }
}

pub fn matrix_to_json<S: JsonScalar>(m: &Mat2<S>) -> Value {
    json!([[m.m11.to_json(), m.m12.to_json()], [m.m21.to_json(), m.m22.to_json()]])
}

pub fn matrix_from_json<S: JsonScalar>(v: &Value) -> Result<Mat2<S>> {
    let rows = as_array(v, 2, "matrix")?;
    let r0 = as_array(&rows[0], 2, "matrix row")?;
    let r1 = as_array(&rows[1], 2, "matrix row")?;
    Ok(Mat2::new(S::from_json(&r0[0])?, S::from_json(&r0[1])?, S::from_json(&r1[0])?, S::from_json(&r1[1])?))
}

/// `{exponent: scalar}` in increasing exponent order.
pub fn poly_to_json<S: JsonScalar>(p: &LaurentPoly<S>) -> Value {
    Value::Object(p.terms().map(|(e, c)| (e.to_string(), c.to_json())).collect())
}

pub fn poly_from_json<S: JsonScalar>(v: &Value) -> Result<LaurentPoly<S>> {
    let o = v.as_object().ok_or_else(|| schema("polynomial: expected an object"))?;
    let mut p = LaurentPoly::zero();
    for (k, c) in o {
        let e: i32 = k.parse().map_err(|_| schema(format!("polynomial: bad exponent {k:?}")))?;
        p.add_term(e, S::from_json(c)?);
    }
    Ok(p)
}

fn vectors_to_json<S: JsonScalar>(vs: &[ParabolicVector<S>]) -> Value {
    Value::Object(vs.iter().enumerate().map(|(i, v)| (i.to_string(), S::vector_to_json(v))).collect())
}

/// Read `{id: vector}` for ids `0..count`, rejecting missing and extra ids.
fn vectors_from_json<S: JsonScalar>(
    v: &Value,
    count: usize,
    what: &str,
    missing: fn(usize) -> Error,
) -> Result<Vec<ParabolicVector<S>>> {
    let o = v.as_object().ok_or_else(|| schema(format!("{what}: expected an object keyed by id")))?;
    if let Some(k) = o.keys().find(|k| k.parse::<usize>().map_or(true, |i| i >= count)) {
        return Err(schema(format!("{what}: unexpected key {k:?}")));
    }
    (0..count).map(|i| S::vector_from_json(o.get(&i.to_string()).ok_or_else(|| missing(i))?)).collect()
}

pub fn splice_to_json(r: &SpliceRecord) -> Value {
    json!({
        "left": r.left.to_json_value(),
        "right": r.right.to_json_value(),
        "left_arc": r.left_arc,
        "right_arc": r.right_arc,
        "left_crossings": r.left_crossings,
        "right_crossings": r.right_crossings,
    })
}

pub fn splice_from_json(v: &Value) -> Result<SpliceRecord> {
    let field = |k: &str| v.get(k).ok_or_else(|| schema(format!("splice: missing \"{k}\"")));
    let index = |k: &str| -> Result<usize> {
        field(k)?.as_u64().map(|i| i as usize).ok_or_else(|| schema(format!("splice: \"{k}\" must be an index")))
    };
    let list = |k: &str| -> Result<Vec<usize>> { Ok(serde_json::from_value(field(k)?.clone())?) };
    Ok(SpliceRecord {
        left: OrientedDiagram::from_json_value(field("left")?.clone())?,
        right: OrientedDiagram::from_json_value(field("right")?.clone())?,
        left_arc: index("left_arc")?,
        right_arc: index("right_arc")?,
        left_crossings: list("left_crossings")?,
        right_crossings: list("right_crossings")?,
    })
}

/// Whether a coloring document uses the exact encoding, judged by its
/// first arc color.
pub fn is_exact_document(v: &Value) -> bool {
    let first = v.get("arc_colors").and_then(Value::as_object).and_then(|o| o.values().next());
    matches!(first.and_then(Value::as_array), Some(a) if a.first().is_some_and(Value::is_object))
}

/// A coloring together with whatever else a document carries.
#[derive(Clone, Debug)]
pub struct ColoringDocument<S> {
    pub arcs: ArcColoring<S>,
    pub regions: Option<Vec<ParabolicVector<S>>>,
    pub p: Option<ParabolicVector<S>>,
    pub splice: Option<SpliceRecord>,
    pub conjugator: Option<Mat2<S>>,
    /// Root of `x² + x + 1` used to evaluate exact colors numerically.
    pub x_root: Option<XRoot>,
}

impl<S: JsonScalar> ColoringDocument<S> {
    pub fn from_arcs(arcs: ArcColoring<S>) -> Self {
        ColoringDocument { arcs, regions: None, p: None, splice: None, conjugator: None, x_root: None }
    }

    pub fn from_shadow(s: ShadowColoring<S>) -> Self {
        ColoringDocument { regions: Some(s.regions), p: Some(s.p), ..ColoringDocument::from_arcs(s.arcs) }
    }

    /// The shadow coloring, if regions and `p` are present.
    pub fn shadow(&self, tol: f64) -> Result<ShadowColoring<S>> {
        let regions = self.regions.clone().ok_or_else(|| schema("missing \"region_colors\""))?;
        let p = self.p.clone().ok_or_else(|| schema("missing \"p\""))?;
        ShadowColoring::new(self.arcs.clone(), regions, p, tol)
    }

    pub fn to_json(&self) -> Value {
        let mut o = Map::new();
        o.insert("diagram".into(), self.arcs.diagram().to_json_value());
        o.insert("arc_colors".into(), vectors_to_json(self.arcs.colors()));
        if let Some(r) = &self.regions {
            o.insert("region_colors".into(), vectors_to_json(r));
        }
        if let Some(p) = &self.p {
            o.insert("p".into(), S::vector_to_json(p));
        }
        if let Some(s) = &self.splice {
            o.insert("splice".into(), splice_to_json(s));
        }
        if let Some(g) = &self.conjugator {
            o.insert("conjugator".into(), matrix_to_json(g));
        }
        if let Some(r) = self.x_root {
            o.insert("x_root".into(), json!(r.sign()));
        }
        Value::Object(o)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let o = v.as_object().ok_or_else(|| schema("coloring: expected an object"))?;
        // "conjugator_kind" is informational output of the consum command
        const KNOWN: [&str; 8] =
            ["diagram", "arc_colors", "region_colors", "p", "splice", "conjugator", "conjugator_kind", "x_root"];
        if let Some(k) = o.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            return Err(schema(format!("coloring: unknown field {k:?}")));
        }
        let diagram =
            OrientedDiagram::from_json_value(o.get("diagram").ok_or_else(|| schema("missing \"diagram\""))?.clone())?;
        let arc_colors = o.get("arc_colors").ok_or_else(|| schema("missing \"arc_colors\""))?;
        let colors = vectors_from_json(arc_colors, diagram.arc_count(), "arc_colors", Error::MissingArcColor)?;
        let regions = match o.get("region_colors") {
            Some(r) => Some(vectors_from_json(r, diagram.face_count(), "region_colors", Error::MissingFaceValue)?),
            None => None,
        };
        let p = o.get("p").map(S::vector_from_json).transpose()?;
        let splice = o.get("splice").map(splice_from_json).transpose()?;
        if let Some(s) = &splice {
            s.check(&diagram)?;
        }
        let conjugator = o.get("conjugator").map(matrix_from_json).transpose()?;
        let x_root = match o.get("x_root") {
            None => None,
            Some(r) => Some(r.as_i64().and_then(XRoot::from_sign).ok_or_else(|| schema("x_root must be 1 or -1"))?),
        };
        Ok(ColoringDocument { arcs: ArcColoring::new(diagram, colors)?, regions, p, splice, conjugator, x_root })
    }
}

impl ColoringDocument<QOmega> {
    /// Numerical version at `root`, defaulting to the document's own root
    /// and then to [`XRoot::Minus`].
    pub fn to_complex(&self, root: Option<XRoot>) -> ColoringDocument<Complex64> {
        let root = root.or(self.x_root).unwrap_or(XRoot::Minus);
        let vec = |v: &ParabolicVector<QOmega>| v.to_complex(root);
        ColoringDocument {
            arcs: self.arcs.to_complex(root),
            regions: self.regions.as_ref().map(|r| r.iter().map(vec).collect()),
            p: self.p.as_ref().map(vec),
            splice: self.splice.clone(),
            conjugator: self.conjugator.as_ref().map(|g| g.to_complex(root)),
            x_root: Some(root),
        }
    }
}

/// Pretty JSON text with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{exact_shadow, COMPOSITE, NAMES};

    #[test]
    fn rounding() {
        assert_eq!(round15(-0.0).to_bits(), 0.0f64.to_bits());
        assert_eq!(round15(1.0 / 3.0), 0.333333333333333);
        assert_eq!(round15(2.029883212819307), 2.02988321281931);
        assert_eq!(round15(1e-300), 1e-300);
    }

    #[test]
    fn exact_documents_round_trip() {
        for name in NAMES {
            let doc = ColoringDocument::from_shadow(exact_shadow(name).unwrap());
            let v = doc.to_json();
            assert!(is_exact_document(&v));
            let back = ColoringDocument::<QOmega>::from_json(&v).unwrap();
            assert_eq!(back.to_json(), v);
            assert_eq!(back.shadow(0.0).unwrap().regions, doc.regions.unwrap());
        }
    }

    #[test]
    fn floating_documents_round_trip_after_rounding() {
        let doc = ColoringDocument::from_shadow(exact_shadow(COMPOSITE).unwrap()).to_complex(Some(XRoot::Plus));
        let v = doc.to_json();
        assert!(!is_exact_document(&v));
        let back = ColoringDocument::<Complex64>::from_json(&v).unwrap();
        assert_eq!(to_text(&back.to_json()), to_text(&v));
        assert_eq!(back.x_root, Some(XRoot::Plus));
    }

    #[test]
    fn splice_round_trip() {
        let mut doc = ColoringDocument::from_arcs(exact_shadow(COMPOSITE).unwrap().arcs);
        doc.splice = Some(crate::fixtures::splice_record().unwrap());
        doc.conjugator = Some(Mat2::identity());
        let v = doc.to_json();
        let back = ColoringDocument::<QOmega>::from_json(&v).unwrap();
        assert_eq!(back.splice, doc.splice);
        assert_eq!(back.conjugator, doc.conjugator);
    }

    #[test]
    fn schema_errors() {
        let v = ColoringDocument::from_shadow(exact_shadow("3_1").unwrap()).to_json();
        let mut missing = v.clone();
        missing["arc_colors"].as_object_mut().unwrap().remove("1");
        assert!(matches!(ColoringDocument::<QOmega>::from_json(&missing), Err(Error::MissingArcColor(1))));
        let mut extra = v.clone();
        extra["arc_colors"]["7"] = extra["arc_colors"]["0"].clone();
        assert!(matches!(ColoringDocument::<QOmega>::from_json(&extra), Err(Error::Schema(_))));
        let mut unknown = v.clone();
        unknown["colour"] = json!(1);
        assert!(matches!(ColoringDocument::<QOmega>::from_json(&unknown), Err(Error::Schema(_))));
        let mut zero_den = v.clone();
        zero_den["p"][0]["u"] = json!([1, 0]);
        assert!(matches!(ColoringDocument::<QOmega>::from_json(&zero_den), Err(Error::Schema(_))));
        let mut zero = v;
        zero["p"] = json!([{"u": [0, 1], "v": [0, 1]}, {"u": [0, 1], "v": [0, 1]}]);
        assert!(matches!(ColoringDocument::<QOmega>::from_json(&zero), Err(Error::ZeroVector)));
    }

    #[test]
    fn polynomials() {
        let p = LaurentPoly::from_coeffs(-1, [QOmega::int(1, 2), QOmega::zero(), QOmega::from_fractions(1, 3, 0, 1)]);
        let v = poly_to_json(&p);
        assert_eq!(v.as_object().unwrap().keys().collect::<Vec<_>>(), ["-1", "1"]);
        assert_eq!(poly_from_json::<QOmega>(&v).unwrap(), p);
        let big = QOmega::new(BigRational::new(BigInt::from(10).pow(30), BigInt::from(7)), BigRational::zero());
        assert_eq!(QOmega::from_json(&big.to_json()).unwrap(), big);
    }
}
