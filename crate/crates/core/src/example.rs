//! End-to-end reproduction of the built-in trefoil / figure-eight example.

use serde_json::{json, Value};

use crate::alexander::laurent::{det_laurent, LaurentPoly};
use crate::alexander::{alexander_matrix, denominator, twisted_alexander, COEFF_TOLERANCE};
use crate::coloring::{
    composite_shadow, connected_sum_coloring, factor_coloring, ColoredSum, Conjugator, ShadowColoring,
};
use crate::diagram::{wirtinger, ArcId, OrientedDiagram, Presentation};
use crate::error::Result;
use crate::fixtures::{self, exact_shadow, COMPOSITE, FIGURE_EIGHT, NAMES, SPLICE_ARCS, TREFOIL};
use crate::parabolic::{Mat2, ParabolicVector};
use crate::scalar::{QOmega, XRoot};
use crate::volume::{complex_volume, cs_distance, solution_from_shadow, ComplexVolume, RESIDUAL_TOLERANCE};

/// Published trefoil part: `(vol, cs)`.
pub const TREFOIL_VOLUME: (f64, f64) = (0.0, 1.6449);
/// Published figure-eight volume for [`XRoot::Minus`]; the other root flips it.
pub const FIGURE_EIGHT_VOLUME: f64 = 2.0299;
/// Agreement with the published digits.
pub const PRINTED_TOLERANCE: f64 = 1e-3;
pub const CS_ZERO_TOLERANCE: f64 = 1e-6;
pub const ADDITIVITY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn from(name: &'static str, r: Result<(bool, String)>) -> Check {
        match r {
            Ok((passed, detail)) => Check { name, passed, detail },
            Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"name": self.name, "status": if self.passed { "pass" } else { "fail" }, "detail": self.detail})
    }
}

/// The solution multiset `det(p, s_k)` of the composite fixture, as `u + v·x`.
pub fn expected_solution() -> Vec<QOmega> {
    [(-3, 0), (-1, 0), (-1, 0), (5, 0), (6, 0), (1, -4), (-2, -8), (3, -9), (3, -7)]
        .into_iter()
        .map(|(u, v)| QOmega::int(u, v))
        .collect()
}

fn sorted_keys(vs: &[QOmega]) -> Vec<String> {
    let mut k: Vec<String> = vs.iter().map(|v| format!("{v:?}")).collect();
    k.sort();
    k
}

/// Whether two lists are equal as multisets.
pub fn same_multiset(a: &[QOmega], b: &[QOmega]) -> bool {
    sorted_keys(a) == sorted_keys(b)
}

/// `Δ(3₁) = 1 + t²`, `Δ(4₁) = 1 − 4t + t²` and
/// `Δ(3₁#4₁) = (1 − t)²(1 + t²)(1 − 4t + t²)`.
pub fn expected_delta(name: &str) -> LaurentPoly<QOmega> {
    let ints = |cs: [i64; 3]| LaurentPoly::from_coeffs(0, cs.map(|c| QOmega::int(c, 0)));
    let trefoil = ints([1, 0, 1]);
    let figure_eight = ints([1, -4, 1]);
    match name {
        TREFOIL => trefoil,
        FIGURE_EIGHT => figure_eight,
        _ => &(&LaurentPoly::one_minus_t_squared() * &trefoil) * &figure_eight,
    }
}

/// Signed published figure-eight volume at `root`.
pub fn figure_eight_volume(root: XRoot) -> f64 {
    match root {
        XRoot::Minus => FIGURE_EIGHT_VOLUME,
        XRoot::Plus => -FIGURE_EIGHT_VOLUME,
    }
}

fn shadow(name: &str, root: XRoot) -> Result<ShadowColoring<num_complex::Complex64>> {
    Ok(exact_shadow(name)?.to_complex(root))
}

fn volume(name: &str, root: XRoot) -> Result<(ComplexVolume, f64)> {
    let r = complex_volume(&shadow(name, root)?, RESIDUAL_TOLERANCE)?;
    Ok((r.volume, r.max_residual))
}

fn reduced(d: &OrientedDiagram) -> Result<Presentation> {
    wirtinger(d).without_last_relator()
}

fn check_solution() -> Result<(bool, String)> {
    let w = solution_from_shadow(&exact_shadow(COMPOSITE)?)?;
    let shown: Vec<String> = w.iter().map(|x| x.to_string()).collect();
    Ok((same_multiset(&w, &expected_solution()), shown.join(", ")))
}

fn check_residuals() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for root in XRoot::both() {
        for name in NAMES {
            worst = worst.max(volume(name, root)?.1);
        }
    }
    Ok((worst < RESIDUAL_TOLERANCE, format!("max residual {worst:.3e}")))
}

fn check_volumes() -> Result<(bool, String)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for root in XRoot::both() {
        let (t, _) = volume(TREFOIL, root)?;
        let (f, _) = volume(FIGURE_EIGHT, root)?;
        ok &= (t.vol - TREFOIL_VOLUME.0).abs() < PRINTED_TOLERANCE
            && cs_distance(t.cs, TREFOIL_VOLUME.1) < PRINTED_TOLERANCE
            && (f.vol - figure_eight_volume(root)).abs() < PRINTED_TOLERANCE
            && cs_distance(f.cs, 0.0) < CS_ZERO_TOLERANCE;
        detail.push(format!(
            "x_root {}: 3_1 ({:.6}, {:.6}), 4_1 ({:.6}, {:.6})",
            root.sign(),
            t.vol,
            t.cs,
            f.vol,
            f.cs
        ));
    }
    Ok((ok, detail.join("; ")))
}

fn check_additivity() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for root in XRoot::both() {
        let (t, _) = volume(TREFOIL, root)?;
        let (f, _) = volume(FIGURE_EIGHT, root)?;
        let (c, _) = volume(COMPOSITE, root)?;
        worst = worst.max((c.vol - t.vol - f.vol).abs()).max(cs_distance(c.cs, t.cs + f.cs));
    }
    Ok((worst < ADDITIVITY_TOLERANCE, format!("max defect {worst:.3e}")))
}

fn delta(name: &str) -> Result<crate::alexander::AlexanderPolynomial<QOmega>> {
    let pres = reduced(&fixtures::builtin(name)?)?;
    let column = pres.generator_count() - 1;
    twisted_alexander(&pres, &exact_shadow(name)?.arcs, column, 0.0)
}

fn check_alexander() -> Result<(bool, String)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for name in NAMES {
        let exact = delta(name)?;
        ok &= exact.delta.equal_up_to_unit(&expected_delta(name), 0.0);
        for root in XRoot::both() {
            let pres = reduced(&fixtures::builtin(name)?)?;
            let lift = shadow(name, root)?.arcs;
            let float = twisted_alexander(&pres, &lift, pres.generator_count() - 1, COEFF_TOLERANCE)?;
            ok &= float.delta.equal_up_to_unit(&expected_delta(name).approx(), COEFF_TOLERANCE);
        }
        detail.push(format!("{name}: {}", exact.delta));
    }
    Ok((ok, detail.join("; ")))
}

fn check_product_formula() -> Result<(bool, String)> {
    let (t, f, c) = (delta(TREFOIL)?, delta(FIGURE_EIGHT)?, delta(COMPOSITE)?);
    let product = &(&LaurentPoly::one_minus_t_squared() * &t.delta) * &f.delta;
    let delta_ok = c.delta.equal_up_to_unit(&product, 0.0);
    let prime_ok = c.delta_prime.equal_up_to_unit(&(&t.delta_prime * &f.delta_prime), 0.0);
    Ok((delta_ok && prime_ok, format!("delta {delta_ok}, delta_prime {prime_ok}")))
}

fn check_denominators() -> Result<(bool, String)> {
    let mut count = 0;
    let mut ok = true;
    for name in NAMES {
        let lift = exact_shadow(name)?.arcs;
        let gens: Vec<ArcId> = (0..lift.colors().len()).collect();
        for j in 0..gens.len() {
            ok &= denominator(&lift, &gens, j)? == LaurentPoly::one_minus_t_squared();
            count += 1;
        }
    }
    Ok((ok, format!("{count} generators")))
}

/// Connected sum of the trefoil and figure-eight fixtures with conjugator `g`.
pub fn fixture_sum(g: Mat2<QOmega>) -> Result<ColoredSum<QOmega>> {
    let (arc1, arc2) = SPLICE_ARCS;
    let t = exact_shadow(TREFOIL)?;
    let f = exact_shadow(FIGURE_EIGHT)?;
    connected_sum_coloring(&t.arcs, arc1, &f.arcs, arc2, &Conjugator::Matrix(g), 0.0)
}

/// A non-canonical conjugator: the lift of `a₃ = (0, 1)`.
pub fn alternate_conjugator() -> Mat2<QOmega> {
    ParabolicVector::int((0, 0), (1, 0)).to_matrix()
}

fn check_alternate() -> Result<(bool, String)> {
    let sum = fixture_sum(alternate_conjugator())?;
    let c = sum.coloring.relabel_to_match(&fixtures::builtin(COMPOSITE)?)?;
    let expected = [(4, (1, 1), (1, 2)), (5, (0, 1), (0, 2)), (6, (0, 1), (0, 1))];
    let colors_ok = expected.iter().all(|&(arc, a, b)| c.color(arc).eq_up_to_sign(&ParabolicVector::int(a, b), 0.0));

    let identity = fixture_sum(Mat2::identity())?;
    let t = exact_shadow(TREFOIL)?;
    let mut volume_ok = true;
    for root in XRoot::both() {
        let a = complex_volume(
            &composite_shadow(&sum.coloring, &sum.record, &t, 0.0)?.to_complex(root),
            RESIDUAL_TOLERANCE,
        )?;
        let b = complex_volume(
            &composite_shadow(&identity.coloring, &identity.record, &t, 0.0)?.to_complex(root),
            RESIDUAL_TOLERANCE,
        )?;
        volume_ok &= a.residual_ok
            && (a.volume.vol - b.volume.vol).abs() < ADDITIVITY_TOLERANCE
            && cs_distance(a.volume.cs, b.volume.cs) < ADDITIVITY_TOLERANCE;
    }
    let prime = |s: &ColoredSum<QOmega>| -> Result<LaurentPoly<QOmega>> {
        let pres = reduced(s.coloring.diagram())?;
        Ok(twisted_alexander(&pres, &s.coloring, pres.generator_count() - 1, 0.0)?.delta_prime)
    };
    let alexander_ok = prime(&sum)?.equal_up_to_unit(&prime(&identity)?, 0.0);
    Ok((
        colors_ok && volume_ok && alexander_ok,
        format!("colors {colors_ok}, volume {volume_ok}, delta_prime {alexander_ok}"),
    ))
}

fn check_factor() -> Result<(bool, String)> {
    let sum = fixture_sum(Mat2::identity())?;
    let (l, r) = factor_coloring(&sum.coloring, &sum.record, 0.0)?;
    let ok = l == exact_shadow(TREFOIL)?.arcs && r == exact_shadow(FIGURE_EIGHT)?.arcs;
    Ok((ok, format!("left {}, right {}", l.colors().len(), r.colors().len())))
}

fn check_block_diagonal() -> Result<(bool, String)> {
    let record = fixtures::splice_record()?;
    let composite = fixtures::builtin(COMPOSITE)?;
    let (pres, connecting) = record.reduced_presentation(&composite);
    let m = alexander_matrix(&pres, &exact_shadow(COMPOSITE)?.arcs)?;
    let split = record.left.crossing_count() - 1;
    let blocks = m.vanishes_on(0..split, connecting + 1..pres.generator_count())
        && m.vanishes_on(split..m.relator_count(), 0..connecting);
    let det = det_laurent(&m.minor(connecting)?)?;
    let product = &delta(TREFOIL)?.delta_prime * &delta(FIGURE_EIGHT)?.delta_prime;
    let factors = det.equal_up_to_unit(&product, 0.0);
    Ok((blocks && factors, format!("block diagonal {blocks}, determinant factors {factors}")))
}

/// Run every check of the example.
pub fn run_checks() -> Vec<Check> {
    vec![
        Check::from("closed_form_solution", check_solution()),
        Check::from("hyperbolicity_residuals", check_residuals()),
        Check::from("complex_volumes", check_volumes()),
        Check::from("volume_additivity", check_additivity()),
        Check::from("twisted_alexander", check_alexander()),
        Check::from("product_formula", check_product_formula()),
        Check::from("denominators", check_denominators()),
        Check::from("alternate_conjugator", check_alternate()),
        Check::from("factor_roundtrip", check_factor()),
        Check::from("block_diagonal_presentation", check_block_diagonal()),
    ]
}
