//! Arc colorings, region colorings and shadow colorings, plus the
//! connected-sum construction on colorings and its inverse.
//!
//! Region rule: crossing an arc from its right side to its left side (with
//! respect to the knot orientation) acts by `* a_arc`. The same rule read
//! at a crossing gives the arc relation: at a positive crossing the
//! under-strand passes from the right of the over-arc to its left, so
//! `a_out = a_in * a_over`; at a negative one `a_in = a_out * a_over`.

use std::collections::VecDeque;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{connected_sum, ArcId, FaceId, OrientedDiagram, Side, Sign, SpliceRecord};
use crate::error::{Error, Result};
use crate::parabolic::{conjugators, det2, Mat2, ParabolicVector};
use crate::scalar::{QOmega, Scalar, XRoot};

/// Default tolerance for floating-point coloring checks.
pub const COLOR_TOLERANCE: f64 = 1e-9;

/// Seed of the pseudo-random stage of the shadow search.
pub const SHADOW_SEARCH_SEED: u64 = 0x5eed_c0de;

#[derive(Clone, Debug, PartialEq)]
pub struct ArcColoring<S> {
    diagram: OrientedDiagram,
    colors: Vec<ParabolicVector<S>>,
}

/// Outcome of checking the arc relation at every crossing.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcReport {
    /// Deviation from the relation (up to sign) at each crossing.
    pub defects: Vec<f64>,
    pub passed: Vec<bool>,
}

impl ArcReport {
    pub fn ok(&self) -> bool {
        self.passed.iter().all(|&p| p)
    }

    pub fn failing(&self) -> Vec<usize> {
        self.passed.iter().enumerate().filter(|(_, &p)| !p).map(|(i, _)| i).collect()
    }

    pub fn max_defect(&self) -> f64 {
        self.defects.iter().copied().fold(0.0, f64::max)
    }
}

impl<S: Scalar> ArcColoring<S> {
    /// Colors indexed by arc id. Does not check the crossing relations.
    pub fn new(diagram: OrientedDiagram, colors: Vec<ParabolicVector<S>>) -> Result<Self> {
        if colors.len() < diagram.arc_count() {
            return Err(Error::MissingArcColor(colors.len()));
        }
        if colors.len() > diagram.arc_count() {
            return Err(Error::InvalidArc(diagram.arc_count()));
        }
        if colors.iter().any(|c| c.alpha.is_zero() && c.beta.is_zero()) {
            return Err(Error::ZeroVector);
        }
        Ok(ArcColoring { diagram, colors })
    }

    pub fn diagram(&self) -> &OrientedDiagram {
        &self.diagram
    }

    pub fn colors(&self) -> &[ParabolicVector<S>] {
        &self.colors
    }

    pub fn color(&self, arc: ArcId) -> &ParabolicVector<S> {
        &self.colors[arc]
    }

    /// Deviation from the arc relation at crossing `i`, up to sign and
    /// relative to the size of the expected color.
    pub fn crossing_defect(&self, i: usize) -> f64 {
        let c = &self.diagram.crossings()[i];
        let over = &self.colors[c.over];
        let (from, to) = match c.sign {
            Sign::Positive => (c.under_in, c.under_out),
            Sign::Negative => (c.under_out, c.under_in),
        };
        let expected = self.colors[from].quandle_mul(over);
        let actual = &self.colors[to];
        if S::EXACT {
            if actual.eq_up_to_sign(&expected, 0.0) {
                0.0
            } else {
                actual.distance_up_to_sign(&expected).max(f64::MIN_POSITIVE)
            }
        } else {
            actual.distance_up_to_sign(&expected) / expected.norm().max(1.0)
        }
    }

    /// Check every crossing relation up to sign, exactly in exact fields and
    /// within `tol` otherwise.
    pub fn verify(&self, tol: f64) -> ArcReport {
        let defects: Vec<f64> = (0..self.diagram.crossing_count()).map(|i| self.crossing_defect(i)).collect();
        let passed = defects.iter().map(|&d| if S::EXACT { d == 0.0 } else { d <= tol }).collect();
        ArcReport { defects, passed }
    }

    fn require_valid(&self, tol: f64) -> Result<()> {
        let report = self.verify(tol);
        if report.ok() {
            Ok(())
        } else {
            Err(Error::BrokenArcColoring(report.failing()))
        }
    }

    /// Apply `g` to every color.
    pub fn transform(&self, g: &Mat2<S>) -> Self {
        ArcColoring { diagram: self.diagram.clone(), colors: self.colors.iter().map(|c| g.apply(c)).collect() }
    }

    /// Same colors on a diagram with renamed arcs: arc `a` becomes `arc_map[a]`.
    pub fn permuted(&self, diagram: OrientedDiagram, arc_map: &[ArcId]) -> Result<Self> {
        let mut colors = self.colors.clone();
        for (a, &b) in arc_map.iter().enumerate() {
            colors[b] = self.colors[a].clone();
        }
        ArcColoring::new(diagram, colors)
    }

    /// Carry the coloring over to a relabelled copy of its diagram that has
    /// crossing data `target` (crossing order fixed).
    pub fn relabel_to_match(&self, target: &OrientedDiagram) -> Result<Self> {
        let relabelled = self.diagram.relabel_to_match(target.crossings())?;
        let mut arc_map = vec![0; self.diagram.arc_count()];
        for (c, t) in self.diagram.crossings().iter().zip(relabelled.crossings()) {
            arc_map[c.under_out] = t.under_out;
        }
        self.permuted(relabelled, &arc_map)
    }

    pub fn approx(&self) -> ArcColoring<Complex64> {
        ArcColoring { diagram: self.diagram.clone(), colors: self.colors.iter().map(|c| c.approx()).collect() }
    }
}

impl ArcColoring<QOmega> {
    pub fn to_complex(&self, root: XRoot) -> ArcColoring<Complex64> {
        ArcColoring { diagram: self.diagram.clone(), colors: self.colors.iter().map(|c| c.to_complex(root)).collect() }
    }
}

/// One side-crossing of an arc: moving from face `right` to face `left`
/// across arc `arc` multiplies by `* a_arc`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Adjacency {
    arc: ArcId,
    right: FaceId,
    left: FaceId,
}

fn adjacencies(d: &OrientedDiagram) -> Vec<Adjacency> {
    d.crossings()
        .iter()
        .flat_map(|c| c.strand_sides())
        .map(|s| Adjacency { arc: s.arc, right: s.right, left: s.left })
        .collect()
}

fn region_deviation<S: Scalar>(actual: &ParabolicVector<S>, expected: &ParabolicVector<S>) -> f64 {
    if S::EXACT {
        if actual.eq_up_to_sign(expected, 0.0) {
            0.0
        } else {
            actual.distance_up_to_sign(expected).max(f64::MIN_POSITIVE)
        }
    } else {
        actual.distance_up_to_sign(expected) / expected.norm().max(1.0)
    }
}

fn region_ok<S: Scalar>(deviation: f64, tol: f64) -> bool {
    if S::EXACT {
        deviation == 0.0
    } else {
        deviation <= tol
    }
}

/// Check the region rule across every arc side.
pub fn check_region_rule<S: Scalar>(c: &ArcColoring<S>, regions: &[ParabolicVector<S>], tol: f64) -> Result<()> {
    let d = c.diagram();
    if regions.len() != d.face_count() {
        return Err(Error::MissingFaceValue(regions.len().min(d.face_count())));
    }
    for adj in adjacencies(d) {
        let expected = regions[adj.right].quandle_mul(c.color(adj.arc));
        let dev = region_deviation(&regions[adj.left], &expected);
        if !region_ok::<S>(dev, tol) {
            return Err(Error::InconsistentRegionColoring { face: adj.left, deviation: dev });
        }
    }
    Ok(())
}

/// Propagate `seed_color` on `seed_face` to all faces, checking every face
/// reached along more than one path.
pub fn region_coloring<S: Scalar>(
    c: &ArcColoring<S>,
    seed_face: FaceId,
    seed_color: &ParabolicVector<S>,
    tol: f64,
) -> Result<Vec<ParabolicVector<S>>> {
    let d = c.diagram();
    if seed_face >= d.face_count() {
        return Err(Error::InvalidFace(seed_face));
    }
    if seed_color.alpha.is_zero() && seed_color.beta.is_zero() {
        return Err(Error::ZeroVector);
    }
    let adj = adjacencies(d);
    let mut colors: Vec<Option<ParabolicVector<S>>> = vec![None; d.face_count()];
    colors[seed_face] = Some(seed_color.clone());
    let mut queue = VecDeque::from([seed_face]);
    while let Some(f) = queue.pop_front() {
        let here = colors[f].clone().expect("queued faces are colored");
        for a in &adj {
            let (next, value) = if a.right == f {
                (a.left, here.quandle_mul(c.color(a.arc)))
            } else if a.left == f {
                (a.right, here.quandle_div(c.color(a.arc)))
            } else {
                continue;
            };
            match &colors[next] {
                Some(existing) => {
                    let dev = region_deviation(existing, &value);
                    if !region_ok::<S>(dev, tol) {
                        return Err(Error::InconsistentRegionColoring { face: next, deviation: dev });
                    }
                }
                None => {
                    colors[next] = Some(value);
                    queue.push_back(next);
                }
            }
        }
    }
    colors.into_iter().enumerate().map(|(f, c)| c.ok_or(Error::MissingFaceValue(f))).collect()
}

/// Arc coloring, region coloring and the auxiliary vector `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShadowColoring<S> {
    pub arcs: ArcColoring<S>,
    pub regions: Vec<ParabolicVector<S>>,
    pub p: ParabolicVector<S>,
}

impl<S: Scalar> ShadowColoring<S> {
    /// Assemble and check the arc relations and the region rule.
    pub fn new(
        arcs: ArcColoring<S>,
        regions: Vec<ParabolicVector<S>>,
        p: ParabolicVector<S>,
        tol: f64,
    ) -> Result<Self> {
        arcs.require_valid(tol)?;
        check_region_rule(&arcs, &regions, tol)?;
        Ok(ShadowColoring { arcs, regions, p })
    }

    pub fn diagram(&self) -> &OrientedDiagram {
        self.arcs.diagram()
    }

    /// Arc sides where the three Hopf images `h(a)`, `h(s)`, `h(s * a)` are
    /// not pairwise distinct, as `(arc, face on its right)`.
    pub fn genericity_failures(&self) -> Vec<(ArcId, FaceId)> {
        let mut out = Vec::new();
        for a in adjacencies(self.diagram()) {
            if !generic_triple(self.arcs.color(a.arc), &self.regions[a.right], &self.regions[a.left]) {
                out.push((a.arc, a.right));
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_generic(&self) -> bool {
        self.genericity_failures().is_empty()
    }

    /// `h(p)` differs from every arc and region Hopf image.
    pub fn p_condition(&self) -> bool {
        p_admissible(&self.p, self.arcs.colors(), &self.regions)
    }

    pub fn approx(&self) -> ShadowColoring<Complex64> {
        ShadowColoring {
            arcs: self.arcs.approx(),
            regions: self.regions.iter().map(|r| r.approx()).collect(),
            p: self.p.approx(),
        }
    }
}

impl ShadowColoring<QOmega> {
    pub fn to_complex(&self, root: XRoot) -> ShadowColoring<Complex64> {
        ShadowColoring {
            arcs: self.arcs.to_complex(root),
            regions: self.regions.iter().map(|r| r.to_complex(root)).collect(),
            p: self.p.to_complex(root),
        }
    }
}

fn generic_triple<S: Scalar>(a: &ParabolicVector<S>, s: &ParabolicVector<S>, sa: &ParabolicVector<S>) -> bool {
    a.hopf_distinct(s) && s.hopf_distinct(sa) && sa.hopf_distinct(a)
}

fn p_admissible<S: Scalar>(
    p: &ParabolicVector<S>,
    arcs: &[ParabolicVector<S>],
    regions: &[ParabolicVector<S>],
) -> bool {
    arcs.iter().chain(regions).all(|v| p.hopf_distinct(v))
}

/// Search parameters for [`find_generic_shadow`].
#[derive(Clone, Debug)]
pub struct ShadowSearch<S> {
    pub seed_face: FaceId,
    /// Tried before the enumeration.
    pub preferred_seed: Option<ParabolicVector<S>>,
    /// Tried before the enumeration.
    pub preferred_p: Option<ParabolicVector<S>>,
    /// Largest `|u|, |v|` of the integer stage.
    pub integer_radius: i64,
    /// Number of pseudo-random candidates after the integer stage (floating
    /// fields only).
    pub random_budget: usize,
    pub tol: f64,
}

impl<S> Default for ShadowSearch<S> {
    fn default() -> Self {
        ShadowSearch {
            seed_face: 0,
            preferred_seed: None,
            preferred_p: None,
            integer_radius: 10,
            random_budget: 10_000,
            tol: COLOR_TOLERANCE,
        }
    }
}

/// Integer vectors `(u, v)` with `max(|u|, |v|) ≤ radius`, ring by ring,
/// each ring walked counterclockwise starting on the positive `u` axis.
pub fn integer_spiral(radius: i64) -> impl Iterator<Item = (i64, i64)> {
    (1..=radius).flat_map(|r| {
        let right = (0..=r).map(move |k| (r, k));
        let top = (-r..r).rev().map(move |k| (k, r));
        let left = (-r..r).rev().map(move |k| (-r, k));
        let bottom = (-r + 1..=r).map(move |k| (k, -r));
        let back = (-r + 1..0).map(move |k| (r, k));
        right.chain(top).chain(left).chain(bottom).chain(back)
    })
}

fn candidates<S: Scalar>(
    preferred: Option<ParabolicVector<S>>,
    radius: i64,
    random_budget: usize,
) -> impl Iterator<Item = ParabolicVector<S>> {
    let ints = integer_spiral(radius).map(|(u, v)| ParabolicVector { alpha: S::from_i64(u), beta: S::from_i64(v) });
    let mut rng = ChaCha8Rng::seed_from_u64(SHADOW_SEARCH_SEED);
    let budget = if S::from_complex(Complex64::new(0.0, 0.0)).is_some() { random_budget } else { 0 };
    let random = (0..budget).filter_map(move |_| {
        let mut g = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (a, b) = (g(), g());
        Some(ParabolicVector { alpha: S::from_complex(a)?, beta: S::from_complex(b)? })
    });
    preferred.into_iter().chain(ints).chain(random)
}

/// A shadow coloring extending `c` whose region colors satisfy the
/// genericity condition on every arc, with an admissible `p`. The first
/// candidate in enumeration order is taken, so the result is deterministic.
pub fn find_generic_shadow<S: Scalar>(c: &ArcColoring<S>, search: &ShadowSearch<S>) -> Result<ShadowColoring<S>> {
    c.require_valid(search.tol)?;
    if search.seed_face >= c.diagram().face_count() {
        return Err(Error::InvalidFace(search.seed_face));
    }
    for seed in candidates(search.preferred_seed.clone(), search.integer_radius, search.random_budget) {
        let regions = region_coloring(c, search.seed_face, &seed, search.tol)?;
        let shadow = ShadowColoring { arcs: c.clone(), regions, p: seed.clone() };
        if !shadow.is_generic() {
            continue;
        }
        for p in candidates(search.preferred_p.clone(), search.integer_radius, search.random_budget) {
            if p_admissible(&p, c.colors(), &shadow.regions) {
                return Ok(ShadowColoring { p, ..shadow });
            }
        }
    }
    Err(Error::SearchExhausted)
}

/// How the second coloring is moved onto the first before splicing.
#[derive(Clone, Debug, PartialEq)]
pub enum Conjugator<S> {
    /// The canonical member of the conjugator family.
    Canonical,
    Matrix(Mat2<S>),
}

/// Result of [`connected_sum_coloring`].
#[derive(Clone, Debug)]
pub struct ColoredSum<S> {
    pub coloring: ArcColoring<S>,
    pub record: SpliceRecord,
    /// The conjugator actually applied to the second coloring.
    pub conjugator: Mat2<S>,
}

/// Connected sum of two colorings: `c2` is moved by the conjugator so that
/// its color on `arc2` agrees (up to sign) with the color of `arc1` in `c1`,
/// then the diagrams are spliced at those arcs.
///
/// Different conjugators can give colorings that are not conjugate to each
/// other, so this is a construction, not an invariant of `(c1, c2)`.
pub fn connected_sum_coloring<S: Scalar>(
    c1: &ArcColoring<S>,
    arc1: ArcId,
    c2: &ArcColoring<S>,
    arc2: ArcId,
    conjugator: &Conjugator<S>,
    tol: f64,
) -> Result<ColoredSum<S>> {
    c1.diagram().check_arc(arc1)?;
    c2.diagram().check_arc(arc2)?;
    c1.require_valid(tol)?;
    c2.require_valid(tol)?;
    let g = match conjugator {
        Conjugator::Canonical => conjugators(c1.color(arc1), c2.color(arc2))?.canonical,
        Conjugator::Matrix(g) => g.clone(),
    };
    let det = g.det();
    let unimodular = if S::EXACT { det == S::one() } else { (det.clone() - S::one()).magnitude() <= tol };
    if !unimodular {
        return Err(Error::ConjugatorNotUnimodular(format!("{det:?}")));
    }
    let moved = c2.transform(&g);
    if !moved.color(arc2).eq_up_to_sign(c1.color(arc1), tol) {
        return Err(Error::ConjugatorMismatch { arc1, arc2 });
    }

    let (composite, record) = connected_sum(c1.diagram(), arc1, c2.diagram(), arc2)?;
    let mut colors: Vec<Option<ParabolicVector<S>>> = vec![None; composite.arc_count()];
    for (a, m) in record.arc_map(&composite, Side::Left).into_iter().enumerate() {
        colors[m] = Some(c1.color(a).clone());
    }
    for (a, m) in record.arc_map(&composite, Side::Right).into_iter().enumerate() {
        colors[m] = Some(moved.color(a).clone());
    }
    let colors =
        colors.into_iter().enumerate().map(|(a, c)| c.ok_or(Error::MissingArcColor(a))).collect::<Result<Vec<_>>>()?;
    let coloring = ArcColoring::new(composite, colors)?;
    coloring.require_valid(tol)?;
    Ok(ColoredSum { coloring, record, conjugator: g })
}

/// Restrict a coloring of a composite diagram to the two summands recorded
/// in `record`. The two connecting arcs must carry the same color up to sign.
pub fn factor_coloring<S: Scalar>(
    c: &ArcColoring<S>,
    record: &SpliceRecord,
    tol: f64,
) -> Result<(ArcColoring<S>, ArcColoring<S>)> {
    let composite = c.diagram();
    record.check(composite)?;
    let (al, al_prime) = record.connecting_arcs(composite);
    if !c.color(al).eq_up_to_sign(c.color(al_prime), tol) {
        return Err(Error::ConnectingArcsDisagree(al, al_prime));
    }
    let restrict = |side: Side| -> Result<ArcColoring<S>> {
        let colors = record.arc_map(composite, side).into_iter().map(|m| c.color(m).clone()).collect();
        let part = ArcColoring::new(record.summand(side).clone(), colors)?;
        part.require_valid(tol)?;
        Ok(part)
    };
    Ok((restrict(Side::Left)?, restrict(Side::Right)?))
}

/// Region colors of a summand read off from the composite shadow coloring.
pub fn restrict_regions<S: Scalar>(
    composite: &OrientedDiagram,
    regions: &[ParabolicVector<S>],
    record: &SpliceRecord,
    side: Side,
) -> Vec<ParabolicVector<S>> {
    record.face_map(composite, side).into_iter().map(|f| regions[f].clone()).collect()
}

/// Shadow coloring of a composite that keeps the region colors and `p` of
/// the left summand's shadow where possible: the search starts from the
/// left shadow's first region color and its `p`.
pub fn composite_shadow<S: Scalar>(
    composite: &ArcColoring<S>,
    record: &SpliceRecord,
    left: &ShadowColoring<S>,
    tol: f64,
) -> Result<ShadowColoring<S>> {
    let faces = record.face_map(composite.diagram(), Side::Left);
    let search = ShadowSearch {
        seed_face: faces[0],
        preferred_seed: Some(left.regions[0].clone()),
        preferred_p: Some(left.p.clone()),
        tol,
        ..ShadowSearch::default()
    };
    find_generic_shadow(composite, &search)
}

/// `det(p, v)` over a list of vectors.
pub fn determinants<S: Scalar>(p: &ParabolicVector<S>, vs: &[ParabolicVector<S>]) -> Vec<S> {
    vs.iter().map(|v| det2(p, v)).collect()
}
