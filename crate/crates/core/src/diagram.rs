//! Oriented knot diagrams.
//!
//! A diagram is built from a PD code: one tuple `X(a,b,c,d)` per crossing,
//! listing edge labels counterclockwise starting at the incoming
//! under-edge `a` (so `c` is the outgoing under-edge and `b`, `d` carry
//! the over-strand). Orientation of the over-strand, crossing signs, arcs
//! and faces are all recovered from that data.
//!
//! Each crossing also records its four incident faces ("quadrants") in the
//! potential-function convention: `a` is the region between the two
//! outgoing strand ends, then `b`, `c`, `d` counterclockwise.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alexander::word::GroupWord;
use crate::error::{Error, Result};

pub type ArcId = usize;
pub type FaceId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quadrant {
    A,
    B,
    C,
    D,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::A, Quadrant::B, Quadrant::C, Quadrant::D];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// The four strand ends meeting at a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StrandEnd {
    UnderIn,
    OverIn,
    UnderOut,
    OverOut,
}

impl StrandEnd {
    pub fn is_incoming(self) -> bool {
        matches!(self, StrandEnd::UnderIn | StrandEnd::OverIn)
    }
}

// Counterclockwise slot layout starting at the under-in slot, and the
// quadrant found in the corner between slot i and slot i+1.
const POSITIVE_SLOTS: [StrandEnd; 4] = [StrandEnd::UnderIn, StrandEnd::OverOut, StrandEnd::UnderOut, StrandEnd::OverIn];
const NEGATIVE_SLOTS: [StrandEnd; 4] = [StrandEnd::UnderIn, StrandEnd::OverIn, StrandEnd::UnderOut, StrandEnd::OverOut];
const POSITIVE_CORNERS: [Quadrant; 4] = [Quadrant::D, Quadrant::A, Quadrant::B, Quadrant::C];
const NEGATIVE_CORNERS: [Quadrant; 4] = [Quadrant::C, Quadrant::D, Quadrant::A, Quadrant::B];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub sign: Sign,
    pub over: ArcId,
    pub under_in: ArcId,
    pub under_out: ArcId,
    /// Incident faces indexed by [`Quadrant`].
    pub quadrants: [FaceId; 4],
}

/// A strand end at a crossing together with the faces on its two sides
/// (relative to the knot orientation).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrandSide {
    pub end: StrandEnd,
    pub arc: ArcId,
    pub right: FaceId,
    pub left: FaceId,
}

impl Crossing {
    pub fn slot_ends(&self) -> [StrandEnd; 4] {
        match self.sign {
            Sign::Positive => POSITIVE_SLOTS,
            Sign::Negative => NEGATIVE_SLOTS,
        }
    }

    pub fn corner_quadrants(&self) -> [Quadrant; 4] {
        match self.sign {
            Sign::Positive => POSITIVE_CORNERS,
            Sign::Negative => NEGATIVE_CORNERS,
        }
    }

    pub fn face(&self, q: Quadrant) -> FaceId {
        self.quadrants[q.index()]
    }

    pub fn arc_at(&self, end: StrandEnd) -> ArcId {
        match end {
            StrandEnd::UnderIn => self.under_in,
            StrandEnd::UnderOut => self.under_out,
            StrandEnd::OverIn | StrandEnd::OverOut => self.over,
        }
    }

    /// Sides of each of the four strand ends, in slot order.
    pub fn strand_sides(&self) -> [StrandSide; 4] {
        let ends = self.slot_ends();
        let corners = self.corner_quadrants();
        std::array::from_fn(|i| {
            let before = self.face(corners[(i + 3) % 4]);
            let after = self.face(corners[i]);
            let end = ends[i];
            // An outgoing ray has its right side clockwise of it, i.e. in
            // the corner before the slot; an incoming one the reverse.
            let (right, left) = if end.is_incoming() { (after, before) } else { (before, after) };
            StrandSide { end, arc: self.arc_at(end), right, left }
        })
    }
}

/// One corner of a face: the quadrant `quadrant` of crossing `crossing`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Corner {
    pub crossing: usize,
    pub quadrant: Quadrant,
}

/// A face, as the list of crossing corners around it. A face can visit the
/// same crossing more than once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub corners: Vec<Corner>,
}

/// A directed edge of the diagram between two consecutive crossings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub label: i64,
    /// `(crossing, slot)` the edge leaves from.
    pub tail: (usize, usize),
    /// `(crossing, slot)` the edge arrives at.
    pub head: (usize, usize),
    pub arc: ArcId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedDiagram {
    crossings: Vec<Crossing>,
    faces: Vec<Face>,
    pd: Option<Vec<[i64; 4]>>,
}

/// Everything recovered from a PD code before face tracing.
struct Traced {
    signs: Vec<Sign>,
    /// Edges in knot order, starting with the under-out edge of crossing 0.
    edges: Vec<Edge>,
    over: Vec<ArcId>,
    under_in: Vec<ArcId>,
    under_out: Vec<ArcId>,
}

type Occurrences = HashMap<i64, Vec<(usize, usize)>>;

fn occurrences(pd: &[[i64; 4]]) -> Result<Occurrences> {
    let mut occ: Occurrences = HashMap::new();
    for (c, tuple) in pd.iter().enumerate() {
        for (s, &label) in tuple.iter().enumerate() {
            occ.entry(label).or_default().push((c, s));
        }
    }
    let mut labels: Vec<_> = occ.iter().filter(|(_, v)| v.len() != 2).map(|(&l, v)| (l, v.len())).collect();
    labels.sort();
    if let Some(&(label, count)) = labels.first() {
        return Err(Error::EdgeMultiplicity { label, count });
    }
    Ok(occ)
}

fn other_end(occ: &Occurrences, label: i64, here: (usize, usize)) -> (usize, usize) {
    let o = &occ[&label];
    if o[0] == here {
        o[1]
    } else {
        o[0]
    }
}

fn trace(pd: &[[i64; 4]]) -> Result<Traced> {
    let n = pd.len();
    if n == 0 {
        return Err(Error::NoCrossings);
    }
    let occ = occurrences(pd)?;

    let mut over_entry: Vec<Option<usize>> = vec![None; n];
    let mut under_seen = vec![false; n];
    let mut edges = Vec::with_capacity(2 * n);
    let start = (0usize, 2usize);
    let mut exit = start;
    loop {
        let label = pd[exit.0][exit.1];
        let entry = other_end(&occ, label, exit);
        let next_slot = match entry.1 {
            0 => 2,
            1 => 3,
            3 => 1,
            _ => {
                return Err(Error::Orientation(format!(
                    "edge {label} runs into the outgoing under-slot of crossing {}",
                    entry.0 + 1
                )))
            }
        };
        if entry.1 == 0 {
            if under_seen[entry.0] {
                return Err(Error::Orientation(format!("crossing {} entered twice from below", entry.0 + 1)));
            }
            under_seen[entry.0] = true;
        } else {
            if over_entry[entry.0].is_some() {
                return Err(Error::Orientation(format!("crossing {} entered twice from above", entry.0 + 1)));
            }
            over_entry[entry.0] = Some(entry.1);
        }
        edges.push(Edge { label, tail: exit, head: entry, arc: 0 });
        exit = (entry.0, next_slot);
        if exit == start {
            break;
        }
        if edges.len() > 2 * n {
            return Err(Error::Orientation("traversal does not close up".into()));
        }
    }
    if edges.len() != 2 * n {
        return Err(Error::MultiComponent);
    }

    let signs: Vec<Sign> = over_entry
        .iter()
        .map(|e| match e {
            // over-strand enters at d and leaves at b
            Some(3) => Sign::Positive,
            _ => Sign::Negative,
        })
        .collect();

    let mut arc = 0;
    let mut over = vec![0; n];
    let mut under_in = vec![0; n];
    let mut under_out = vec![0; n];
    for e in edges.iter_mut() {
        e.arc = arc;
        if e.tail.1 == 2 {
            under_out[e.tail.0] = arc;
        }
        if e.head.1 == 0 {
            under_in[e.head.0] = arc;
            arc += 1;
        } else {
            over[e.head.0] = arc;
        }
    }
    debug_assert_eq!(arc, n);

    Ok(Traced { signs, edges, over, under_in, under_out })
}

fn parse_tuples(text: &str) -> Result<Vec<[i64; 4]>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    loop {
        while let Some(&(_, ch)) = chars.peek() {
            if ch.is_whitespace() || ch == ',' {
                chars.next();
            } else {
                break;
            }
        }
        let Some((pos, ch)) = chars.next() else { break };
        if ch != 'X' {
            return Err(Error::MalformedPd(format!("expected 'X' at byte {pos}, found {ch:?}")));
        }
        let close = match chars.next() {
            Some((_, '(')) => ')',
            Some((_, '[')) => ']',
            other => {
                return Err(Error::MalformedPd(format!(
                    "expected '(' after 'X' at byte {pos}, found {:?}",
                    other.map(|(_, c)| c)
                )))
            }
        };
        let mut body = String::new();
        let mut closed = false;
        for (_, ch) in chars.by_ref() {
            if ch == close {
                closed = true;
                break;
            }
            body.push(ch);
        }
        if !closed {
            return Err(Error::MalformedPd(format!("unterminated tuple starting at byte {pos}")));
        }
        let entries: Vec<i64> =
            body.split(',').map(|s| s.trim().parse::<i64>()).collect::<std::result::Result<_, _>>().map_err(|e| {
                Error::MalformedPd(format!(
                    "bad edge label in X{}{body}{close}: {e}",
                    if close == ')' { '(' } else { '[' }
                ))
            })?;
        if entries.len() != 4 {
            return Err(Error::MalformedPd(format!(
                "crossing {} has {} entries (expected 4)",
                out.len() + 1,
                entries.len()
            )));
        }
        out.push([entries[0], entries[1], entries[2], entries[3]]);
    }
    Ok(out)
}

/// Parse a PD code such as `"X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"`.
pub fn parse_pd(text: &str) -> Result<OrientedDiagram> {
    OrientedDiagram::from_pd(parse_tuples(text)?)
}

impl OrientedDiagram {
    pub fn from_pd(pd: Vec<[i64; 4]>) -> Result<OrientedDiagram> {
        let t = trace(&pd)?;
        let n = pd.len();
        let occ = occurrences(&pd)?;

        let corners_of = |c: usize| match t.signs[c] {
            Sign::Positive => POSITIVE_CORNERS,
            Sign::Negative => NEGATIVE_CORNERS,
        };

        // Corner (c, i) sits between slots i and i+1. Walking along the edge
        // in slot i+1 keeps the face on the walker's right; at the far end
        // the same face is the corner just counterclockwise of that edge.
        let mut face_of = vec![[usize::MAX; 4]; n];
        let mut faces = Vec::new();
        for c0 in 0..n {
            for i0 in 0..4 {
                if face_of[c0][i0] != usize::MAX {
                    continue;
                }
                let id = faces.len();
                let mut corners = Vec::new();
                let (mut c, mut i) = (c0, i0);
                while face_of[c][i] == usize::MAX {
                    face_of[c][i] = id;
                    corners.push(Corner { crossing: c, quadrant: corners_of(c)[i] });
                    let slot = (i + 1) % 4;
                    let (c2, j) = other_end(&occ, pd[c][slot], (c, slot));
                    c = c2;
                    i = j;
                }
                if face_of[c][i] != id {
                    return Err(Error::InvalidDiagram("face tracing did not close up".into()));
                }
                faces.push(Face { corners });
            }
        }
        if faces.len() != n + 2 {
            return Err(Error::NonPlanar { faces: faces.len(), crossings: n });
        }

        let crossings = (0..n)
            .map(|c| {
                let mut quadrants = [0; 4];
                for (i, q) in corners_of(c).iter().enumerate() {
                    quadrants[q.index()] = face_of[c][i];
                }
                Crossing {
                    sign: t.signs[c],
                    over: t.over[c],
                    under_in: t.under_in[c],
                    under_out: t.under_out[c],
                    quadrants,
                }
            })
            .collect();

        Ok(OrientedDiagram { crossings, faces, pd: Some(pd) })
    }

    /// Build from crossing data alone (no edge labels). Validates arc
    /// incidences and the face count.
    pub fn from_crossings(crossings: Vec<Crossing>, face_count: usize) -> Result<OrientedDiagram> {
        let n = crossings.len();
        if n == 0 {
            return Err(Error::NoCrossings);
        }
        if face_count != n + 2 {
            return Err(Error::NonPlanar { faces: face_count, crossings: n });
        }
        let mut starts = vec![0usize; n];
        let mut ends = vec![0usize; n];
        for (i, c) in crossings.iter().enumerate() {
            for a in [c.over, c.under_in, c.under_out] {
                if a >= n {
                    return Err(Error::InvalidDiagram(format!("crossing {i} references arc {a} (only {n} arcs)")));
                }
            }
            if let Some(&f) = c.quadrants.iter().find(|&&f| f >= face_count) {
                return Err(Error::InvalidDiagram(format!("crossing {i} references face {f}")));
            }
            starts[c.under_out] += 1;
            ends[c.under_in] += 1;
        }
        if starts.iter().chain(ends.iter()).any(|&k| k != 1) {
            return Err(Error::InvalidDiagram("every arc must start and end exactly once".into()));
        }
        let mut faces = vec![Face { corners: Vec::new() }; face_count];
        for (i, c) in crossings.iter().enumerate() {
            for q in Quadrant::ALL {
                faces[c.face(q)].corners.push(Corner { crossing: i, quadrant: q });
            }
        }
        if let Some(f) = faces.iter().position(|f| f.corners.is_empty()) {
            return Err(Error::InvalidDiagram(format!("face {f} touches no crossing")));
        }
        Ok(OrientedDiagram { crossings, faces, pd: None })
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edge_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub fn pd(&self) -> Option<&[[i64; 4]]> {
        self.pd.as_deref()
    }

    pub fn writhe(&self) -> i32 {
        self.crossings.iter().map(|c| c.sign.value()).sum()
    }

    pub fn check_arc(&self, arc: ArcId) -> Result<()> {
        if arc < self.arc_count() {
            Ok(())
        } else {
            Err(Error::InvalidArc(arc))
        }
    }

    /// Edges in knot order, starting at the under-out edge of crossing 0.
    pub fn edges(&self) -> Result<Vec<Edge>> {
        let pd = self.pd.as_ref().ok_or(Error::MissingEdgeData)?;
        let t = trace(pd)?;
        // arc numbering of `self` may have been relabelled; translate
        // through the under-out arcs, which identify arcs uniquely
        let mut edges = t.edges;
        let mut arc_map = vec![0; self.arc_count()];
        for (c, &a) in t.under_out.iter().enumerate() {
            arc_map[a] = self.crossings[c].under_out;
        }
        for e in edges.iter_mut() {
            e.arc = arc_map[e.arc];
        }
        Ok(edges)
    }

    /// Index of the crossing where `arc` starts (its under-out crossing).
    pub fn arc_start(&self, arc: ArcId) -> Result<usize> {
        self.crossings.iter().position(|c| c.under_out == arc).ok_or(Error::InvalidArc(arc))
    }

    /// Rename arcs and faces: arc `a` becomes `arc_map[a]`, face `f`
    /// becomes `face_map[f]`. Both maps must be permutations.
    pub fn relabel(&self, arc_map: &[ArcId], face_map: &[FaceId]) -> Result<OrientedDiagram> {
        if !is_permutation(arc_map, self.arc_count()) || !is_permutation(face_map, self.face_count()) {
            return Err(Error::InvalidDiagram("relabelling maps must be permutations".into()));
        }
        let crossings = self
            .crossings
            .iter()
            .map(|c| Crossing {
                sign: c.sign,
                over: arc_map[c.over],
                under_in: arc_map[c.under_in],
                under_out: arc_map[c.under_out],
                quadrants: c.quadrants.map(|f| face_map[f]),
            })
            .collect();
        let mut faces = vec![Face { corners: Vec::new() }; self.face_count()];
        for (f, face) in self.faces.iter().enumerate() {
            faces[face_map[f]] = face.clone();
        }
        Ok(OrientedDiagram { crossings, faces, pd: self.pd.clone() })
    }

    /// Find the arc and face relabelling (keeping crossing order) that turns
    /// `self` into a diagram with exactly the crossing data `target`, and
    /// apply it. Fails if no such relabelling exists.
    pub fn relabel_to_match(&self, target: &[Crossing]) -> Result<OrientedDiagram> {
        let (arc_map, face_map) = self.matching_maps(target)?;
        self.relabel(&arc_map, &face_map)
    }

    fn matching_maps(&self, target: &[Crossing]) -> Result<(Vec<ArcId>, Vec<FaceId>)> {
        if target.len() != self.crossing_count() {
            return Err(Error::InvalidDiagram(format!(
                "crossing count {} does not match {}",
                target.len(),
                self.crossing_count()
            )));
        }
        let mut arc_map = vec![usize::MAX; self.arc_count()];
        let mut face_map = vec![usize::MAX; self.face_count()];
        fn assign(map: &mut [usize], from: usize, to: usize, what: &str, at: usize) -> Result<()> {
            if to >= map.len() {
                return Err(Error::InvalidDiagram(format!("{what} {to} out of range at crossing {at}")));
            }
            if map[from] != usize::MAX && map[from] != to {
                return Err(Error::InvalidDiagram(format!("{what} labels disagree at crossing {at}")));
            }
            map[from] = to;
            Ok(())
        }
        for (i, (c, t)) in self.crossings.iter().zip(target).enumerate() {
            if c.sign != t.sign {
                return Err(Error::InvalidDiagram(format!("sign differs at crossing {i}")));
            }
            assign(&mut arc_map, c.over, t.over, "arc", i)?;
            assign(&mut arc_map, c.under_in, t.under_in, "arc", i)?;
            assign(&mut arc_map, c.under_out, t.under_out, "arc", i)?;
            for q in Quadrant::ALL {
                assign(&mut face_map, c.face(q), t.face(q), "face", i)?;
            }
        }
        if !is_permutation(&arc_map, self.arc_count()) || !is_permutation(&face_map, self.face_count()) {
            return Err(Error::InvalidDiagram("crossing data induces no bijection of arcs and faces".into()));
        }
        Ok((arc_map, face_map))
    }

    /// Same diagram up to renaming of arcs and faces (crossing order fixed).
    pub fn is_relabelling_of(&self, other: &OrientedDiagram) -> bool {
        self.matching_maps(&other.crossings).is_ok()
    }

    /// Copy of the PD code with edges renumbered `1..2n` in knot order.
    pub fn canonical_pd(&self) -> Result<Vec<[i64; 4]>> {
        let pd = self.pd.as_ref().ok_or(Error::MissingEdgeData)?;
        renumber_pd(pd)
    }
}

fn is_permutation(map: &[usize], n: usize) -> bool {
    if map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &m in map {
        if m >= n || seen[m] {
            return false;
        }
        seen[m] = true;
    }
    true
}

fn renumber_pd(pd: &[[i64; 4]]) -> Result<Vec<[i64; 4]>> {
    let t = trace(pd)?;
    let mut out = pd.to_vec();
    for (k, e) in t.edges.iter().enumerate() {
        let label = k as i64 + 1;
        out[e.tail.0][e.tail.1] = label;
        out[e.head.0][e.head.1] = label;
    }
    Ok(out)
}

impl fmt::Display for OrientedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "diagram: {} crossings, {} arcs, {} faces, writhe {}",
            self.crossing_count(),
            self.arc_count(),
            self.face_count(),
            self.writhe()
        )
    }
}

// ---------------------------------------------------------------------------
// Wirtinger presentation

/// Group presentation whose generator `i` is the meridian of arc `generators[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<ArcId>,
    pub relators: Vec<GroupWord>,
}

impl Presentation {
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_of_arc(&self, arc: ArcId) -> Option<usize> {
        self.generators.iter().position(|&a| a == arc)
    }

    /// Drop relator `k`.
    pub fn without_relator(&self, k: usize) -> Result<Presentation> {
        if k >= self.relators.len() {
            return Err(Error::DimensionMismatch(format!("no relator {k}")));
        }
        let mut relators = self.relators.clone();
        relators.remove(k);
        Ok(Presentation { generators: self.generators.clone(), relators })
    }

    /// Drop the last relator, the usual redundant one.
    pub fn without_last_relator(&self) -> Result<Presentation> {
        self.without_relator(self.relators.len().saturating_sub(1))
    }
}

/// Relator `α_over α_m α_over⁻¹ α_n⁻¹` of a crossing, encoding
/// `a_n = a_m * a_over`. At a positive crossing the under-strand passes from
/// the right of the over-arc to its left, so `m` is the incoming arc.
pub fn crossing_relator(c: &Crossing) -> GroupWord {
    let (m, n) = match c.sign {
        Sign::Positive => (c.under_in, c.under_out),
        Sign::Negative => (c.under_out, c.under_in),
    };
    GroupWord::from_letters([(c.over, 1), (m, 1), (c.over, -1), (n, -1)])
}

/// Wirtinger presentation: one generator per arc (in arc order), one
/// relator per crossing (in crossing order).
pub fn wirtinger(d: &OrientedDiagram) -> Presentation {
    Presentation {
        generators: (0..d.arc_count()).collect(),
        relators: d.crossings.iter().map(crossing_relator).collect(),
    }
}

// ---------------------------------------------------------------------------
// Connected sum

/// Bookkeeping for a diagram produced by [`connected_sum`]: which composite
/// crossings come from which summand, and the summands themselves.
///
/// Composite arcs and faces may be relabelled afterwards; the record only
/// depends on crossing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpliceRecord {
    pub left: OrientedDiagram,
    pub right: OrientedDiagram,
    /// Arc of `left` that was cut.
    pub left_arc: ArcId,
    /// Arc of `right` that was cut.
    pub right_arc: ArcId,
    /// Composite index of each crossing of `left`.
    pub left_crossings: Vec<usize>,
    /// Composite index of each crossing of `right`.
    pub right_crossings: Vec<usize>,
}

/// Which summand a composite crossing belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl SpliceRecord {
    pub fn summand(&self, side: Side) -> &OrientedDiagram {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    fn crossing_map(&self, side: Side) -> &[usize] {
        match side {
            Side::Left => &self.left_crossings,
            Side::Right => &self.right_crossings,
        }
    }

    pub fn check(&self, composite: &OrientedDiagram) -> Result<()> {
        let n = composite.crossing_count();
        if self.left.crossing_count() + self.right.crossing_count() != n {
            return Err(Error::SpliceMismatch("crossing counts do not add up".into()));
        }
        let mut all: Vec<usize> = self.left_crossings.iter().chain(&self.right_crossings).copied().collect();
        all.sort();
        if all != (0..n).collect::<Vec<_>>()
            || self.left_crossings.len() != self.left.crossing_count()
            || self.right_crossings.len() != self.right.crossing_count()
        {
            return Err(Error::SpliceMismatch("crossing maps are not a partition".into()));
        }
        for side in [Side::Left, Side::Right] {
            for (i, c) in self.summand(side).crossings().iter().enumerate() {
                if composite.crossings[self.crossing_map(side)[i]].sign != c.sign {
                    return Err(Error::SpliceMismatch(format!("sign of crossing {i} differs")));
                }
            }
        }
        self.left.check_arc(self.left_arc)?;
        self.right.check_arc(self.right_arc)?;
        Ok(())
    }

    /// Composite arc carrying each arc of a summand. The cut arc is mapped
    /// to the composite arc that starts inside that summand.
    pub fn arc_map(&self, composite: &OrientedDiagram, side: Side) -> Vec<ArcId> {
        let summand = self.summand(side);
        let cmap = self.crossing_map(side);
        let mut map = vec![0; summand.arc_count()];
        for (i, c) in summand.crossings().iter().enumerate() {
            map[c.under_out] = composite.crossings[cmap[i]].under_out;
        }
        map
    }

    /// Composite face containing each face of a summand.
    pub fn face_map(&self, composite: &OrientedDiagram, side: Side) -> Vec<FaceId> {
        let summand = self.summand(side);
        let cmap = self.crossing_map(side);
        let mut map = vec![0; summand.face_count()];
        for (i, c) in summand.crossings().iter().enumerate() {
            for q in Quadrant::ALL {
                map[c.face(q)] = composite.crossings[cmap[i]].face(q);
            }
        }
        map
    }

    /// The two connecting arcs of the composite: `(α_l, α_l′)`, where `α_l`
    /// starts in the left summand and runs into the right one, and `α_l′`
    /// starts in the right summand and runs back into the left one.
    pub fn connecting_arcs(&self, composite: &OrientedDiagram) -> (ArcId, ArcId) {
        let l = self.arc_map(composite, Side::Left)[self.left_arc];
        let r = self.arc_map(composite, Side::Right)[self.right_arc];
        (l, r)
    }

    /// Presentation of the composite group obtained by identifying the two
    /// connecting generators and dropping one relator from each summand
    /// (the last crossing of each). Generators are ordered: left arcs other
    /// than the connecting one, the connecting arc, then the right arcs.
    /// Returns the presentation and the index of the connecting generator.
    pub fn reduced_presentation(&self, composite: &OrientedDiagram) -> (Presentation, usize) {
        let (al, al_prime) = self.connecting_arcs(composite);
        let lmap = self.arc_map(composite, Side::Left);
        let rmap = self.arc_map(composite, Side::Right);
        let mut generators: Vec<ArcId> =
            (0..self.left.arc_count()).filter(|&a| a != self.left_arc).map(|a| lmap[a]).collect();
        let connecting = generators.len();
        generators.push(al);
        generators.extend((0..self.right.arc_count()).filter(|&a| a != self.right_arc).map(|a| rmap[a]));

        let index_of = |arc: ArcId| {
            let arc = if arc == al_prime { al } else { arc };
            generators.iter().position(|&g| g == arc).expect("every composite arc is a generator")
        };
        let mut relators = Vec::new();
        for cmap in [&self.left_crossings, &self.right_crossings] {
            for &ci in &cmap[..cmap.len() - 1] {
                relators.push(crossing_relator(&composite.crossings[ci]).map_generators(index_of));
            }
        }
        (Presentation { generators, relators }, connecting)
    }
}

/// Connected sum of two diagrams, cutting `arc1` of `d1` and `arc2` of `d2`
/// at their first edges and reconnecting so that orientations agree.
///
/// The composite lists the crossings of `d1` first, then those of `d2`.
pub fn connected_sum(
    d1: &OrientedDiagram,
    arc1: ArcId,
    d2: &OrientedDiagram,
    arc2: ArcId,
) -> Result<(OrientedDiagram, SpliceRecord)> {
    d1.check_arc(arc1)?;
    d2.check_arc(arc2)?;
    let pd1 = d1.canonical_pd()?;
    let pd2 = d2.canonical_pd()?;
    let n1 = d1.crossing_count();
    let offset = pd1.len() as i64 * 2;

    let mut pd: Vec<[i64; 4]> = pd1.clone();
    pd.extend(pd2.iter().map(|t| t.map(|l| l + offset)));

    let start1 = d1.arc_start(arc1)?;
    let start2 = d2.arc_start(arc2)?;
    let e1 = pd1[start1][2];
    let e2 = pd2[start2][2] + offset;

    // head of e1 inside d1, head of e2 inside d2 (in composite coordinates)
    let occ = occurrences(&pd)?;
    let h1 = other_end(&occ, e1, (start1, 2));
    let h2 = other_end(&occ, e2, (n1 + start2, 2));
    pd[h2.0][h2.1] = e1;
    pd[h1.0][h1.1] = e2;

    let composite = OrientedDiagram::from_pd(renumber_pd(&pd)?)?;
    let record = SpliceRecord {
        left: d1.clone(),
        right: d2.clone(),
        left_arc: arc1,
        right_arc: arc2,
        left_crossings: (0..n1).collect(),
        right_crossings: (n1..n1 + d2.crossing_count()).collect(),
    };
    Ok((composite, record))
}

/// Undo a splice on the PD level: cut the two connecting edges of the
/// composite and close each summand up again. The summands come back with
/// the labelling stored in the record, which is checked against them.
pub fn factor_diagram(
    composite: &OrientedDiagram,
    record: &SpliceRecord,
) -> Result<(OrientedDiagram, OrientedDiagram)> {
    record.check(composite)?;
    let pd = composite.pd.as_ref().ok_or(Error::MissingEdgeData)?;
    let edges = composite.edges()?;
    let side_of = |c: usize| {
        if record.left_crossings.contains(&c) {
            Side::Left
        } else {
            Side::Right
        }
    };
    let bridges: Vec<&Edge> = edges.iter().filter(|e| side_of(e.tail.0) != side_of(e.head.0)).collect();
    if bridges.len() != 2 {
        return Err(Error::SpliceMismatch(format!("{} edges join the two sides (expected 2)", bridges.len())));
    }
    let (into_right, into_left) =
        if side_of(bridges[0].tail.0) == Side::Left { (bridges[0], bridges[1]) } else { (bridges[1], bridges[0]) };

    let mut closed = pd.clone();
    // left: the edge leaving the left side now returns straight into it
    closed[into_left.head.0][into_left.head.1] = into_right.label;
    // right: symmetric
    closed[into_right.head.0][into_right.head.1] = into_left.label;

    let build = |side: Side| -> Result<OrientedDiagram> {
        let cmap = record.crossing_map(side);
        let sub: Vec<[i64; 4]> = cmap.iter().map(|&c| closed[c]).collect();
        let d = OrientedDiagram::from_pd(renumber_pd(&sub)?)?;
        d.relabel_to_match(record.summand(side).crossings())
    };
    Ok((build(Side::Left)?, build(Side::Right)?))
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
struct CrossingJson {
    sign: i64,
    over: usize,
    under_in: usize,
    under_out: usize,
    quadrants: [usize; 4],
}

#[derive(Serialize, Deserialize)]
pub(crate) struct DiagramJson {
    crossings: Vec<CrossingJson>,
    faces: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pd: Option<Vec<[i64; 4]>>,
}

impl OrientedDiagram {
    pub(crate) fn to_json_struct(&self) -> DiagramJson {
        DiagramJson {
            crossings: self
                .crossings
                .iter()
                .map(|c| CrossingJson {
                    sign: c.sign.value() as i64,
                    over: c.over,
                    under_in: c.under_in,
                    under_out: c.under_out,
                    quadrants: c.quadrants,
                })
                .collect(),
            faces: self.face_count(),
            pd: self.pd.clone(),
        }
    }

    pub(crate) fn from_json_struct(j: DiagramJson) -> Result<OrientedDiagram> {
        let crossings = j
            .crossings
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                Ok(Crossing {
                    sign: Sign::from_value(c.sign)
                        .ok_or_else(|| Error::Schema(format!("crossing {i}: sign must be ±1")))?,
                    over: c.over,
                    under_in: c.under_in,
                    under_out: c.under_out,
                    quadrants: c.quadrants,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let bare = OrientedDiagram::from_crossings(crossings, j.faces)?;
        match j.pd {
            None => Ok(bare),
            Some(pd) => OrientedDiagram::from_pd(pd)?.relabel_to_match(bare.crossings()),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_json_struct()).expect("diagram JSON is always serializable")
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<OrientedDiagram> {
        OrientedDiagram::from_json_struct(serde_json::from_value(v)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json_struct()).expect("diagram JSON is always serializable")
    }

    pub fn from_json_str(s: &str) -> Result<OrientedDiagram> {
        OrientedDiagram::from_json_struct(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
    const FIGURE_EIGHT: &str = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";

    #[test]
    fn parses_trefoil() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.arc_count(), 3);
        assert_eq!(d.face_count(), 5);
        // the standard table trefoil is all one handedness
        assert_eq!(d.writhe().abs(), 3);
    }

    #[test]
    fn parses_figure_eight() {
        let d = parse_pd(FIGURE_EIGHT).unwrap();
        assert_eq!(d.crossing_count(), 4);
        assert_eq!(d.arc_count(), 4);
        assert_eq!(d.face_count(), 6);
        assert_eq!(d.writhe(), 0);
    }

    #[test]
    fn euler_characteristic() {
        for pd in [TREFOIL, FIGURE_EIGHT] {
            let d = parse_pd(pd).unwrap();
            let v = d.crossing_count() as i64;
            let e = d.edge_count() as i64;
            let f = d.face_count() as i64;
            assert_eq!(v - e + f, 2);
        }
    }

    #[test]
    fn malformed_tuple_is_rejected() {
        assert!(matches!(parse_pd("X(1,2,3)"), Err(Error::MalformedPd(_))));
        assert!(matches!(parse_pd("Y(1,2,3,4)"), Err(Error::MalformedPd(_))));
        assert!(matches!(parse_pd("X(1,2,3,4"), Err(Error::MalformedPd(_))));
        assert!(matches!(parse_pd("X(1,a,3,4)"), Err(Error::MalformedPd(_))));
        assert!(matches!(parse_pd(""), Err(Error::NoCrossings)));
    }

    #[test]
    fn duplicated_labels_are_rejected() {
        for pd in [TREFOIL, FIGURE_EIGHT] {
            let tuples = parse_tuples(pd).unwrap();
            let n = tuples.len();
            for c in 0..n {
                for s in 0..4 {
                    for replacement in 1..=(2 * n as i64) {
                        if replacement == tuples[c][s] {
                            continue;
                        }
                        let mut mutated = tuples.clone();
                        mutated[c][s] = replacement;
                        assert!(
                            matches!(OrientedDiagram::from_pd(mutated), Err(Error::EdgeMultiplicity { .. })),
                            "mutation at {c},{s} -> {replacement} accepted"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn non_planar_code_is_rejected() {
        // consistent orientation and one component, but only two faces
        assert!(matches!(parse_pd("X(1,2,3,4) X(2,3,1,4)"), Err(Error::NonPlanar { faces: 2, crossings: 2 })));
    }

    #[test]
    fn sides_agree_along_every_edge() {
        for pd in [TREFOIL, FIGURE_EIGHT] {
            let d = parse_pd(pd).unwrap();
            for e in d.edges().unwrap() {
                let t = d.crossings()[e.tail.0].strand_sides()[e.tail.1];
                let h = d.crossings()[e.head.0].strand_sides()[e.head.1];
                assert_eq!((t.right, t.left), (h.right, h.left));
                assert_eq!(t.arc, e.arc);
                assert_eq!(h.arc, e.arc);
                assert_ne!(t.right, t.left);
            }
        }
    }

    #[test]
    fn wirtinger_counts() {
        for pd in [TREFOIL, FIGURE_EIGHT] {
            let d = parse_pd(pd).unwrap();
            let p = wirtinger(&d);
            assert_eq!(p.generator_count(), d.arc_count());
            assert_eq!(p.relators.len(), d.crossing_count());
            for r in &p.relators {
                assert_eq!(r.len(), 4);
                assert_eq!(r.exponent_sum(), 0);
            }
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        for pd in [TREFOIL, FIGURE_EIGHT] {
            let d = parse_pd(pd).unwrap();
            let s = d.to_json_string();
            let back = OrientedDiagram::from_json_str(&s).unwrap();
            assert_eq!(back, d);
            assert_eq!(back.to_json_string(), s);
        }
    }

    #[test]
    fn json_without_edges_still_loads() {
        let d = parse_pd(FIGURE_EIGHT).unwrap();
        let mut v = d.to_json_value();
        v.as_object_mut().unwrap().remove("pd");
        let bare = OrientedDiagram::from_json_value(v).unwrap();
        assert_eq!(bare.crossings(), d.crossings());
        assert!(bare.pd().is_none());
        assert!(matches!(bare.edges(), Err(Error::MissingEdgeData)));
    }

    #[test]
    fn connected_sum_is_additive_and_splits_back() {
        let d1 = parse_pd(TREFOIL).unwrap();
        let d2 = parse_pd(FIGURE_EIGHT).unwrap();
        for a1 in 0..d1.arc_count() {
            for a2 in 0..d2.arc_count() {
                let (c, rec) = connected_sum(&d1, a1, &d2, a2).unwrap();
                assert_eq!(c.crossing_count(), 7);
                assert_eq!(c.arc_count(), 7);
                assert_eq!(c.face_count(), 9);
                let (l, r) = factor_diagram(&c, &rec).unwrap();
                assert_eq!(l.crossings(), d1.crossings());
                assert_eq!(r.crossings(), d2.crossings());
                assert!(l.is_relabelling_of(&d1));
            }
        }
    }

    #[test]
    fn connected_sum_relators_are_summand_relators() {
        let d1 = parse_pd(TREFOIL).unwrap();
        let d2 = parse_pd(FIGURE_EIGHT).unwrap();
        let (c, rec) = connected_sum(&d1, 1, &d2, 2).unwrap();
        let composite = wirtinger(&c);
        for (side, summand) in [(Side::Left, &d1), (Side::Right, &d2)] {
            let amap = rec.arc_map(&c, side);
            let (al, alp) = rec.connecting_arcs(&c);
            let cut = if side == Side::Left { rec.left_arc } else { rec.right_arc };
            let back = |arc: ArcId| {
                if arc == al || arc == alp {
                    cut
                } else {
                    amap.iter().position(|&m| m == arc).unwrap()
                }
            };
            let own = wirtinger(summand);
            for (i, &ci) in rec.crossing_map(side).iter().enumerate() {
                assert_eq!(composite.relators[ci].map_generators(back), own.relators[i]);
            }
        }
    }

    #[test]
    fn invalid_arc_is_rejected() {
        let d1 = parse_pd(TREFOIL).unwrap();
        let d2 = parse_pd(FIGURE_EIGHT).unwrap();
        assert!(matches!(connected_sum(&d1, 3, &d2, 0), Err(Error::InvalidArc(3))));
        assert!(matches!(connected_sum(&d1, 0, &d2, 9), Err(Error::InvalidArc(9))));
    }
}
