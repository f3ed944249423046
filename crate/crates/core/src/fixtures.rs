//! Built-in worked example: a trefoil, a figure-eight knot and their
//! connected sum, with exact parabolic colorings over `ℚ(x)`,
//! `x² + x + 1 = 0`.
//!
//! Arcs and faces are numbered to follow the example's own labels: trefoil
//! arcs `α₁, α₂, α₃` and regions 1 to 5; figure-eight arcs
//! `α₃′, α₄, α₅, α₆` and regions 4 to 9; the composite arcs
//! `α₁, α₂, α₃, α₃′, α₄, α₅, α₆` and regions 1 to 9, all shifted to start at 0.

use crate::coloring::{ArcColoring, ShadowColoring};
use crate::diagram::{connected_sum, parse_pd, ArcId, Crossing, OrientedDiagram, Sign, SpliceRecord};
use crate::error::{Error, Result};
use crate::parabolic::ParabolicVector;
use crate::scalar::QOmega;

pub const TREFOIL: &str = "3_1";
pub const FIGURE_EIGHT: &str = "4_1";
pub const COMPOSITE: &str = "3_1#4_1";
pub const NAMES: [&str; 3] = [TREFOIL, FIGURE_EIGHT, COMPOSITE];

/// Arcs cut to form the composite: `α₃` of the trefoil and `α₃′` of the
/// figure-eight knot.
pub const SPLICE_ARCS: (ArcId, ArcId) = (2, 0);

const TREFOIL_PD: &str = "X(6,4,1,3) X(2,6,3,5) X(4,2,5,1)";
const FIGURE_EIGHT_PD: &str = "X(6,1,7,2) X(2,5,3,6) X(4,8,5,7) X(8,4,1,3)";
const COMPOSITE_PD: &str = "X(14,12,1,11) X(10,14,11,13) X(12,10,13,9) X(6,1,7,2) X(2,5,3,6) X(4,8,5,7) X(8,4,9,3)";

// (sign, over, under_in, under_out, [a, b, c, d])
type Row = (i8, ArcId, ArcId, ArcId, [usize; 4]);

const TREFOIL_TABLE: [Row; 3] = [(1, 0, 1, 2, [4, 3, 2, 0]), (1, 1, 2, 0, [2, 3, 1, 0]), (1, 2, 0, 1, [1, 3, 4, 0])];

const FIGURE_EIGHT_TABLE: [Row; 4] =
    [(-1, 0, 2, 3, [3, 2, 0, 1]), (-1, 2, 0, 1, [0, 2, 3, 5]), (1, 3, 1, 2, [5, 3, 1, 4]), (1, 1, 3, 0, [1, 0, 5, 4])];

const COMPOSITE_TABLE: [Row; 7] = [
    (1, 0, 1, 2, [4, 3, 2, 0]),
    (1, 1, 3, 0, [2, 3, 1, 0]),
    (1, 3, 0, 1, [1, 3, 4, 0]),
    (-1, 2, 5, 6, [6, 5, 3, 4]),
    (-1, 5, 2, 4, [3, 5, 6, 8]),
    (1, 6, 4, 5, [8, 6, 4, 7]),
    (1, 4, 6, 3, [4, 3, 8, 7]),
];

fn crossings(table: &[Row]) -> Vec<Crossing> {
    table
        .iter()
        .map(|&(sign, over, under_in, under_out, quadrants)| Crossing {
            sign: if sign > 0 { Sign::Positive } else { Sign::Negative },
            over,
            under_in,
            under_out,
            quadrants,
        })
        .collect()
}

/// The fixture diagram `name`: parsed from its PD code and relabelled to the
/// example's numbering. Relabelling fails unless signs and quadrants of the
/// parsed diagram agree with the table.
pub fn builtin(name: &str) -> Result<OrientedDiagram> {
    let (pd, table): (&str, &[Row]) = match name {
        TREFOIL => (TREFOIL_PD, &TREFOIL_TABLE),
        FIGURE_EIGHT => (FIGURE_EIGHT_PD, &FIGURE_EIGHT_TABLE),
        COMPOSITE => (COMPOSITE_PD, &COMPOSITE_TABLE),
        _ => return Err(Error::UnknownFixture(name.to_string())),
    };
    parse_pd(pd)?.relabel_to_match(&crossings(table))
}

fn v(a: (i64, i64), b: (i64, i64)) -> ParabolicVector<QOmega> {
    ParabolicVector::int(a, b)
}

// entries are (u, v) meaning u + v·x
fn trefoil_arcs() -> Vec<ParabolicVector<QOmega>> {
    vec![v((-1, 0), (1, 0)), v((1, 0), (0, 0)), v((0, 0), (1, 0))]
}

fn figure_eight_arcs() -> Vec<ParabolicVector<QOmega>> {
    vec![v((0, 0), (1, 0)), v((1, 1), (0, 1)), v((0, 1), (0, 1)), v((0, 1), (0, 0))]
}

fn regions() -> Vec<ParabolicVector<QOmega>> {
    vec![
        v((2, 0), (1, 0)),
        v((2, 0), (3, 0)),
        v((1, 0), (1, 0)),
        v((-1, 0), (3, 0)),
        v((-1, 0), (4, 0)),
        v((3, 4), (7, 4)),
        v((3, 4), (4, 0)),
        v((-2, 4), (-1, -1)),
        v((-2, 3), (-1, -1)),
    ]
}

/// `p = (1, 2)`.
pub fn fixture_p() -> ParabolicVector<QOmega> {
    v((1, 0), (2, 0))
}

/// The exact shadow coloring of fixture `name`.
pub fn exact_shadow(name: &str) -> Result<ShadowColoring<QOmega>> {
    let d = builtin(name)?;
    let all = regions();
    let (arcs, regions) = match name {
        TREFOIL => (trefoil_arcs(), all[..5].to_vec()),
        FIGURE_EIGHT => (figure_eight_arcs(), all[3..].to_vec()),
        _ => {
            let mut arcs = trefoil_arcs();
            arcs.extend(figure_eight_arcs());
            (arcs, all)
        }
    };
    ShadowColoring::new(ArcColoring::new(d, arcs)?, regions, fixture_p(), 0.0)
}

/// Splice record of the composite fixture with respect to the other two.
pub fn splice_record() -> Result<SpliceRecord> {
    let (arc1, arc2) = SPLICE_ARCS;
    let (composite, record) = connected_sum(&builtin(TREFOIL)?, arc1, &builtin(FIGURE_EIGHT)?, arc2)?;
    let fixture = builtin(COMPOSITE)?;
    if !composite.is_relabelling_of(&fixture) {
        return Err(Error::SpliceMismatch("fixture composite differs from the computed connected sum".into()));
    }
    record.check(&fixture)?;
    Ok(record)
}
