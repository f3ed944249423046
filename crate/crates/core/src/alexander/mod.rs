//! Twisted Alexander polynomials of parabolic representations.
//!
//! A coloring lifts to `SL(2)` through [`ParabolicVector::to_matrix`]; the
//! lift tensored with abelianization gives the ring map
//! `Φ: ℤ[F_n] → M(2, S[t, t⁻¹])`, and the Alexander matrix is `Φ` applied to
//! Fox derivatives of the relators.

pub mod laurent;
pub mod word;

use crate::coloring::ArcColoring;
use crate::diagram::{ArcId, Presentation};
use crate::error::{Error, Result};
use crate::parabolic::Mat2;
use crate::scalar::Scalar;

use laurent::{det_laurent, LaurentMat2, LaurentPoly};
use word::{fox_derivative, GroupRingElement, GroupWord};

/// Coefficient threshold used when no tolerance is given.
pub const COEFF_TOLERANCE: f64 = 1e-9;

/// The ring map `Φ` for a fixed lift and generator → arc assignment.
#[derive(Clone, Debug)]
pub struct Phi<S> {
    matrices: Vec<Mat2<S>>,
    inverses: Vec<Mat2<S>>,
}

impl<S: Scalar> Phi<S> {
    /// Generator `i` is sent to the lift of the color of `generators[i]`.
    pub fn new(lift: &ArcColoring<S>, generators: &[ArcId]) -> Result<Self> {
        let mut matrices = Vec::with_capacity(generators.len());
        let mut inverses = Vec::with_capacity(generators.len());
        for &arc in generators {
            if arc >= lift.colors().len() {
                return Err(Error::InvalidArc(arc));
            }
            let m = lift.color(arc).to_matrix();
            inverses.push(m.inverse().ok_or_else(|| Error::Singular("lift is not invertible".into()))?);
            matrices.push(m);
        }
        Ok(Phi { matrices, inverses })
    }

    pub fn generator_count(&self) -> usize {
        self.matrices.len()
    }

    /// The matrix part of `Φ(w)`; the `t`-degree is the exponent sum.
    pub fn word_matrix(&self, w: &GroupWord) -> Result<Mat2<S>> {
        let mut m = Mat2::identity();
        for l in w.letters() {
            let table = if l.exponent > 0 { &self.matrices } else { &self.inverses };
            let g = table.get(l.generator).ok_or(Error::UnmappedGenerator(l.generator))?;
            m = &m * g;
        }
        Ok(m)
    }

    pub fn word(&self, w: &GroupWord) -> Result<LaurentMat2<S>> {
        Ok(LaurentMat2::from_mat2(&self.word_matrix(w)?, w.exponent_sum()))
    }

    pub fn apply(&self, e: &GroupRingElement) -> Result<LaurentMat2<S>> {
        let mut sum = LaurentMat2::zero();
        for (w, c) in e.terms() {
            sum = &sum + &self.word(w)?.scale(&S::from_i64(c));
        }
        Ok(sum)
    }
}

/// `Φ(e)` with generator `i` sent to the lift of arc `generators[i]`.
pub fn phi<S: Scalar>(e: &GroupRingElement, lift: &ArcColoring<S>, generators: &[ArcId]) -> Result<LaurentMat2<S>> {
    Phi::new(lift, generators)?.apply(e)
}

/// `det Φ(1 − α_j)`.
pub fn denominator<S: Scalar>(lift: &ArcColoring<S>, generators: &[ArcId], column: usize) -> Result<LaurentPoly<S>> {
    if column >= generators.len() {
        return Err(Error::DimensionMismatch(format!("no generator {column}")));
    }
    let e = &GroupRingElement::one() - &GroupRingElement::from_word(GroupWord::generator(column));
    Ok(phi(&e, lift, generators)?.det())
}

/// Alexander matrix: block `(k, j)` is `Φ(∂r_k/∂α_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlexanderMatrix<S> {
    pub blocks: Vec<Vec<LaurentMat2<S>>>,
    pub generators: Vec<ArcId>,
}

impl<S: Scalar> AlexanderMatrix<S> {
    pub fn relator_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// The matrix with each block expanded to 2×2 scalar entries.
    pub fn scalar_matrix(&self) -> Vec<Vec<LaurentPoly<S>>> {
        let mut rows = Vec::with_capacity(2 * self.blocks.len());
        for block_row in &self.blocks {
            for i in 0..2 {
                rows.push(block_row.iter().flat_map(|b| [b.entry(i, 0).clone(), b.entry(i, 1).clone()]).collect());
            }
        }
        rows
    }

    /// Square matrix left after deleting the two columns of generator `column`.
    pub fn minor(&self, column: usize) -> Result<Vec<Vec<LaurentPoly<S>>>> {
        if column >= self.generator_count() {
            return Err(Error::DimensionMismatch(format!("no generator {column}")));
        }
        Ok(self
            .scalar_matrix()
            .into_iter()
            .map(|row| row.into_iter().enumerate().filter(|(k, _)| k / 2 != column).map(|(_, p)| p).collect())
            .collect())
    }

    /// Whether every block in `rows × columns` vanishes.
    pub fn vanishes_on(&self, rows: std::ops::Range<usize>, columns: std::ops::Range<usize>) -> bool {
        rows.into_iter().all(|k| columns.clone().all(|j| self.blocks[k][j].is_zero()))
    }
}

/// Alexander matrix of a presentation with one relator fewer than
/// generators.
pub fn alexander_matrix<S: Scalar>(pres: &Presentation, lift: &ArcColoring<S>) -> Result<AlexanderMatrix<S>> {
    let n = pres.generator_count();
    if pres.relators.len() + 1 != n {
        return Err(Error::DimensionMismatch(format!(
            "{} relators for {n} generators, expected {}",
            pres.relators.len(),
            n.saturating_sub(1)
        )));
    }
    let phi = Phi::new(lift, &pres.generators)?;
    let blocks = pres
        .relators
        .iter()
        .map(|r| (0..n).map(|j| phi.apply(&fox_derivative(r, j))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(AlexanderMatrix { blocks, generators: pres.generators.clone() })
}

/// Both normalizations of the twisted Alexander polynomial, each in
/// canonical form.
#[derive(Clone, Debug, PartialEq)]
pub struct AlexanderPolynomial<S> {
    /// `det M_j / det Φ(1 − α_j)`.
    pub delta: LaurentPoly<S>,
    /// `det M_j`.
    pub delta_prime: LaurentPoly<S>,
    pub removed_column: usize,
    /// Largest coefficient of the division remainder.
    pub remainder_norm: f64,
}

/// Twisted Alexander polynomial with generator `column` removed.
///
/// Fails with [`Error::NonZeroRemainder`] when `det Φ(1 − α_j)` does not
/// divide `det M_j` to within `tol` relative to `max(1, max |coeff|)`
/// (exactly, for exact scalars).
pub fn twisted_alexander<S: Scalar>(
    pres: &Presentation,
    lift: &ArcColoring<S>,
    column: usize,
    tol: f64,
) -> Result<AlexanderPolynomial<S>> {
    let m = alexander_matrix(pres, lift)?;
    let det = det_laurent(&m.minor(column)?)?.cleaned(tol);
    let denom = denominator(lift, &pres.generators, column)?.cleaned(tol);
    if denom.is_zero() {
        return Err(Error::Singular(format!("det Φ(1 − α_{column}) vanishes")));
    }
    let (quotient, remainder) = det.div_rem(&denom)?;
    let remainder_norm = remainder.max_abs();
    let bound = if S::EXACT { 0.0 } else { tol * det.max_abs().max(1.0) };
    if remainder_norm > bound {
        return Err(Error::NonZeroRemainder(remainder_norm));
    }
    Ok(AlexanderPolynomial {
        delta: quotient.canonical(tol),
        delta_prime: det.canonical(tol),
        removed_column: column,
        remainder_norm,
    })
}

/// The column removed by default: the generator of `splice_arc` when one
/// is given and present, otherwise the last generator.
pub fn default_column(pres: &Presentation, splice_arc: Option<ArcId>) -> usize {
    splice_arc.and_then(|a| pres.generator_of_arc(a)).unwrap_or(pres.generator_count().saturating_sub(1))
}

/// `Δ′ = det M_j` for the default column.
pub fn normalized_alexander<S: Scalar>(pres: &Presentation, lift: &ArcColoring<S>, tol: f64) -> Result<LaurentPoly<S>> {
    Ok(twisted_alexander(pres, lift, default_column(pres, None), tol)?.delta_prime)
}
