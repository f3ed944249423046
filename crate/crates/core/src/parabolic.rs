//! Parabolic elements of `SL(2, ℂ)` and their quandle.
//!
//! A nonzero vector `(α, β)` stands for the parabolic matrix
//! `[[1+αβ, −α²], [β², 1−αβ]]`; `v` and `−v` give the same matrix. The
//! quandle operation `a * b` is the matrix of `b` applied to `a`, which
//! realises conjugation `M_b M_a M_b⁻¹` of the corresponding matrices.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{QOmega, Scalar, XRoot};

/// Smallest chordal separation treated as distinct in floating mode.
pub const HOPF_SEPARATION: f64 = 1e-9;

#[derive(Clone, PartialEq)]
pub struct ParabolicVector<S> {
    pub alpha: S,
    pub beta: S,
}

pub type FloatVector = ParabolicVector<Complex64>;
pub type ExactVector = ParabolicVector<QOmega>;

/// A point of `ℂP¹ = ℂ ∪ {∞}`.
#[derive(Clone, Debug, PartialEq)]
pub enum ProjectivePoint<S> {
    Finite(S),
    Infinity,
}

/// `det(a, b) = α_a β_b − β_a α_b`.
pub fn det2<S: Scalar>(a: &ParabolicVector<S>, b: &ParabolicVector<S>) -> S {
    a.alpha.clone() * b.beta.clone() - a.beta.clone() * b.alpha.clone()
}

impl<S: Scalar> ParabolicVector<S> {
    pub fn new(alpha: S, beta: S) -> Result<Self> {
        if alpha.is_zero() && beta.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(ParabolicVector { alpha, beta })
    }

    pub fn to_matrix(&self) -> Mat2<S> {
        let ab = self.alpha.clone() * self.beta.clone();
        Mat2 {
            m11: S::one() + ab.clone(),
            m12: -(self.alpha.clone() * self.alpha.clone()),
            m21: self.beta.clone() * self.beta.clone(),
            m22: S::one() - ab,
        }
    }

    /// `a * b`, i.e. `M_b · a`.
    pub fn quandle_mul(&self, b: &Self) -> Self {
        // M_b a = a + det(a, b) b
        let d = det2(self, b);
        ParabolicVector {
            alpha: self.alpha.clone() + d.clone() * b.alpha.clone(),
            beta: self.beta.clone() + d * b.beta.clone(),
        }
    }

    /// `a *⁻¹ b`, i.e. `M_b⁻¹ · a`.
    pub fn quandle_div(&self, b: &Self) -> Self {
        let d = det2(self, b);
        ParabolicVector {
            alpha: self.alpha.clone() - d.clone() * b.alpha.clone(),
            beta: self.beta.clone() - d * b.beta.clone(),
        }
    }

    pub fn hopf(&self) -> ProjectivePoint<S> {
        match self.beta.inv() {
            None => ProjectivePoint::Infinity,
            Some(inv) => ProjectivePoint::Finite(self.alpha.clone() * inv),
        }
    }

    pub fn scale(&self, lambda: &S) -> Self {
        ParabolicVector { alpha: lambda.clone() * self.alpha.clone(), beta: lambda.clone() * self.beta.clone() }
    }

    pub fn negate(&self) -> Self {
        ParabolicVector { alpha: -self.alpha.clone(), beta: -self.beta.clone() }
    }

    pub fn norm(&self) -> f64 {
        self.alpha.magnitude().hypot(self.beta.magnitude())
    }

    /// `max(|α − α'|, |β − β'|)`.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.alpha.clone() - other.alpha.clone()).magnitude().max((self.beta.clone() - other.beta.clone()).magnitude())
    }

    /// Distance to `other` up to sign.
    pub fn distance_up_to_sign(&self, other: &Self) -> f64 {
        self.distance(other).min(self.distance(&other.negate()))
    }

    /// `self = ±other`, exactly in exact fields, else within `tol` relative
    /// to `max(1, |other|)`.
    pub fn eq_up_to_sign(&self, other: &Self, tol: f64) -> bool {
        if S::EXACT {
            *self == *other || *self == other.negate()
        } else {
            self.distance_up_to_sign(other) <= tol * other.norm().max(1.0)
        }
    }

    /// Chordal distance between the Hopf images, `|det(a,b)| / (|a||b|)`.
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        det2(self, other).magnitude() / (self.norm() * other.norm())
    }

    /// Distinct Hopf images: exact test in exact fields, chordal separation
    /// of at least [`HOPF_SEPARATION`] otherwise.
    pub fn hopf_distinct(&self, other: &Self) -> bool {
        if S::EXACT {
            !det2(self, other).is_zero()
        } else {
            self.chordal_distance(other) >= HOPF_SEPARATION
        }
    }

    pub fn approx(&self) -> FloatVector {
        ParabolicVector { alpha: self.alpha.approx(), beta: self.beta.approx() }
    }
}

impl ParabolicVector<QOmega> {
    pub fn int(a: (i64, i64), b: (i64, i64)) -> Self {
        ParabolicVector { alpha: QOmega::int(a.0, a.1), beta: QOmega::int(b.0, b.1) }
    }

    pub fn to_complex(&self, root: XRoot) -> FloatVector {
        ParabolicVector { alpha: self.alpha.to_complex(root), beta: self.beta.to_complex(root) }
    }
}

impl FloatVector {
    pub fn from_parts(alpha: (f64, f64), beta: (f64, f64)) -> Result<Self> {
        ParabolicVector::new(Complex64::new(alpha.0, alpha.1), Complex64::new(beta.0, beta.1))
    }
}

impl<S: fmt::Display> fmt::Display for ParabolicVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

impl<S: fmt::Debug> fmt::Debug for ParabolicVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.alpha, self.beta)
    }
}

/// A 2×2 matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2<S> {
    pub m11: S,
    pub m12: S,
    pub m21: S,
    pub m22: S,
}

impl<S: Scalar> Mat2<S> {
    pub fn new(m11: S, m12: S, m21: S, m22: S) -> Self {
        Mat2 { m11, m12, m21, m22 }
    }

    pub fn identity() -> Self {
        Mat2::new(S::one(), S::zero(), S::zero(), S::one())
    }

    pub fn zero() -> Self {
        Mat2::new(S::zero(), S::zero(), S::zero(), S::zero())
    }

    /// Matrix with columns `a` and `b`.
    pub fn from_columns(a: &ParabolicVector<S>, b: &ParabolicVector<S>) -> Self {
        Mat2::new(a.alpha.clone(), b.alpha.clone(), a.beta.clone(), b.beta.clone())
    }

    pub fn det(&self) -> S {
        self.m11.clone() * self.m22.clone() - self.m12.clone() * self.m21.clone()
    }

    pub fn trace(&self) -> S {
        self.m11.clone() + self.m22.clone()
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det().inv()?;
        Some(Mat2::new(
            self.m22.clone() * d.clone(),
            -(self.m12.clone() * d.clone()),
            -(self.m21.clone() * d.clone()),
            self.m11.clone() * d,
        ))
    }

    pub fn apply(&self, v: &ParabolicVector<S>) -> ParabolicVector<S> {
        ParabolicVector {
            alpha: self.m11.clone() * v.alpha.clone() + self.m12.clone() * v.beta.clone(),
            beta: self.m21.clone() * v.alpha.clone() + self.m22.clone() * v.beta.clone(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|e| c.clone() * e.clone())
    }

    pub fn negate(&self) -> Self {
        self.map(|e| -e.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        Mat2::new(
            self.m11.clone() + o.m11.clone(),
            self.m12.clone() + o.m12.clone(),
            self.m21.clone() + o.m21.clone(),
            self.m22.clone() + o.m22.clone(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.negate())
    }

    pub fn entries(&self) -> [&S; 4] {
        [&self.m11, &self.m12, &self.m21, &self.m22]
    }

    fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Mat2::new(f(&self.m11), f(&self.m12), f(&self.m21), f(&self.m22))
    }

    /// Frobenius inner product `Σ conj(x) y`.
    pub fn inner(&self, o: &Self) -> S {
        self.entries().iter().zip(o.entries()).fold(S::zero(), |acc, (x, y)| acc + x.conj() * y.clone())
    }

    /// Largest entrywise difference.
    pub fn distance(&self, o: &Self) -> f64 {
        self.entries().iter().zip(o.entries()).map(|(x, y)| ((*x).clone() - y.clone()).magnitude()).fold(0.0, f64::max)
    }

    pub fn distance_up_to_sign(&self, o: &Self) -> f64 {
        self.distance(o).min(self.distance(&o.negate()))
    }

    pub fn approx(&self) -> Mat2<Complex64> {
        Mat2::new(self.m11.approx(), self.m12.approx(), self.m21.approx(), self.m22.approx())
    }
}

impl Mat2<QOmega> {
    pub fn to_complex(&self, root: XRoot) -> Mat2<Complex64> {
        Mat2::new(
            self.m11.to_complex(root),
            self.m12.to_complex(root),
            self.m21.to_complex(root),
            self.m22.to_complex(root),
        )
    }
}

impl<S: Scalar> Mul for &Mat2<S> {
    type Output = Mat2<S>;
    fn mul(self, o: &Mat2<S>) -> Mat2<S> {
        Mat2::new(
            self.m11.clone() * o.m11.clone() + self.m12.clone() * o.m21.clone(),
            self.m11.clone() * o.m12.clone() + self.m12.clone() * o.m22.clone(),
            self.m21.clone() * o.m11.clone() + self.m22.clone() * o.m21.clone(),
            self.m21.clone() * o.m12.clone() + self.m22.clone() * o.m22.clone(),
        )
    }
}

/// All `g ∈ SL(2)` with `g M_source g⁻¹ = M_target`: the set
/// `{ ±base·(I + λ N_source) }`, where `I + λ N_source` is the matrix of
/// `√λ·source`, i.e. the unipotent stabiliser of `source`.
#[derive(Clone, Debug)]
pub struct ConjugatorFamily<S> {
    pub source: ParabolicVector<S>,
    pub target: ParabolicVector<S>,
    /// Member with parameter 0 and positive sign; maps `source` to `target`.
    pub base: Mat2<S>,
    /// The member closest to the identity in Frobenius norm.
    pub canonical: Mat2<S>,
    pub canonical_parameter: S,
    pub canonical_negated: bool,
}

impl<S: Scalar> ConjugatorFamily<S> {
    /// `N_source`, the nilpotent part of `M_source`.
    fn nilpotent(&self) -> Mat2<S> {
        self.source.to_matrix().sub(&Mat2::identity())
    }

    pub fn member(&self, lambda: &S, negated: bool) -> Mat2<S> {
        let g = &self.base * &Mat2::identity().add(&self.nilpotent().scale(lambda));
        if negated {
            g.negate()
        } else {
            g
        }
    }
}

/// A `2×2` matrix of determinant 1 with first column `v`.
fn complete_basis<S: Scalar>(v: &ParabolicVector<S>) -> Mat2<S> {
    let u = if v.alpha.magnitude() >= v.beta.magnitude() {
        ParabolicVector { alpha: S::zero(), beta: v.alpha.inv().expect("nonzero pivot") }
    } else {
        ParabolicVector { alpha: -v.beta.inv().expect("nonzero pivot"), beta: S::zero() }
    };
    Mat2::from_columns(v, &u)
}

/// Conjugators taking the parabolic element of `source` to that of
/// `target`, with a deterministic canonical member: the one minimising
/// `‖g − I‖_F`, ties broken by the smaller parameter (real part, then
/// imaginary part), then by the positive sign.
pub fn conjugators<S: Scalar>(target: &ParabolicVector<S>, source: &ParabolicVector<S>) -> Result<ConjugatorFamily<S>> {
    if source.alpha.is_zero() && source.beta.is_zero() || target.alpha.is_zero() && target.beta.is_zero() {
        return Err(Error::ZeroVector);
    }
    let from = complete_basis(source);
    let to = complete_basis(target);
    let base = &to * &from.inverse().expect("unimodular basis");

    let n = source.to_matrix().sub(&Mat2::identity());
    let b = &base * &n;
    let bb = b.inner(&b);
    let bb_inv = bb.inv().expect("N_source is nonzero");

    let mut best: Option<(f64, S, bool)> = None;
    for negated in [false, true] {
        let (a, bvec) = if negated {
            (base.negate().sub(&Mat2::identity()), b.negate())
        } else {
            (base.sub(&Mat2::identity()), b.clone())
        };
        let lambda = -(bvec.inner(&a) * bb_inv.clone());
        let g = a.add(&bvec.scale(&lambda));
        let cost = g.inner(&g).approx().re;
        let better = match &best {
            None => true,
            Some((c, l, _)) => {
                let scale = c.max(cost).max(1.0);
                if (cost - c).abs() > 1e-12 * scale {
                    cost < *c
                } else {
                    let (lz, bz) = (lambda.approx(), l.approx());
                    (lz.re, lz.im) < (bz.re, bz.im)
                }
            }
        };
        if better {
            best = Some((cost, lambda, negated));
        }
    }
    let (_, canonical_parameter, canonical_negated) = best.expect("two candidates");
    let mut family = ConjugatorFamily {
        source: source.clone(),
        target: target.clone(),
        base,
        canonical: Mat2::identity(),
        canonical_parameter,
        canonical_negated,
    };
    family.canonical = family.member(&family.canonical_parameter, canonical_negated);
    Ok(family)
}
