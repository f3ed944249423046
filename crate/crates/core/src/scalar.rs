//! Coefficient fields.
//!
//! Everything downstream is generic over [`Scalar`], which is implemented
//! for double-precision complex numbers and for the exact cyclotomic field
//! `ℚ(x)` with `x² + x + 1 = 0` ([`QOmega`]). The exact field is what the
//! worked fixtures live in, so their invariants can be checked with zero
//! tolerance.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True for fields where equality is decided exactly.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Complex conjugate.
    fn conj(&self) -> Self;

    /// Approximate absolute value, used for pivoting and tolerance scaling.
    fn magnitude(&self) -> f64;

    /// Zero test. Exact fields ignore `tol`.
    fn is_zero_within(&self, tol: f64) -> bool;

    fn is_zero(&self) -> bool {
        self.is_zero_within(0.0)
    }

    /// Complex approximation. Exact values use the root `x = (−1 − √3 i)/2`;
    /// the real part does not depend on that choice.
    fn approx(&self) -> Complex64;

    /// Conversion from a floating complex number, if the field admits one.
    fn from_complex(z: Complex64) -> Option<Self>;
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn inv(&self) -> Option<Self> {
        if self.re == 0.0 && self.im == 0.0 {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn is_zero_within(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    fn approx(&self) -> Complex64 {
        *self
    }

    fn from_complex(z: Complex64) -> Option<Self> {
        Some(z)
    }
}

/// Which root of `x² + x + 1 = 0` an exact value is specialised to when it
/// is converted to floating point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum XRoot {
    /// `x = (−1 − √3 i)/2`
    Minus,
    /// `x = (−1 + √3 i)/2`
    Plus,
}

impl XRoot {
    pub fn value(self) -> Complex64 {
        let im = 3f64.sqrt() / 2.0;
        match self {
            XRoot::Minus => Complex64::new(-0.5, -im),
            XRoot::Plus => Complex64::new(-0.5, im),
        }
    }

    pub fn both() -> [XRoot; 2] {
        [XRoot::Minus, XRoot::Plus]
    }

    /// Sign of the imaginary part, as used in the JSON encoding.
    pub fn sign(self) -> i32 {
        match self {
            XRoot::Minus => -1,
            XRoot::Plus => 1,
        }
    }

    pub fn from_sign(sign: i64) -> Option<XRoot> {
        match sign {
            -1 => Some(XRoot::Minus),
            1 => Some(XRoot::Plus),
            _ => None,
        }
    }
}

/// Element `u + v·x` of `ℚ(x)`, `x² + x + 1 = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QOmega {
    pub u: BigRational,
    pub v: BigRational,
}

impl QOmega {
    pub fn new(u: BigRational, v: BigRational) -> Self {
        QOmega { u, v }
    }

    /// `(p/q) + (r/s)·x`. Panics on a zero denominator.
    pub fn from_fractions(p: i64, q: i64, r: i64, s: i64) -> Self {
        QOmega {
            u: BigRational::new(BigInt::from(p), BigInt::from(q)),
            v: BigRational::new(BigInt::from(r), BigInt::from(s)),
        }
    }

    /// `u + v·x` with integer parts.
    pub fn int(u: i64, v: i64) -> Self {
        QOmega::from_fractions(u, 1, v, 1)
    }

    /// The generator `x`.
    pub fn x() -> Self {
        QOmega::int(0, 1)
    }

    /// Field norm `(u + vx)(u + vx̄) = u² − uv + v²`, always a non-negative rational.
    pub fn norm(&self) -> BigRational {
        &self.u * &self.u - &self.u * &self.v + &self.v * &self.v
    }

    pub fn to_complex(&self, root: XRoot) -> Complex64 {
        let u = rational_to_f64(&self.u);
        let v = rational_to_f64(&self.v);
        Complex64::new(u, 0.0) + root.value() * v
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl fmt::Debug for QOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.u.is_zero(), self.v.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.u),
            (true, false) => write!(f, "{}x", self.v),
            (false, false) => {
                if self.v.is_negative() {
                    write!(f, "{}-{}x", self.u, -self.v.clone())
                } else {
                    write!(f, "{}+{}x", self.u, self.v)
                }
            }
        }
    }
}

impl Add for QOmega {
    type Output = QOmega;
    fn add(self, rhs: QOmega) -> QOmega {
        QOmega { u: self.u + rhs.u, v: self.v + rhs.v }
    }
}

impl Sub for QOmega {
    type Output = QOmega;
    fn sub(self, rhs: QOmega) -> QOmega {
        QOmega { u: self.u - rhs.u, v: self.v - rhs.v }
    }
}

impl Mul for QOmega {
    type Output = QOmega;
    fn mul(self, rhs: QOmega) -> QOmega {
        // x² = −x − 1
        let uu = &self.u * &rhs.u;
        let vv = &self.v * &rhs.v;
        let uv = &self.u * &rhs.v + &self.v * &rhs.u;
        QOmega { u: uu - &vv, v: uv - vv }
    }
}

impl Neg for QOmega {
    type Output = QOmega;
    fn neg(self) -> QOmega {
        QOmega { u: -self.u, v: -self.v }
    }
}

impl Scalar for QOmega {
    const EXACT: bool = true;

    fn zero() -> Self {
        QOmega { u: BigRational::zero(), v: BigRational::zero() }
    }

    fn one() -> Self {
        QOmega { u: BigRational::one(), v: BigRational::zero() }
    }

    fn from_i64(n: i64) -> Self {
        QOmega::int(n, 0)
    }

    fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        // conj(u + vx) = (u − v) − vx
        let c = self.conj();
        Some(QOmega { u: c.u / &n, v: c.v / &n })
    }

    fn conj(&self) -> Self {
        QOmega { u: &self.u - &self.v, v: -self.v.clone() }
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.norm()).sqrt()
    }

    fn is_zero_within(&self, _tol: f64) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    fn approx(&self) -> Complex64 {
        // Re(u + vx) = u − v/2 for either root, computed exactly first
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let re = rational_to_f64(&(&self.u - &self.v * half));
        let im = self.to_complex(XRoot::Minus).im;
        Complex64::new(re, im)
    }

    fn from_complex(_z: Complex64) -> Option<Self> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_satisfies_its_minimal_polynomial() {
        let x = QOmega::x();
        let r = x.clone() * x.clone() + x + QOmega::one();
        assert!(r.is_zero());
    }

    #[test]
    fn inverse_and_conjugate() {
        let a = QOmega::from_fractions(3, 2, -5, 7);
        let prod = a.clone() * a.inv().unwrap();
        assert_eq!(prod, QOmega::one());
        assert!(QOmega::zero().inv().is_none());
        // conj is an involutive field automorphism
        let b = QOmega::int(4, 7);
        assert_eq!(a.conj().conj(), a);
        assert_eq!((a.clone() * b.clone()).conj(), a.conj() * b.conj());
    }

    #[test]
    fn complex_specialisation_matches_both_roots() {
        let a = QOmega::int(4, 3);
        for root in XRoot::both() {
            let x = root.value();
            assert!((x * x + x + 1.0).norm() < 1e-15);
            let z = a.to_complex(root);
            assert!((z - (4.0 + 3.0 * x)).norm() < 1e-15);
            assert!((a.conj().to_complex(root) - z.conj()).norm() < 1e-14);
        }
        assert!(XRoot::Minus.value().im < 0.0);
    }

    #[test]
    fn norm_is_multiplicative() {
        let a = QOmega::int(2, -3);
        let b = QOmega::from_fractions(1, 3, 5, 2);
        assert_eq!((a.clone() * b.clone()).norm(), a.norm() * b.norm());
    }
}
