//! Laurent polynomials in `t` and their matrices.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::parabolic::Mat2;
use crate::scalar::Scalar;

/// Radius of the sampling circle of [`det_laurent`] in floating mode.
pub const SAMPLE_RADIUS: f64 = 0.8;
/// Extra samples beyond the degree window.
pub const OVERSAMPLING: usize = 4;
/// Largest accepted interpolation residual, relative to the sampled values.
pub const INTERPOLATION_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly<S> {
    coeffs: BTreeMap<i32, S>,
}

impl<S: Scalar> LaurentPoly<S> {
    pub fn zero() -> Self {
        LaurentPoly { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        LaurentPoly::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        LaurentPoly::monomial(c, 0)
    }

    pub fn monomial(c: S, e: i32) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(e, c);
        p
    }

    /// `Σ coeffs[i] t^(low + i)`.
    pub fn from_coeffs(low: i32, coeffs: impl IntoIterator<Item = S>) -> Self {
        let mut p = LaurentPoly::zero();
        for (i, c) in coeffs.into_iter().enumerate() {
            p.add_term(low + i as i32, c);
        }
        p
    }

    pub fn add_term(&mut self, e: i32, c: S) {
        let sum = match self.coeffs.remove(&e) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(e, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, e: i32) -> S {
        self.coeffs.get(&e).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &S)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut p = LaurentPoly::zero();
        for (e, x) in self.terms() {
            p.add_term(e, c.clone() * x.clone());
        }
        p
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&e, c)| (e + k, c.clone())).collect() }
    }

    /// Drop coefficients with `|c| ≤ tol · max(1, max |c|)`. Exact fields
    /// only ever store nonzero coefficients, so they are returned unchanged.
    pub fn cleaned(&self, tol: f64) -> Self {
        if S::EXACT {
            return self.clone();
        }
        let cut = tol * self.max_abs().max(1.0);
        let snap = |x: f64| if x.abs() > cut { x } else { 0.0 };
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, c)| c.magnitude() > cut)
                .map(|(&e, c)| {
                    let z = c.approx();
                    (e, S::from_complex(Complex64::new(snap(z.re), snap(z.im))).unwrap_or_else(|| c.clone()))
                })
                .collect(),
        }
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.terms().map(|(e, c)| c.approx() * t.powi(e)).sum()
    }

    pub fn approx(&self) -> LaurentPoly<Complex64> {
        let mut p = LaurentPoly::zero();
        for (e, c) in self.terms() {
            p.add_term(e, c.approx());
        }
        p
    }

    /// `(1 − t)²`.
    pub fn one_minus_t_squared() -> Self {
        LaurentPoly::from_coeffs(0, [S::one(), S::from_i64(-2), S::one()])
    }

    /// Quotient and remainder of division by `d`, by long division from the
    /// lowest degree up. The remainder is supported on the top
    /// `deg d − low d` degrees of `self`.
    pub fn div_rem(&self, d: &LaurentPoly<S>) -> Result<(Self, Self)> {
        let d_low = d.min_degree().ok_or_else(|| Error::Singular("division by zero polynomial".into()))?;
        let d_high = d.max_degree().unwrap_or(d_low);
        let lead_inv = d.coeff(d_low).inv().ok_or_else(|| Error::Singular("zero divisor coefficient".into()))?;
        let (Some(low), Some(high)) = (self.min_degree(), self.max_degree()) else {
            return Ok((LaurentPoly::zero(), LaurentPoly::zero()));
        };
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        for e in low - d_low..=high - d_high {
            let c = rem.coeff(e + d_low);
            if c.is_zero() {
                continue;
            }
            let q = c * lead_inv.clone();
            rem = &rem - &d.shift(e).scale(&q);
            // drop the cancelled term exactly even in floating mode
            rem.coeffs.remove(&(e + d_low));
            quot.add_term(e, q);
        }
        Ok((quot, rem))
    }

    /// Divide by `(1 − t)²`. Returns the quotient and the largest remainder
    /// coefficient.
    pub fn div_one_minus_t_squared(&self) -> Result<(Self, f64)> {
        let (q, r) = self.div_rem(&LaurentPoly::one_minus_t_squared())?;
        Ok((q, r.max_abs()))
    }

    /// Normal form up to the unit `±t^p`: lowest degree shifted to 0, and the
    /// constant term with positive real part (positive imaginary part if the
    /// real part vanishes).
    pub fn canonical(&self, tol: f64) -> Self {
        let p = self.cleaned(tol);
        let Some(low) = p.min_degree() else {
            return p;
        };
        let p = p.shift(-low);
        let c = p.coeff(0).approx();
        let tiny = tol * p.max_abs().max(1.0);
        let negative = if c.re.abs() > tiny || (S::EXACT && c.re != 0.0) { c.re < 0.0 } else { c.im < 0.0 };
        if negative {
            -&p
        } else {
            p
        }
    }

    /// `self = ±t^p · other` for some `p`, coefficientwise within `tol`
    /// relative to `max(1, max |c|)` (exactly in exact fields).
    pub fn equal_up_to_unit(&self, other: &Self, tol: f64) -> bool {
        let a = self.cleaned(tol);
        let b = other.cleaned(tol);
        match (a.min_degree(), b.min_degree()) {
            (None, None) => true,
            (Some(la), Some(lb)) => {
                let a = a.shift(-la);
                let b = b.shift(-lb);
                a.close_to(&b, tol) || a.close_to(&(-&b), tol)
            }
            _ => false,
        }
    }

    /// Coefficientwise comparison within `tol` relative to `max(1, max |c|)`.
    pub fn close_to(&self, other: &Self, tol: f64) -> bool {
        let diff = self - other;
        if S::EXACT {
            diff.is_zero()
        } else {
            diff.max_abs() <= tol * self.max_abs().max(other.max_abs()).max(1.0)
        }
    }
}

impl<S: Scalar> Add for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn add(self, o: &LaurentPoly<S>) -> LaurentPoly<S> {
        let mut p = self.clone();
        for (e, c) in o.terms() {
            p.add_term(e, c.clone());
        }
        p
    }
}

impl<S: Scalar> Sub for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn sub(self, o: &LaurentPoly<S>) -> LaurentPoly<S> {
        let mut p = self.clone();
        for (e, c) in o.terms() {
            p.add_term(e, -c.clone());
        }
        p
    }
}

impl<S: Scalar> Neg for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn neg(self) -> LaurentPoly<S> {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c.clone())).collect() }
    }
}

impl<S: Scalar> Mul for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn mul(self, o: &LaurentPoly<S>) -> LaurentPoly<S> {
        let mut p = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in o.terms() {
                p.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        p
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for LaurentPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{e}")?,
            }
        }
        Ok(())
    }
}

/// A 2×2 matrix of Laurent polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentMat2<S> {
    pub entries: [[LaurentPoly<S>; 2]; 2],
}

impl<S: Scalar> LaurentMat2<S> {
    pub fn zero() -> Self {
        LaurentMat2 { entries: std::array::from_fn(|_| std::array::from_fn(|_| LaurentPoly::zero())) }
    }

    pub fn identity() -> Self {
        LaurentMat2::from_mat2(&Mat2::identity(), 0)
    }

    /// `t^e · m`.
    pub fn from_mat2(m: &Mat2<S>, e: i32) -> Self {
        let rows = [[&m.m11, &m.m12], [&m.m21, &m.m22]];
        LaurentMat2 { entries: rows.map(|r| r.map(|x| LaurentPoly::monomial(x.clone(), e))) }
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentPoly<S> {
        &self.entries[i][j]
    }

    pub fn det(&self) -> LaurentPoly<S> {
        let [[a, b], [c, d]] = &self.entries;
        &(a * d) - &(b * c)
    }

    pub fn scale(&self, c: &S) -> Self {
        LaurentMat2 { entries: self.entries.clone().map(|r| r.map(|x| x.scale(c))) }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|p| p.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().flatten().map(|p| p.max_abs()).fold(0.0, f64::max)
    }
}

impl<S: Scalar> Add for &LaurentMat2<S> {
    type Output = LaurentMat2<S>;
    fn add(self, o: &LaurentMat2<S>) -> LaurentMat2<S> {
        LaurentMat2 {
            entries: std::array::from_fn(|i| std::array::from_fn(|j| &self.entries[i][j] + &o.entries[i][j])),
        }
    }
}

impl<S: Scalar> Sub for &LaurentMat2<S> {
    type Output = LaurentMat2<S>;
    fn sub(self, o: &LaurentMat2<S>) -> LaurentMat2<S> {
        LaurentMat2 {
            entries: std::array::from_fn(|i| std::array::from_fn(|j| &self.entries[i][j] - &o.entries[i][j])),
        }
    }
}

impl<S: Scalar> Mul for &LaurentMat2<S> {
    type Output = LaurentMat2<S>;
    fn mul(self, o: &LaurentMat2<S>) -> LaurentMat2<S> {
        LaurentMat2 {
            entries: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    &(&self.entries[i][0] * &o.entries[0][j]) + &(&self.entries[i][1] * &o.entries[1][j])
                })
            }),
        }
    }
}

/// Determinant of a square matrix of Laurent polynomials.
///
/// Exact fields use fraction-free elimination. Floating point evaluates the
/// determinant at `N` points `0.8·e^{2πij/N}` and recovers the coefficients
/// in the known degree window by discrete Fourier projection, where `N`
/// exceeds the window size by [`OVERSAMPLING`]; the fit residual must stay
/// below [`INTERPOLATION_TOLERANCE`].
pub fn det_laurent<S: Scalar>(m: &[Vec<LaurentPoly<S>>]) -> Result<LaurentPoly<S>> {
    check_square(m)?;
    if S::EXACT {
        return det_fraction_free(m);
    }
    let approx: Vec<Vec<LaurentPoly<Complex64>>> = m.iter().map(|r| r.iter().map(|p| p.approx()).collect()).collect();
    let (d, _) = det_interpolated(&approx)?;
    let mut out = LaurentPoly::zero();
    for (e, c) in d.terms() {
        out.add_term(e, S::from_complex(*c).ok_or(Error::NotExact)?);
    }
    Ok(out)
}

fn check_square<S>(m: &[Vec<LaurentPoly<S>>]) -> Result<()> {
    let n = m.len();
    if let Some(r) = m.iter().position(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!("row {r} has {} entries, expected {n}", m[r].len())));
    }
    Ok(())
}

fn degree_window<S: Scalar>(m: &[Vec<LaurentPoly<S>>]) -> Option<(i32, i32)> {
    let lows = m.iter().flatten().filter_map(|p| p.min_degree());
    let highs = m.iter().flatten().filter_map(|p| p.max_degree());
    Some((lows.min()?, highs.max()?))
}

/// Determinant of a complex matrix by LU decomposition with partial pivoting.
pub fn complex_det(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let pivot = (k..n).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm())).expect("nonempty range");
        if a[pivot][k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != k {
            a.swap(pivot, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            let (top, bottom) = a.split_at_mut(i);
            for (x, y) in bottom[0][k..].iter_mut().zip(&top[k][k..]) {
                *x -= f * y;
            }
        }
    }
    det
}

/// Evaluation–interpolation determinant. Returns the polynomial and the
/// relative fit residual.
pub fn det_interpolated(m: &[Vec<LaurentPoly<Complex64>>]) -> Result<(LaurentPoly<Complex64>, f64)> {
    check_square(m)?;
    let n = m.len() as i32;
    if n == 0 {
        return Ok((LaurentPoly::one(), 0.0));
    }
    let Some((low, high)) = degree_window(m) else {
        return Ok((LaurentPoly::zero(), 0.0));
    };
    let (lo, hi) = (n * low, n * high);
    let width = (hi - lo + 1) as usize;
    let samples = width + OVERSAMPLING;

    let points: Vec<Complex64> =
        (0..samples).map(|j| Complex64::from_polar(SAMPLE_RADIUS, 2.0 * PI * j as f64 / samples as f64)).collect();
    // d(t) t^{−lo} is an ordinary polynomial of degree < width
    let values: Vec<Complex64> = points
        .iter()
        .map(|&t| {
            let a = m.iter().map(|r| r.iter().map(|p| p.eval(t)).collect()).collect();
            complex_det(a) * t.powi(-lo)
        })
        .collect();

    let mut coeffs = Vec::with_capacity(width);
    for k in 0..width {
        let s: Complex64 = values
            .iter()
            .enumerate()
            .map(|(j, &v)| v * Complex64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / samples as f64))
            .sum();
        coeffs.push(s / samples as f64 / SAMPLE_RADIUS.powi(k as i32));
    }

    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
    let residual = points
        .iter()
        .zip(&values)
        .map(|(&t, &v)| {
            let fit: Complex64 = coeffs.iter().enumerate().map(|(k, &c)| c * t.powi(k as i32)).sum();
            (fit - v).norm()
        })
        .fold(0.0, f64::max)
        / scale;
    if residual > INTERPOLATION_TOLERANCE {
        return Err(Error::InterpolationResidual(residual));
    }
    Ok((LaurentPoly::from_coeffs(lo, coeffs).cleaned(1e-12), residual))
}

/// Bareiss elimination over the polynomial ring after clearing negative
/// powers row by row; every division is exact.
pub fn det_fraction_free<S: Scalar>(m: &[Vec<LaurentPoly<S>>]) -> Result<LaurentPoly<S>> {
    check_square(m)?;
    let n = m.len();
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    let mut shift = 0;
    let mut a: Vec<Vec<LaurentPoly<S>>> = m
        .iter()
        .map(|row| {
            let low = row.iter().filter_map(|p| p.min_degree()).min().unwrap_or(0);
            shift += low;
            row.iter().map(|p| p.shift(-low)).collect()
        })
        .collect();
    let mut sign = false;
    let mut prev = LaurentPoly::one();
    for k in 0..n {
        let Some(pivot) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Ok(LaurentPoly::zero());
        };
        if pivot != k {
            a.swap(pivot, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                let (q, r) = num.div_rem(&prev)?;
                if !r.is_zero() {
                    return Err(Error::Singular("inexact division in fraction-free elimination".into()));
                }
                a[i][j] = q;
            }
            a[i][k] = LaurentPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].shift(shift);
    Ok(if sign { -&det } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QOmega;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cp(low: i32, coeffs: &[f64]) -> LaurentPoly<Complex64> {
        LaurentPoly::from_coeffs(low, coeffs.iter().map(|&x| c(x, 0.0)))
    }

    /// Cofactor expansion along the first row.
    fn cofactor_det<S: Scalar>(m: &[Vec<LaurentPoly<S>>]) -> LaurentPoly<S> {
        if m.is_empty() {
            return LaurentPoly::one();
        }
        let mut sum = LaurentPoly::zero();
        for j in 0..m.len() {
            let minor: Vec<Vec<LaurentPoly<S>>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect())
                .collect();
            let term = &m[0][j] * &cofactor_det(&minor);
            sum = if j % 2 == 0 { &sum + &term } else { &sum - &term };
        }
        sum
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<LaurentPoly<Complex64>>> {
        (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        LaurentPoly::from_coeffs(
                            0,
                            [
                                c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                                c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                            ],
                        )
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn diagonal_units() {
        let m = vec![vec![cp(1, &[1.0]), cp(0, &[])], vec![cp(0, &[]), cp(-1, &[1.0])]];
        let d = det_laurent(&m).unwrap();
        assert!(d.close_to(&LaurentPoly::one(), 1e-12));
        let q = |e| LaurentPoly::monomial(QOmega::one(), e);
        let z = LaurentPoly::<QOmega>::zero;
        assert_eq!(det_laurent(&[vec![q(1), z()], vec![z(), q(-1)]]).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn interpolation_matches_cofactor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let m = random_matrix(&mut rng, 4);
            let expected = cofactor_det(&m);
            let got = det_laurent(&m).unwrap();
            assert!((&got - &expected).max_abs() < 1e-9, "{got} vs {expected}");
        }
    }

    #[test]
    fn fraction_free_matches_cofactor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..30 {
            let m: Vec<Vec<LaurentPoly<QOmega>>> = (0..4)
                .map(|_| {
                    (0..4)
                        .map(|_| {
                            let low = rng.gen_range(-1..1);
                            let mut g = || QOmega::int(rng.gen_range(-3..4), rng.gen_range(-3..4));
                            LaurentPoly::from_coeffs(low, [g(), g()])
                        })
                        .collect()
                })
                .collect();
            assert_eq!(det_fraction_free(&m).unwrap(), cofactor_det(&m));
        }
    }

    #[test]
    fn singular_matrix_has_zero_determinant() {
        let row = vec![cp(0, &[1.0, 2.0]), cp(0, &[0.0, 1.0])];
        let d = det_laurent(&[row.clone(), row]).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn non_square_is_rejected() {
        let m = vec![vec![cp(0, &[1.0]), cp(0, &[1.0])]];
        assert!(matches!(det_laurent(&m), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn division_by_one_minus_t_squared() {
        let q = cp(-1, &[1.0, 0.0, 1.0]);
        let p = &q * &LaurentPoly::one_minus_t_squared();
        let (got, rem) = p.div_one_minus_t_squared().unwrap();
        assert!(rem < 1e-12);
        assert!(got.close_to(&q, 1e-12));
        let (_, rem) = cp(0, &[1.0, 1.0]).div_one_minus_t_squared().unwrap();
        assert!(rem > 0.1);
    }

    #[test]
    fn units() {
        let q = cp(0, &[1.0, -4.0, 1.0]);
        assert!(q.shift(1).equal_up_to_unit(&q, 1e-12));
        assert!((-&q).equal_up_to_unit(&q, 1e-12));
        assert!(!cp(0, &[1.0, 0.0, 1.0]).equal_up_to_unit(&q, 1e-12));
        assert_eq!((-&q.shift(-3)).canonical(1e-9), q);
    }

    #[test]
    fn canonical_sign_uses_imaginary_part_when_real_vanishes() {
        let p = LaurentPoly::from_coeffs(2, [c(0.0, -1.0), c(3.0, 0.0)]);
        let n = p.canonical(1e-9);
        assert_eq!(n.coeff(0), c(0.0, 1.0));
        let e = LaurentPoly::from_coeffs(0, [QOmega::int(1, 2), QOmega::int(0, 1)]);
        // Re(1 + 2x) = 0, Im(1 + 2x) < 0 for the default root
        assert_eq!(e.canonical(0.0).coeff(0), QOmega::int(-1, -2));
    }
}
