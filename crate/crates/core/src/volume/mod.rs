//! Complex volume from the dilogarithm potential of a diagram.
//!
//! Each face `k` carries a variable `w_k`. A crossing with quadrant faces
//! `a, b, c, d` contributes
//!
//! ```text
//! W_j = ±( −Li₂(w_c/w_b) − Li₂(w_c/w_d) + Li₂(w_a w_c/(w_b w_d))
//!          + Li₂(w_b/w_a) + Li₂(w_d/w_a) − π²/6 + log(w_b/w_a)·log(w_d/w_a) )
//! ```
//!
//! with the sign of the crossing. At `w_k = det(p, s_k)` the log-derivatives
//! `g_k = w_k ∂W/∂w_k` lie in `2πi ℤ`, and
//! `W₀ = W − Σ g_k log w_k ≡ i(vol + i cs) (mod π²)`.

pub mod dilog;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use dilog::{clog, dilog};

use crate::coloring::ShadowColoring;
use crate::diagram::{OrientedDiagram, Quadrant, Sign};
use crate::error::{Error, Result};
use crate::parabolic::det2;
use crate::scalar::Scalar;

/// Default bound on `|exp(g_k) − 1|` and on the distance of `g_k/(2πi)` to
/// an integer.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Distance to the branch point `1` below which a dilogarithm derivative is
/// refused.
pub const BRANCH_TOLERANCE: f64 = 1e-12;

/// Dilogarithm terms of a positive crossing: coefficient and exponents of
/// `(w_a, w_b, w_c, w_d)` in the argument.
const DILOG_TERMS: [(f64, [i32; 4]); 5] =
    [(-1.0, [0, -1, 1, 0]), (-1.0, [0, 0, 1, -1]), (1.0, [1, -1, 1, -1]), (1.0, [-1, 1, 0, 0]), (1.0, [-1, 0, 0, 1])];

fn monomial(w: &[Complex64; 4], exps: &[i32; 4]) -> Complex64 {
    let mut r = Complex64::new(1.0, 0.0);
    for (x, &e) in w.iter().zip(exps) {
        match e {
            1 => r *= x,
            -1 => r /= x,
            _ => {}
        }
    }
    r
}

fn sign_factor(sign: Sign) -> f64 {
    sign.value() as f64
}

fn check_nonzero(w: &[Complex64; 4]) -> Result<()> {
    if w.iter().any(|x| x.re == 0.0 && x.im == 0.0) {
        Err(Error::ZeroArgument)
    } else {
        Ok(())
    }
}

/// Potential `W_j` of one crossing.
pub fn crossing_potential(sign: Sign, wa: Complex64, wb: Complex64, wc: Complex64, wd: Complex64) -> Result<Complex64> {
    let w = [wa, wb, wc, wd];
    check_nonzero(&w)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (coeff, exps) in &DILOG_TERMS {
        sum += coeff * dilog(monomial(&w, exps));
    }
    sum -= dilog::PI2_6;
    sum += clog(wb / wa) * clog(wd / wa);
    Ok(sign_factor(sign) * sum)
}

/// `w_q ∂W_j/∂w_q` for the four quadrants of one crossing.
pub fn crossing_gradient(sign: Sign, w: [Complex64; 4]) -> Result<[Complex64; 4]> {
    check_nonzero(&w)?;
    let one = Complex64::new(1.0, 0.0);
    let mut g = [Complex64::new(0.0, 0.0); 4];
    for (coeff, exps) in &DILOG_TERMS {
        let r = monomial(&w, exps);
        if (one - r).norm() < BRANCH_TOLERANCE {
            return Err(Error::BranchPoint);
        }
        // z d/dz Li₂(z) = −log(1 − z)
        let d = -clog(one - r);
        for (gk, &e) in g.iter_mut().zip(exps) {
            *gk += coeff * e as f64 * d;
        }
    }
    let lb = clog(w[1] / w[0]);
    let ld = clog(w[3] / w[0]);
    g[0] -= lb + ld;
    g[1] += ld;
    g[3] += lb;
    let s = sign_factor(sign);
    Ok(g.map(|x| s * x))
}

fn quadrant_values(d: &OrientedDiagram, w: &[Complex64], crossing: usize) -> [Complex64; 4] {
    let c = &d.crossings()[crossing];
    Quadrant::ALL.map(|q| w[c.face(q)])
}

fn check_len(d: &OrientedDiagram, w: &[Complex64]) -> Result<()> {
    if w.len() < d.face_count() {
        return Err(Error::MissingFaceValue(w.len()));
    }
    if w.len() > d.face_count() {
        return Err(Error::InvalidFace(d.face_count()));
    }
    Ok(())
}

/// `W = Σ_j W_j`, summed in crossing order.
pub fn potential(d: &OrientedDiagram, w: &[Complex64]) -> Result<Complex64> {
    check_len(d, w)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (i, c) in d.crossings().iter().enumerate() {
        let [a, b, cc, dd] = quadrant_values(d, w, i);
        sum += crossing_potential(c.sign, a, b, cc, dd)?;
    }
    Ok(sum)
}

/// `g_k = w_k ∂W/∂w_k` for every face.
pub fn potential_gradient(d: &OrientedDiagram, w: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(d, w)?;
    let mut g = vec![Complex64::new(0.0, 0.0); d.face_count()];
    for (i, c) in d.crossings().iter().enumerate() {
        let local = crossing_gradient(c.sign, quadrant_values(d, w, i))?;
        for (q, x) in Quadrant::ALL.iter().zip(local) {
            g[c.face(*q)] += x;
        }
    }
    Ok(g)
}

fn residual(g: Complex64) -> f64 {
    (g.exp() - 1.0).norm()
}

/// `|exp(g_k) − 1|` for every face.
pub fn hyperbolicity_residuals(d: &OrientedDiagram, w: &[Complex64]) -> Result<Vec<f64>> {
    Ok(potential_gradient(d, w)?.into_iter().map(residual).collect())
}

/// `w_k = det(p, s_k)` for every face.
pub fn solution_from_shadow<S: Scalar>(shadow: &ShadowColoring<S>) -> Result<Vec<S>> {
    shadow
        .regions
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let w = det2(&shadow.p, s);
            if w.is_zero() {
                Err(Error::ZeroDeterminant(k))
            } else {
                Ok(w)
            }
        })
        .collect()
}

/// Value of `W₀` together with the solution check it depends on.
#[derive(Clone, Debug, PartialEq)]
pub struct W0Value {
    pub value: Complex64,
    pub potential: Complex64,
    pub gradient: Vec<Complex64>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// Largest distance of `g_k/(2πi)` to an integer.
    pub max_winding_defect: f64,
    /// Both the residuals and the winding defects are within tolerance.
    /// When false, `value` is not the complex volume.
    pub residual_ok: bool,
}

/// `W₀ = W − Σ g_k log w_k` with principal logarithms. Points that do not
/// solve the hyperbolicity equations are flagged rather than rejected.
pub fn w0_value(d: &OrientedDiagram, w: &[Complex64], tol: f64) -> Result<W0Value> {
    let potential = potential(d, w)?;
    let gradient = potential_gradient(d, w)?;
    let residuals: Vec<f64> = gradient.iter().map(|&g| residual(g)).collect();
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let max_winding_defect = gradient
        .iter()
        .map(|&g| {
            let m = g / two_pi_i;
            (m.re - m.re.round()).abs().max(m.im.abs())
        })
        .fold(0.0, f64::max);
    let correction: Complex64 = gradient.iter().zip(w).map(|(&g, &x)| g * clog(x)).sum();
    Ok(W0Value {
        value: potential - correction,
        potential,
        gradient,
        residuals,
        max_residual,
        max_winding_defect,
        residual_ok: max_residual < tol && max_winding_defect < tol,
    })
}

/// `cs` reduced into `(−π²/2, π²/2]`.
pub fn reduce_cs(cs: f64) -> f64 {
    let p2 = PI * PI;
    cs - p2 * ((cs - p2 / 2.0) / p2).ceil()
}

/// Distance between two Chern–Simons values modulo `π²`.
pub fn cs_distance(a: f64, b: f64) -> f64 {
    reduce_cs(a - b).abs()
}

/// `vol + i·cs`, with `cs` reduced into `(−π²/2, π²/2]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexVolume {
    pub vol: f64,
    pub cs: f64,
}

impl ComplexVolume {
    /// From `W₀ ≡ i(vol + i cs)`.
    pub fn from_w0(w0: Complex64) -> Self {
        ComplexVolume { vol: w0.im, cs: reduce_cs(-w0.re) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolumeReport {
    pub volume: ComplexVolume,
    pub w0: Complex64,
    pub max_residual: f64,
    pub residual_ok: bool,
}

/// Complex volume of the representation behind a shadow coloring.
pub fn complex_volume(shadow: &ShadowColoring<Complex64>, tol: f64) -> Result<VolumeReport> {
    let w = solution_from_shadow(shadow)?;
    let w0 = w0_value(shadow.diagram(), &w, tol)?;
    Ok(VolumeReport {
        volume: ComplexVolume::from_w0(w0.value),
        w0: w0.value,
        max_residual: w0.max_residual,
        residual_ok: w0.residual_ok,
    })
}
