//! The principal branch of the dilogarithm `Li₂(z) = −∫₀ᶻ log(1−t)/t dt`.
//!
//! Near the origin the series in `u = −log(1−z)` with Bernoulli
//! coefficients is used; elsewhere the inversion `z ↦ 1/z` and reflection
//! `z ↦ 1−z` formulas reduce to that case. On the cut `(1, ∞)` the value
//! is the limit from below the real axis.

use std::f64::consts::PI;

use num_complex::Complex64;

/// `B_{2k} / (2k+1)!` for `k = 1..=22`.
const BERNOULLI: [f64; 22] = [
    0.027777777777777776,
    -0.0002777777777777778,
    4.72411186696901e-06,
    -9.185773074661964e-08,
    1.8978869988971e-09,
    -4.0647616451442256e-11,
    8.921691020456452e-13,
    -1.9939295860721074e-14,
    4.518980029619918e-16,
    -1.0356517612181247e-17,
    2.395218621026187e-19,
    -5.581785874325009e-21,
    1.3091507554183213e-22,
    -3.0874198024267403e-24,
    7.315975652702203e-26,
    -1.740845657234001e-27,
    4.1576356446139e-29,
    -9.962148488284622e-31,
    2.3940344248961652e-32,
    -5.76834735536739e-34,
    1.393179479647008e-35,
    -3.3721219654850894e-37,
];

pub const PI2_6: f64 = PI * PI / 6.0;

/// Principal logarithm with `Im ∈ (−π, π]`. A negative zero imaginary part
/// is read as zero, so negative reals map to `log|z| + iπ`.
pub fn clog(z: Complex64) -> Complex64 {
    let z = if z.im == 0.0 { Complex64::new(z.re, 0.0) } else { z };
    z.ln()
}

pub fn dilog(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if z == one {
        return Complex64::new(PI2_6, 0.0);
    }
    if z.norm_sqr() > 1.0 {
        let l = clog(-z);
        return -dilog(one / z) - PI2_6 - 0.5 * l * l;
    }
    if z.re > 0.5 {
        return PI2_6 - clog(z) * clog(one - z) - dilog(one - z);
    }
    let u = -clog(one - z);
    let u2 = u * u;
    let mut sum = u - 0.25 * u2;
    let mut power = u;
    for b in BERNOULLI {
        power *= u2;
        let term = b * power;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Direct summation of `Σ zⁿ/n²` for `|z| ≤ 1`, with the Euler–Maclaurin
    /// tail `1/N − 1/(2N²) + 1/(6N³)` when `z = 1`.
    fn series(z: Complex64, terms: usize) -> Complex64 {
        let mut sum = c(0.0, 0.0);
        let mut p = c(1.0, 0.0);
        for n in 1..=terms {
            p *= z;
            sum += p / (n * n) as f64;
        }
        if z == c(1.0, 0.0) {
            let n = terms as f64;
            sum += 1.0 / n - 0.5 / (n * n) + 1.0 / (6.0 * n * n * n);
        }
        sum
    }

    #[test]
    fn special_values() {
        assert_eq!(dilog(c(0.0, 0.0)), c(0.0, 0.0));
        assert!((dilog(c(1.0, 0.0)) - series(c(1.0, 0.0), 100_000)).norm() < 1e-12);
        assert!((dilog(c(-1.0, 0.0)) - series(c(-1.0, 0.0), 1_000_000)).norm() < 1e-12);
        assert!((dilog(c(1.0, 0.0)).re - PI * PI / 6.0).abs() < 1e-12);
        assert!((dilog(c(-1.0, 0.0)).re + PI * PI / 12.0).abs() < 1e-12);
    }

    #[test]
    fn matches_direct_series_inside_disk() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let r: f64 = rng.gen_range(0.0..0.8);
            let t: f64 = rng.gen_range(-PI..PI);
            let z = Complex64::from_polar(r, t);
            assert!((dilog(z) - series(z, 200)).norm() < 1e-13);
        }
    }

    #[test]
    fn matches_reference_values() {
        // 30-digit reference values
        let cases = [
            (c(0.5, 0.5), c(0.45398526915029558331, 0.64376733288926874874)),
            (c(-3.0, 0.2), c(-1.9407883506584308323, 0.092384593555595158863)),
            (c(2.0, 0.0), c(2.4674011002723396547, -2.1775860903036021305)),
            (c(10.0, -4.0), c(-0.74551749506492932927, -6.5985911842247403767)),
            (c(900.0, 100.0), c(-20.230786211913873778, 20.636336260830553489)),
            (c(-1000.0, 0.0), c(-25.502475813889968833, 0.0)),
            (c(0.99, 0.1), c(1.4779099615334770724, 0.32436904842102658379)),
            (c(1.5, -1e-7), c(2.3743950608329781684, -1.2738062511294195496)),
            (c(0.0, 1.0), c(-0.20561675835602830456, 0.91596559417721901505)),
        ];
        for (z, expected) in cases {
            assert!((dilog(z) - expected).norm() < 1e-12, "{z}: {} vs {expected}", dilog(z));
        }
    }

    #[test]
    fn reflection_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let one = c(1.0, 0.0);
        for _ in 0..100 {
            let z = Complex64::from_polar(rng.gen_range(0.01..0.99), rng.gen_range(-PI..PI));
            let lhs = dilog(z) + dilog(one - z);
            let rhs = PI2_6 - clog(z) * clog(one - z);
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn duplication_identity() {
        // Li₂(z) + Li₂(−z) = ½ Li₂(z²)
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let z = Complex64::from_polar(rng.gen_range(0.0..0.99), rng.gen_range(-PI..PI));
            assert!((dilog(z) + dilog(-z) - 0.5 * dilog(z * z)).norm() < 1e-12);
        }
    }

    #[test]
    fn negative_zero_is_normalised() {
        assert_eq!(clog(c(-2.0, -0.0)).im, PI);
        assert_eq!(dilog(c(3.0, -0.0)), dilog(c(3.0, 0.0)));
    }
}
