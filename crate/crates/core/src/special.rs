//! Small special-function kernel: complementary error function, its scaled
//! variant, and stable exponential-difference quotients used by the
//! transforms and integrands.

use crate::C64;
#[allow(unused_imports)] // float math trait; required for no_std builds
use num_traits::Float;

/// Complementary error function, `erfc(x) = 1 - erf(x)`.
#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Error function.
#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Scaled complementary error function `erfcx(x) = e^{x^2} erfc(x)`.
///
/// Direct evaluation of the product is exact-enough up to x = 26 (both
/// factors representable); beyond that the asymptotic series in 1/(2x^2) is
/// already at machine accuracy.
pub fn erfcx(x: f64) -> f64 {
    if x < 0.0 {
        // erfcx(-x) = 2 e^{x^2} - erfcx(x); overflows for x << -26, which is
        // outside every use in this crate.
        return 2.0 * (x * x).exp() - erfcx(-x);
    }
    if x <= 26.0 {
        return (x * x).exp() * libm::erfc(x);
    }
    // Asymptotic: erfcx(x) ~ 1/(x sqrt(pi)) * sum (-1)^n (2n-1)!! / (2x^2)^n.
    let inv = 0.5 / (x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..12 {
        term *= -((2 * n - 1) as f64) * inv;
        let next = sum + term;
        if next == sum {
            break;
        }
        sum = next;
    }
    sum / (x * core::f64::consts::PI.sqrt())
}

/// Complex `e^z - 1` without cancellation for small `|z|`.
pub fn cexpm1(z: C64) -> C64 {
    let (x, y) = (z.re, z.im);
    // e^{x+iy} - 1 = expm1(x) cos y - 2 sin^2(y/2) + i e^x sin y
    let half = (0.5 * y).sin();
    C64::new(x.exp_m1() * y.cos() - 2.0 * half * half, x.exp() * y.sin())
}

/// `phi1(z) = (e^z - 1)/z`, the first exponential quotient; `phi1(0) = 1`.
pub fn phi1(z: C64) -> C64 {
    if z.norm_sqr() < 1e-8 {
        // |z| < 1e-4: quartic series, relative error below 1e-19.
        C64::new(1.0, 0.0) + z * (0.5 + 1.0 / 6.0 * z + 1.0 / 24.0 * z * z)
    } else {
        cexpm1(z) / z
    }
}

/// `em1(z) = (1 - e^{-z})/z`, bounded for Re z >= 0; `em1(0) = 1`.
#[inline]
pub fn em1(z: C64) -> C64 {
    phi1(-z)
}

/// `em2(z) = int_0^1 u e^{-zu} du = (1 - (1+z) e^{-z}) / z^2`; `em2(0) = 1/2`.
///
/// The direct form cancels badly for moderate `|z|`; a series is used below
/// `|z| = 0.5`.
pub fn em2(z: C64) -> C64 {
    if z.norm() < 0.5 {
        // sum_{k>=0} (-z)^k (k+1)/(k+2)!
        let mut sum = C64::new(0.0, 0.0);
        let mut pow = C64::new(1.0, 0.0);
        let mut fact = 2.0; // (k+2)! running
        for k in 0..24u32 {
            let term = pow * ((k + 1) as f64 / fact);
            sum += term;
            if term.norm_sqr() < 1e-64 {
                break;
            }
            pow *= -z;
            fact *= (k + 3) as f64;
        }
        sum
    } else {
        let emz = (-z).exp();
        (C64::new(1.0, 0.0) - (C64::new(1.0, 0.0) + z) * emz) / (z * z)
    }
}

/// `sinh(y) / (1 - e^{-z})` evaluated without overflow for `|y| <= |z|/2 + O(1)`,
/// the regime of the residue closed form. Handles both signs of `z`.
pub fn sinh_over_one_minus_exp(y: f64, z: f64) -> f64 {
    if z > 0.0 {
        let denom = -(-z).exp_m1(); // 1 - e^{-z} in (0, 1]
        if y.abs() < 700.0 {
            y.sinh() / denom
        } else {
            // sinh(y) ~ sign(y) e^{|y|}/2; fold the denominator into the exponent.
            let ln = y.abs() - (2.0 * denom).ln();
            y.signum() * ln.exp()
        }
    } else {
        // 1 - e^{-z} = -e^{-z}(1 - e^{z}); e^{z} sinh(y) stays bounded since
        // z + |y| <= z/2 < 0 in the intended regime.
        let denom = -(z).exp_m1(); // 1 - e^{z} in (0, 1]
        let num = 0.5 * ((z + y).exp() - (z - y).exp());
        -num / denom
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erfcx_matches_reference() {
        // Frozen from a 30-digit evaluation of e^{x^2} erfc(x).
        let cases = [
            (0.5, 0.615690344192925875),
            (1.0, 0.427583576155807004),
            (5.0, 0.110704637733068626),
            (26.0, 0.021683584850562907),
            (30.0, 0.018795888861416751),
            (100.0, 0.005641613782989433),
        ];
        for (x, want) in cases {
            let got = erfcx(x);
            assert!(
                (got - want).abs() <= 1e-13 * want,
                "erfcx({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn erfcx_negative_branch() {
        let x: f64 = -1.5;
        let direct = (x * x).exp() * libm::erfc(x);
        assert!((erfcx(x) - direct).abs() < 1e-12 * direct.abs());
    }

    #[test]
    fn cexpm1_small_arguments() {
        let z = C64::new(1e-9, -2e-9);
        let got = cexpm1(z);
        // e^z - 1 = z + z^2/2 + ...
        let want = z + 0.5 * z * z;
        assert!((got - want).norm() < 1e-24);
        // and a moderate argument against the direct form
        let z = C64::new(0.7, -1.3);
        assert!((cexpm1(z) - (z.exp() - C64::new(1.0, 0.0))).norm() < 1e-15);
    }

    #[test]
    fn phi_quotients() {
        assert!((phi1(C64::new(0.0, 0.0)) - C64::new(1.0, 0.0)).norm() < 1e-16);
        assert!((em2(C64::new(0.0, 0.0)) - C64::new(0.5, 0.0)).norm() < 1e-16);
        // em2 continuity across the series/direct switch
        for s in [0.499, 0.501] {
            let z = C64::new(s, 0.3 * s);
            let direct = (C64::new(1.0, 0.0) - (C64::new(1.0, 0.0) + z) * (-z).exp()) / (z * z);
            assert!((em2(z) - direct).norm() < 1e-13);
        }
        // em1 against exact value
        let z = C64::new(2.0, 1.0);
        let want = (C64::new(1.0, 0.0) - (-z).exp()) / z;
        assert!((em1(z) - want).norm() < 1e-15);
    }

    #[test]
    fn sinh_ratio_stable_forms() {
        // moderate regime agrees with the naive formula
        for (y, z) in [(0.3, 1.0), (-0.2, 0.7), (0.05, 0.1), (2.0, 5.0)] {
            let naive = y.sinh() / (-(-z as f64).exp_m1());
            assert!((sinh_over_one_minus_exp(y, z) - naive).abs() < 1e-13 * naive.abs());
        }
        // negative z (reversed advection): 1 - e^{-z} < 0
        let (y, z) = (1.0, -4.0);
        let naive = y.sinh() / (1.0 - (-z).exp());
        assert!((sinh_over_one_minus_exp(y, z) - naive).abs() < 1e-13 * naive.abs());
        // huge arguments stay finite where the naive sinh would overflow
        let v = sinh_over_one_minus_exp(500.0, 1000.0);
        assert!(v.is_finite() && v > 0.0);
        let v = sinh_over_one_minus_exp(-400.0, -800.0);
        assert!(v.is_finite());
    }
}
