//! Classical closed-form and series reference solutions used as
//! cross-validation oracles and CLI comparison targets.

use crate::error::SeriesError;
use crate::solver::TankParameters;
use crate::special::{erfc, erfcx};
#[allow(unused_imports)] // float math trait; required for no_std builds
use num_traits::Float;

/// Dimensionless half-line profile for constant diffusivity and
/// conductivity linear in the content:
///
/// `theta_P(x, t) = 1/2 [erfc((x - kappa t)/(2 sqrt(d0 t)))
///                + e^{kappa x/d0} erfc((x + kappa t)/(2 sqrt(d0 t)))]`
///
/// with front speed `kappa = k0/(theta1 - theta0)`. The exponential-times-
/// erfc product is evaluated through the scaled complementary error
/// function: `kappa x / d0` reaches several hundred at field scales while
/// the product stays within `[0, 1]`.
pub fn philip_theta(x: f64, t: f64, d0: f64, k0: f64, theta0: f64, theta1: f64) -> f64 {
    debug_assert!(t > 0.0 && x >= 0.0 && theta1 > theta0 && d0 > 0.0);
    if x == 0.0 {
        return 1.0;
    }
    let kappa = k0 / (theta1 - theta0);
    let denom = 2.0 * (d0 * t).sqrt();
    let zm = (x - kappa * t) / denom;
    let zp = (x + kappa * t) / denom;
    // e^{kappa x/d0} erfc(zp) = e^{-zm^2} erfcx(zp), using zp^2 - zm^2 = kappa x/d0.
    debug_assert!(zp >= 0.0);
    0.5 * (erfc(zm) + (-zm * zm).exp() * erfcx(zp))
}

/// Truncation control of the eigenfunction series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub max_terms: usize,
    /// Stop once the term bound `e^{-mu_k t} lambda_k / mu_k` falls below
    /// this tolerance.
    pub tail_tol: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            max_terms: 10_000,
            tail_tol: 1e-12,
        }
    }
}

/// Outcome of a converged series evaluation.
#[derive(Debug, Clone, Copy)]
pub struct SeriesValue {
    pub value: f64,
    pub terms_used: usize,
    pub tail_bound: f64,
}

/// Eigenfunction-series solution of the tank scenario:
///
/// `h_T(x,t) = (1/a) log[(1-eps) e^{a(L-x)/2} (sinh(ax/2)/sinh(aL/2)
///     + (2 d1/L) sum_k (-1)^k (lambda_k/mu_k) sin(lambda_k x) e^{-mu_k t}) + eps]`
///
/// with `lambda_k = pi k / L` and `mu_k = d1 (a^2/4 + lambda_k^2)`. The
/// steady factor is evaluated as `(1 - e^{-a x})/(1 - e^{-a L})`, the exact
/// overflow-free form of the sinh ratio.
pub fn tracy_series(
    x: f64,
    t: f64,
    params: &TankParameters,
    ctl: &SeriesControl,
) -> Result<SeriesValue, SeriesError> {
    debug_assert!(t > 0.0, "series converges for t > 0");
    let a = params.a;
    let length = params.length;
    let d1 = params.d1();
    let eps = params.eps();
    let steady = (-a * x).exp_m1() / (-a * length).exp_m1();

    let mut series = 0.0f64;
    let mut terms_used = 0usize;
    let mut tail_bound = f64::INFINITY;
    let mut sign = -1.0; // (-1)^k starting at k = 1
    for k in 1..=ctl.max_terms {
        let lam_k = core::f64::consts::PI * k as f64 / length;
        let mu_k = d1 * (0.25 * a * a + lam_k * lam_k);
        let decay = (-mu_k * t).exp();
        tail_bound = lam_k / mu_k * decay;
        series += sign * (lam_k / mu_k) * (lam_k * x).sin() * decay;
        sign = -sign;
        terms_used = k;
        if tail_bound < ctl.tail_tol {
            break;
        }
    }
    if tail_bound >= ctl.tail_tol {
        return Err(SeriesError::NotConverged {
            terms: terms_used,
            tail_bound,
        });
    }
    let argument =
        (1.0 - eps) * (steady + (0.5 * a * (length - x)).exp() * (2.0 * d1 / length) * series)
            + eps;
    if !(argument > 0.0) {
        return Err(SeriesError::LogDomain { argument });
    }
    Ok(SeriesValue {
        value: argument.ln() / a,
        terms_used,
        tail_bound,
    })
}

/// Steady-state tank head `(1/a) log[(1-eps)(1 - e^{-a x})/(1 - e^{-a L}) + eps]`,
/// the `t -> inf` limit of [`tracy_series`].
pub fn tracy_steady(x: f64, params: &TankParameters) -> f64 {
    let a = params.a;
    let eps = params.eps();
    let steady = (-a * x).exp_m1() / (-a * params.length).exp_m1();
    ((1.0 - eps) * steady + eps).ln() / a
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn case1_params() -> TankParameters {
        // Day-scale tank benchmark in cm-s base units.
        TankParameters {
            a: 0.001,
            ks: 1e-4,
            theta1: 0.45,
            theta0: 0.15,
            h0: -2000.0,
            length: 5000.0,
        }
    }

    #[test]
    fn philip_surface_and_small_time_limits() {
        assert_eq!(philip_theta(0.0, 10.0, 0.4653, 0.0012, 0.025, 0.335), 1.0);
        // fixed x > 0, t -> 0+: both terms vanish
        let v = philip_theta(10.0, 1e-9, 0.4653, 0.0012, 0.025, 0.335);
        assert!(v.abs() < 1e-300);
    }

    #[test]
    fn philip_frozen_midprofile_value() {
        // 30-digit evaluation at x = 70 cm, t = 30 min, flooding case-2
        // coefficients.
        let v = philip_theta(70.0, 1800.0, 0.4653, 4.32 / 3600.0, 0.025, 0.335);
        assert!(
            (v - 0.115503366299881395).abs() < 1e-13,
            "theta_P = {v}"
        );
    }

    #[test]
    fn philip_range_and_monotonicity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let d0 = rng.gen_range(0.05..2.0);
            let k0 = rng.gen_range(0.0..0.01);
            let t = rng.gen_range(1.0..5000.0);
            let step = rng.gen_range(0.5..3.0);
            let mut prev = f64::INFINITY;
            for i in 0..50 {
                let x = i as f64 * step;
                let v = philip_theta(x, t, d0, k0, 0.0, 1.0);
                assert!((0.0..=1.0 + 1e-12).contains(&v), "out of range {v}");
                assert!(v <= prev + 1e-12, "not nonincreasing in x");
                prev = v;
            }
        }
    }

    #[test]
    fn tracy_boundary_identities() {
        let p = case1_params();
        let ctl = SeriesControl::default();
        for &t in &[8640.0, 86400.0, 864000.0] {
            // x = 0: all sine terms vanish, argument = eps, h = h0
            let v = tracy_series(0.0, t, &p, &ctl).unwrap().value;
            assert!((v - p.h0).abs() < 1e-9 * p.h0.abs(), "h(0) = {v}");
            // x = L: sin(pi k) = 0, steady ratio 1, argument 1, h = 0
            let v = tracy_series(p.length, t, &p, &ctl).unwrap().value;
            assert!(v.abs() < 1e-9 * p.h0.abs(), "h(L) = {v}");
        }
    }

    #[test]
    fn tracy_long_time_tends_to_steady() {
        let p = case1_params();
        let ctl = SeriesControl::default();
        let t = 5e9; // far beyond the slowest mode
        for &x in &[1000.0, 2500.0, 4500.0] {
            let hs = tracy_steady(x, &p);
            let ht = tracy_series(x, t, &p, &ctl).unwrap().value;
            assert!((ht - hs).abs() < 1e-8 * (1.0 + hs.abs()), "{ht} vs {hs}");
        }
    }

    #[test]
    fn tracy_reports_nonconvergence() {
        let p = case1_params();
        let ctl = SeriesControl {
            max_terms: 10,
            tail_tol: 1e-12,
        };
        let r = tracy_series(2500.0, 8640.0, &p, &ctl);
        assert!(matches!(r, Err(SeriesError::NotConverged { .. })));
    }

    /// The term count needed for a 1e-8 tail at the earliest benchmark time
    /// exceeds 50; the contour representation needs none of this.
    #[test]
    fn tracy_term_count_documented() {
        let p = case1_params();
        let ctl = SeriesControl {
            max_terms: 100_000,
            tail_tol: 1e-8,
        };
        let r = tracy_series(2500.0, 0.1 * 86400.0, &p, &ctl).unwrap();
        assert!(
            r.terms_used > 50,
            "terms at the smallest benchmark time: {}",
            r.terms_used
        );
    }
}
