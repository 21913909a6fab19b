//! Spectral transforms of the initial and boundary data.
//!
//! Time transforms are exported in damped form: the representation always
//! consumes `e^{-w t} * int_0^t e^{w tau} data(tau) dtau`, and the plain
//! transform overflows double precision long before the damped product does
//! (`|e^{w t}|` reaches 1e300+ at quadrature nodes while the damped product
//! stays below `sup|data| * t` for `Re w >= 0`). [`TimeTransform::damped`]
//! therefore returns the damped product; pair it accordingly.

use crate::error::QuadError;
use crate::quadrature::adaptive_complex;
use crate::special::{em1, em2, erfc};
use crate::spectral::{BoundaryData, InitialData, ProfileProblem};
use crate::C64;
#[allow(unused_imports)] // float math trait; required for no_std builds
use num_traits::Float;

/// Finite-interval Fourier transform of the initial data at `t = 0`:
/// `int_0^L e^{-i lambda x} theta0(x) dx`.
///
/// Constant data use the closed form `c (1 - e^{-i lambda L})/(i lambda)`
/// through a series-stable quotient (the removable value at `lambda = 0` is
/// `c L`); tabulated data are integrated exactly per linear segment.
pub fn hat_theta0(problem: &ProfileProblem, lambda: C64) -> C64 {
    let length = problem.length();
    match problem.initial() {
        InitialData::Zero => C64::new(0.0, 0.0),
        InitialData::Constant(c) => hat_theta0_constant(*c, length, lambda),
        InitialData::Tabulated(samples) => {
            let i = C64::new(0.0, 1.0);
            let mut sum = C64::new(0.0, 0.0);
            for pair in samples.windows(2) {
                let (xa, va) = pair[0];
                let (xb, vb) = pair[1];
                let h = xb - xa;
                let slope = (vb - va) / h;
                let z = i * lambda * h;
                sum += (-i * lambda * xa).exp() * (va * h * em1(z) + slope * h * h * em2(z));
            }
            sum
        }
    }
}

/// Closed form of [`hat_theta0`] for constant data `c` on `[0, L]`.
pub fn hat_theta0_constant(c: f64, length: f64, lambda: C64) -> C64 {
    c * length * em1(C64::new(0.0, 1.0) * lambda * length)
}

/// Transform of the constant boundary value `c`:
/// `int_0^t e^{w tau} c dtau = c (e^{w t} - 1)/w`, with the series-stable
/// removable form `c t (1 + wt/2 + (wt)^2/6 + ...)` for small `|w t|`.
///
/// This is the plain (undamped) transform; it overflows for large
/// `Re(w) t` by design. The solvers use [`TimeTransform::damped`].
pub fn tilde_const(c: f64, w: C64, t: f64) -> C64 {
    let zt = w * t;
    if zt.norm() < 1e-6 {
        c * t * (C64::new(1.0, 0.0) + zt * (0.5 + zt * (1.0 / 6.0)))
    } else {
        c * crate::special::cexpm1(zt) / w
    }
}

/// The constant-flux rainfall boundary function
/// `f2(t) = 1/2 [erfc(-sqrt(ka t)/2) - (1 + ka t) erfc(sqrt(ka t)/2)
///          + 2 sqrt(ka t / pi) e^{-ka t / 4}]`.
///
/// Monotone from 0 at `t = 0` to 1 as `t -> inf`.
pub fn braester_f2(t: f64, ka: f64) -> f64 {
    debug_assert!(ka > 0.0 && t >= 0.0);
    let v = ka * t;
    if v == 0.0 {
        return 0.0;
    }
    let s = v.sqrt();
    0.5 * (erfc(-0.5 * s) - (1.0 + v) * erfc(0.5 * s)
        + 2.0 * (v / core::f64::consts::PI).sqrt() * (-0.25 * v).exp())
}

/// Damped time transform of a boundary datum.
///
/// `damped(w, t) = e^{-w t} int_0^t e^{w tau} data(tau) dtau
///              = int_0^t e^{-w (t - tau)} data(tau) dtau`,
/// which is bounded by `sup|data| * t` whenever `Re w >= 0`.
#[derive(Debug, Clone)]
pub struct TimeTransform<'a> {
    boundary: &'a BoundaryData,
    /// Node budget of the adaptive path (pathological data otherwise hang).
    pub max_nodes: usize,
}

impl<'a> TimeTransform<'a> {
    pub fn new(boundary: &'a BoundaryData) -> Self {
        Self {
            boundary,
            max_nodes: 10_000,
        }
    }

    /// Evaluate the damped transform. Closed forms cover constant data and
    /// exact per-segment integration covers tabulated data; the erfc-based
    /// flux boundary goes through adaptive quadrature of the damped
    /// integrand with relative tolerance 1e-10.
    pub fn damped(&self, w: C64, t: f64) -> Result<C64, QuadError> {
        debug_assert!(t >= 0.0);
        if t == 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        match self.boundary {
            BoundaryData::Zero => Ok(C64::new(0.0, 0.0)),
            BoundaryData::Constant(c) => Ok(*c * t * em1(w * t)),
            BoundaryData::Tabulated(samples) => Ok(self.damped_tabulated(samples, w, t)),
            BoundaryData::BraesterFlux { ka, theta_offset } => {
                let ka = *ka;
                let g = |tau: f64| (-w * (t - tau)).exp() * braester_f2(tau, ka);
                let (value, _, _) =
                    adaptive_complex(&g, 0.0, t, 1e-10, 1e-300, self.max_nodes, 16)?;
                Ok(value + *theta_offset * t * em1(w * t))
            }
        }
    }

    /// Exact damped integral of the linear interpolant, one segment at a
    /// time; kinks would otherwise dominate the quadrature error.
    fn damped_tabulated(&self, samples: &[(f64, f64)], w: C64, t: f64) -> C64 {
        let mut sum = C64::new(0.0, 0.0);
        for pair in samples.windows(2) {
            let (ta, va) = pair[0];
            if ta >= t {
                break;
            }
            let (tb_raw, vb_raw) = pair[1];
            let slope = (vb_raw - va) / (tb_raw - ta);
            let tb = tb_raw.min(t);
            let h = tb - ta;
            let z = w * h;
            // int_ta^tb e^{-w(t - tau)} (va + slope (tau - ta)) dtau
            sum += (-w * (t - tb)).exp() * (va * h * em1(z) + slope * h * h * (em1(z) - em2(z)));
        }
        // Hold the last sample value beyond the table.
        if let Some(&(t_last, v_last)) = samples.last() {
            if t > t_last {
                let h = t - t_last;
                sum += v_last * h * em1(w * h);
            }
        }
        sum
    }
}
