//! Flooding: constant surface content `theta1` applied at `x = 0` over a
//! profile initially at `theta0`, held at `theta0` at the bottom.
//!
//! After shifting by `theta0` the data are zero except the constant left
//! boundary, and the representation collapses to a single boundary term,
//! split as `u = (theta0 - theta1) (2 d0/pi) e^{-ct (L-x)} (I1 + I2)`: `I1`
//! is the steady contour integral, evaluated in closed form by the residue
//! at the origin, and `I2` carries the `e^{-omega t}` transient, evaluated
//! by quadrature on the bypassed contour where it decays like a Gaussian.

use super::{
    combined_boundary_term, eval_grid, i1_closed_impl, merge_diag, min_feasible_time,
    split_boundary_term, steady_integrand, BoundaryKernel, Kernel,
};
use crate::error::SolverError;
use crate::grid::{PointDiag, Scenario, SolutionGrid};
use crate::quadrature::{ContourConfig, Side};
use crate::spectral::TransportCoefficients;
use alloc::format;
#[allow(unused_imports)] // float math trait; required for no_std builds
use num_traits::Float;

#[derive(Debug, Clone)]
pub struct FloodingSolver {
    kernel: Kernel,
    theta0: f64,
    theta1: f64,
    cfg: ContourConfig,
    t_min: f64,
}

impl FloodingSolver {
    pub fn new(
        theta0: f64,
        theta1: f64,
        coeffs: TransportCoefficients,
        length: f64,
        cfg: ContourConfig,
    ) -> Result<Self, SolverError> {
        if !(theta1 > theta0) {
            return Err(SolverError::Invalid(format!(
                "flooding requires theta1 > theta0, got {theta1} <= {theta0}"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(SolverError::Invalid(format!(
                "profile length must be positive, got {length}"
            )));
        }
        cfg.validate()
            .map_err(|e| SolverError::Quadrature { x: 0.0, t: 0.0, source: e })?;
        let kernel = Kernel::new(coeffs, length);
        let t_min = min_feasible_time(&kernel, &cfg);
        Ok(Self {
            kernel,
            theta0,
            theta1,
            cfg,
            t_min,
        })
    }

    pub fn length(&self) -> f64 {
        self.kernel.length
    }

    /// Smallest quadrature-feasible time; below it evaluation returns the
    /// initial content (exact at `t = 0`, and the solution is continuous).
    pub fn min_time(&self) -> f64 {
        self.t_min
    }

    pub fn value_at(&self, x: f64, t: f64) -> Result<(f64, PointDiag), SolverError> {
        self.value_impl(x, t, None)
    }

    /// Evaluation forced onto the given contour side through the combined
    /// (unsplit) integrand; equals [`Self::value_at`] by the invariance of
    /// the representation under the contour reflection.
    pub fn value_at_on(&self, x: f64, t: f64, side: Side) -> Result<(f64, PointDiag), SolverError> {
        self.value_impl(x, t, Some(side))
    }

    fn value_impl(
        &self,
        x: f64,
        t: f64,
        force_side: Option<Side>,
    ) -> Result<(f64, PointDiag), SolverError> {
        let mut diag = PointDiag::default();
        let length = self.kernel.length;
        if t == 0.0 {
            diag.short_circuit = true;
            return Ok((self.theta0, diag));
        }
        if x == 0.0 {
            diag.short_circuit = true;
            return Ok((self.theta1, diag));
        }
        if x == length {
            diag.short_circuit = true;
            return Ok((self.theta0, diag));
        }
        if t < self.t_min && force_side.is_none() {
            diag.short_circuit = true;
            return Ok((self.theta0, diag));
        }
        let c = self.theta1 - self.theta0;
        let (u, quad) = match force_side {
            None if self.kernel.k0 != 0.0 => {
                split_boundary_term(&self.kernel, BoundaryKernel::Left, c, x, t, &self.cfg)
            }
            None => combined_boundary_term(
                &self.kernel,
                BoundaryKernel::Left,
                c,
                x,
                t,
                self.kernel.natural_side(),
                &self.cfg,
            ),
            Some(side) => {
                combined_boundary_term(&self.kernel, BoundaryKernel::Left, c, x, t, side, &self.cfg)
            }
        }
        .map_err(SolverError::quad_at(x, t))?;
        merge_diag(&mut diag, &quad);
        Ok((self.theta0 + u, diag))
    }

    pub fn solve_grid(&self, xs: &[f64], ts: &[f64]) -> Result<SolutionGrid, SolverError> {
        super::check_grid(xs, ts, self.kernel.length)?;
        eval_grid(Scenario::Flooding, xs, ts, &self.cfg, |x, t| {
            self.value_at(x, t)
        })
    }
}

/// Closed form of the steady contour integral of the split flooding
/// representation: `I1(x) = -(pi/d0) sinh(ct (L-x)) / (1 - e^{-2 ct L})`
/// with `ct = k0/(2 d0)`, from the residue at the origin.
pub fn i1_closed(x: f64, coeffs: TransportCoefficients, length: f64) -> f64 {
    i1_closed_impl(&Kernel::new(coeffs, length), x)
}

/// Direct quadrature of the steady integral over the bypassed contour; the
/// independent check of [`i1_closed`]. Decay comes only from the sine
/// kernel, at rate `x sin(theta)`, so `x` must be interior.
pub fn i1_direct_quadrature(
    x: f64,
    coeffs: TransportCoefficients,
    length: f64,
    cfg: &ContourConfig,
) -> Result<f64, SolverError> {
    let kernel = Kernel::new(coeffs, length);
    if kernel.k0 == 0.0 {
        return Err(SolverError::Invalid(
            "the residue split needs k0 != 0".into(),
        ));
    }
    if !(x > 0.0 && x <= length) {
        return Err(SolverError::Invalid(format!(
            "steady quadrature needs x in (0, L], got {x}"
        )));
    }
    let side = kernel.natural_side();
    let rate = x * cfg.ray_angle.sin();
    let r_max = kernel.radius_for(cfg, 0.0, rate);
    let osc = kernel.osc_rate(cfg, x, length - x, 0.0, false);
    let path = kernel.contour(side, cfg, r_max, osc, true);
    let quad = path
        .integrate(steady_integrand(&kernel, BoundaryKernel::Left, x, side), cfg)
        .map_err(SolverError::quad_at(x, 0.0))?;
    Ok(quad.value.re)
}

/// Solve the flooding scenario on a tensor grid.
pub fn solve_flooding(
    theta0: f64,
    theta1: f64,
    coeffs: TransportCoefficients,
    length: f64,
    xs: &[f64],
    ts: &[f64],
    cfg: &ContourConfig,
) -> Result<SolutionGrid, SolverError> {
    FloodingSolver::new(theta0, theta1, coeffs, length, *cfg)?.solve_grid(xs, ts)
}
