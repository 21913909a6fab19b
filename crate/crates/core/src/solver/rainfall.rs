//! Constant-flux rainfall: the surface content follows the erfc-based flux
//! response `f2` while the bottom stays at the initial content.
//!
//! After the `theta0` shift the boundary transform splits into a constant
//! part, handled by the flooding split machinery, and the transform of the
//! raw surface response, which has no elementary antiderivative against
//! `e^{omega tau}` and is evaluated by the damped time transform under the
//! contour quadrature.

use super::{
    check_grid, combined_boundary_term, eval_grid, merge_diag, min_feasible_time, side_sign,
    split_boundary_term, BoundaryKernel, Kernel,
};
use crate::error::SolverError;
use crate::grid::{PointDiag, Scenario, SolutionGrid};
use crate::quadrature::{ContourConfig, QuadResult, Side};
use crate::special::cexpm1;
use crate::spectral::{BoundaryData, TransportCoefficients};
use crate::transforms::TimeTransform;
use crate::C64;
#[allow(unused_imports)] // float math trait; required for no_std builds
use num_traits::Float;

#[derive(Debug, Clone)]
pub struct RainfallSolver {
    kernel: Kernel,
    theta0: f64,
    surface: BoundaryData,
    cfg: ContourConfig,
    t_min: f64,
}

impl RainfallSolver {
    /// `surface` is the raw surface content `f(t)`; it must be a
    /// flux-response or tabulated datum (constant data belong to the
    /// flooding solver).
    pub fn new(
        theta0: f64,
        surface: BoundaryData,
        coeffs: TransportCoefficients,
        length: f64,
        cfg: ContourConfig,
    ) -> Result<Self, SolverError> {
        match surface {
            BoundaryData::BraesterFlux { .. } | BoundaryData::Tabulated(_) => {}
            _ => {
                return Err(SolverError::Invalid(
                    "rainfall surface data must be a flux response or tabulated".into(),
                ))
            }
        }
        surface.validate()?;
        if !(length > 0.0) || !length.is_finite() {
            return Err(SolverError::Invalid(alloc::format!(
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
            surface,
            cfg,
            t_min,
        })
    }

    pub fn min_time(&self) -> f64 {
        self.t_min
    }

    pub fn value_at(&self, x: f64, t: f64) -> Result<(f64, PointDiag), SolverError> {
        self.value_impl(x, t, None)
    }

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
            return Ok((self.surface.eval(t), diag));
        }
        if x == length {
            diag.short_circuit = true;
            return Ok((self.theta0, diag));
        }
        if t < self.t_min && force_side.is_none() {
            diag.short_circuit = true;
            return Ok((self.theta0, diag));
        }
        let at = |e: crate::error::QuadError| SolverError::Quadrature { x, t, source: e };
        let side = force_side.unwrap_or(self.kernel.natural_side());
        // Constant part of the shifted boundary datum.
        let (u_const, quad) = match force_side {
            None if self.kernel.k0 != 0.0 => split_boundary_term(
                &self.kernel,
                BoundaryKernel::Left,
                -self.theta0,
                x,
                t,
                &self.cfg,
            ),
            _ => combined_boundary_term(
                &self.kernel,
                BoundaryKernel::Left,
                -self.theta0,
                x,
                t,
                side,
                &self.cfg,
            ),
        }
        .map_err(at)?;
        merge_diag(&mut diag, &quad);
        // Flux-response part through the damped transform.
        let quad = self.surface_term(x, t, side).map_err(at)?;
        merge_diag(&mut diag, &quad);
        Ok((self.theta0 + u_const + quad.value.re, diag))
    }

    /// `-(2 d0/pi) e^{-ct(L-x)} int e^{-omega t} f2~ mu sin((L-x) mu)/delta`
    /// through the damped transform, reduced to the stable form
    /// `-(i d0/pi) int mu exp(+-i x mu + ct x) damped (1 - e^{+-2i(L-x) mu})/(1-q)`.
    fn surface_term(&self, x: f64, t: f64, side: Side) -> Result<QuadResult, crate::error::QuadError> {
        let k = self.kernel;
        let length = k.length;
        let s = side_sign(side);
        let tt = TimeTransform::new(&self.surface);
        let err = core::cell::Cell::new(None);
        let f = |lam: C64| {
            let mu = k.mu(lam);
            let w = k.omega(lam);
            let damped = match tt.damped(w, t) {
                Ok(v) => v,
                Err(e) => {
                    err.set(Some(e));
                    return C64::new(0.0, 0.0);
                }
            };
            let e = C64::new(0.0, s * x) * mu + k.ct * x;
            let bracket = -cexpm1(C64::new(0.0, 2.0 * s * (length - x)) * mu);
            e.exp() * mu * damped * bracket / k.one_minus_q(mu, side)
        };
        let rate = x * self.cfg.ray_angle.sin();
        let r_max = k.radius_for(&self.cfg, 0.0, rate);
        let osc = k.osc_rate(&self.cfg, x, length - x, t, true);
        let path = k.contour(side, &self.cfg, r_max, osc, false);
        let mut quad = path.integrate(f, &self.cfg)?;
        if let Some(e) = err.take() {
            return Err(e);
        }
        quad.value *= C64::new(0.0, -k.d0 / core::f64::consts::PI);
        Ok(quad)
    }

    pub fn solve_grid(&self, xs: &[f64], ts: &[f64]) -> Result<SolutionGrid, SolverError> {
        check_grid(xs, ts, self.kernel.length)?;
        eval_grid(Scenario::RainfallFlux, xs, ts, &self.cfg, |x, t| {
            self.value_at(x, t)
        })
    }
}

/// Solve the constant-flux rainfall scenario on a tensor grid.
pub fn solve_rainfall_flux(
    theta0: f64,
    surface: BoundaryData,
    coeffs: TransportCoefficients,
    length: f64,
    xs: &[f64],
    ts: &[f64],
    cfg: &ContourConfig,
) -> Result<SolutionGrid, SolverError> {
    RainfallSolver::new(theta0, surface, coeffs, length, *cfg)?.solve_grid(xs, ts)
}
