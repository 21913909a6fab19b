//! Water-tank scenario: an initially dry column with pressure head `h0`
//! everywhere, saturated (`h = 0`) at the bottom boundary `x = L`.
//!
//! The exponential transform `h_a = e^{a h} - eps` linearises the
//! pressure-head equation; with `eps = e^{a h0}` the dry state maps to
//! `h_a = 0`, making the initial and surface data of the transformed
//! problem identically zero. The transformed problem is then the mirror
//! image of flooding: reversed advection (`k0 = k1 < 0`), a constant datum
//! `1 - eps` at the bottom, and the contour taken in the lower half-plane
//! where the determinant roots moved out of the way.

use super::{
    combined_boundary_term, eval_grid, i1_closed_impl, merge_diag, min_feasible_time,
    split_boundary_term, BoundaryKernel, Kernel,
};
use crate::error::SolverError;
use crate::grid::{PointDiag, Scenario, SolutionGrid};
use crate::quadrature::{ContourConfig, Side};
use crate::spectral::TransportCoefficients;
use alloc::format;
#[allow(unused_imports)] // float math trait; required for no_std builds
use num_traits::Float;

/// Physical parameters of the tank scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TankParameters {
    /// Sorptive number `a` [1/length] of the exponential conductivity model.
    pub a: f64,
    /// Saturated hydraulic conductivity [length/time].
    pub ks: f64,
    /// Saturated water content.
    pub theta1: f64,
    /// Residual water content.
    pub theta0: f64,
    /// Dry pressure head [length], negative.
    pub h0: f64,
    /// Column depth [length].
    pub length: f64,
}

impl TankParameters {
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.a > 0.0) {
            return Err(SolverError::Invalid(format!(
                "sorptive number must be positive, got {}",
                self.a
            )));
        }
        if !(self.ks > 0.0) {
            return Err(SolverError::Invalid(format!(
                "saturated conductivity must be positive, got {}",
                self.ks
            )));
        }
        if !(self.theta1 > self.theta0) {
            return Err(SolverError::Invalid(format!(
                "water contents must satisfy theta1 > theta0, got {} <= {}",
                self.theta1, self.theta0
            )));
        }
        if !(self.h0 < 0.0) {
            return Err(SolverError::Invalid(format!(
                "dry pressure head must be negative, got {}",
                self.h0
            )));
        }
        if !(self.length > 0.0) {
            return Err(SolverError::Invalid(format!(
                "column depth must be positive, got {}",
                self.length
            )));
        }
        let eps = self.eps();
        if !(eps > 0.0 && eps < 1.0) {
            return Err(SolverError::Invalid(format!(
                "derived eps = e^(a h0) = {eps} not in (0, 1)"
            )));
        }
        Ok(())
    }

    /// Advective coefficient of the transformed equation,
    /// `k1 = -ks/(theta1 - theta0) < 0`.
    pub fn k1(&self) -> f64 {
        -self.ks / (self.theta1 - self.theta0)
    }

    /// Diffusivity of the transformed equation,
    /// `d1 = ks/(a (theta1 - theta0))`.
    pub fn d1(&self) -> f64 {
        self.ks / (self.a * (self.theta1 - self.theta0))
    }

    /// `eps = e^{a h0}`, the transform offset making `h_a = 0` the dry state.
    pub fn eps(&self) -> f64 {
        (self.a * self.h0).exp()
    }

    pub fn coeffs(&self) -> Result<TransportCoefficients, SolverError> {
        TransportCoefficients::new(self.d1(), self.k1())
    }
}

#[derive(Debug, Clone)]
pub struct TankSolver {
    kernel: Kernel,
    params: TankParameters,
    eps: f64,
    cfg: ContourConfig,
    t_min: f64,
}

impl TankSolver {
    pub fn new(params: TankParameters, cfg: ContourConfig) -> Result<Self, SolverError> {
        params.validate()?;
        cfg.validate()
            .map_err(|e| SolverError::Quadrature { x: 0.0, t: 0.0, source: e })?;
        let kernel = Kernel::new(params.coeffs()?, params.length);
        let t_min = min_feasible_time(&kernel, &cfg);
        Ok(Self {
            kernel,
            eps: params.eps(),
            params,
            cfg,
            t_min,
        })
    }

    pub fn params(&self) -> &TankParameters {
        &self.params
    }

    pub fn min_time(&self) -> f64 {
        self.t_min
    }

    /// Transformed head `h_a(x, t) in [0, 1 - eps]`.
    pub fn transformed_at(&self, x: f64, t: f64) -> Result<(f64, PointDiag), SolverError> {
        self.transformed_impl(x, t, None)
    }

    /// Transformed head evaluated on a forced contour side (the natural side
    /// is the lower one, where the reversed advection moved the determinant
    /// roots into the upper half-plane).
    pub fn transformed_at_on(
        &self,
        x: f64,
        t: f64,
        side: Side,
    ) -> Result<(f64, PointDiag), SolverError> {
        self.transformed_impl(x, t, Some(side))
    }

    fn transformed_impl(
        &self,
        x: f64,
        t: f64,
        force_side: Option<Side>,
    ) -> Result<(f64, PointDiag), SolverError> {
        let mut diag = PointDiag::default();
        let length = self.params.length;
        if t == 0.0 || x == 0.0 {
            diag.short_circuit = true;
            return Ok((0.0, diag));
        }
        if x == length {
            diag.short_circuit = true;
            return Ok((1.0 - self.eps, diag));
        }
        if t < self.t_min && force_side.is_none() {
            diag.short_circuit = true;
            return Ok((0.0, diag));
        }
        let c = 1.0 - self.eps;
        let (v, quad) = match force_side {
            None => split_boundary_term(&self.kernel, BoundaryKernel::Right, c, x, t, &self.cfg),
            Some(side) => {
                combined_boundary_term(&self.kernel, BoundaryKernel::Right, c, x, t, side, &self.cfg)
            }
        }
        .map_err(SolverError::quad_at(x, t))?;
        merge_diag(&mut diag, &quad);
        Ok((v, diag))
    }

    /// Pressure head `h = ln(h_a + eps)/a`. Errors with `LogDomain` if the
    /// computed transformed head leaves the admissible range (the exact
    /// solution satisfies `0 <= h_a <= 1 - eps`, so that signals quadrature
    /// failure, not physics).
    pub fn head_at(&self, x: f64, t: f64) -> Result<(f64, PointDiag), SolverError> {
        let (ha, diag) = self.transformed_at(x, t)?;
        let arg = ha + self.eps;
        if !(arg > 0.0) {
            return Err(SolverError::LogDomain { x, t, argument: arg });
        }
        Ok((arg.ln() / self.params.a, diag))
    }

    /// Steady closed form of the transformed head's boundary term,
    /// `J1(x) = -(pi/d1) sinh(a x / 2) / (e^{a L} - 1)`; exposed for the
    /// residue cross-check.
    pub fn steady_closed(&self, x: f64) -> f64 {
        i1_closed_impl(&self.kernel, self.params.length - x)
    }

    /// Solve for the pressure head on a tensor grid. Entries at `t = 0`
    /// carry the initial head everywhere, including the incompatible corner
    /// at the saturated bottom.
    pub fn solve_grid(&self, xs: &[f64], ts: &[f64]) -> Result<SolutionGrid, SolverError> {
        super::check_grid(xs, ts, self.params.length)?;
        eval_grid(Scenario::PressureTank, xs, ts, &self.cfg, |x, t| {
            self.head_at(x, t)
        })
    }
}

/// Solve the pressure-tank scenario (values are pressure heads).
pub fn solve_pressure_tank(
    params: TankParameters,
    xs: &[f64],
    ts: &[f64],
    cfg: &ContourConfig,
) -> Result<SolutionGrid, SolverError> {
    TankSolver::new(params, *cfg)?.solve_grid(xs, ts)
}
