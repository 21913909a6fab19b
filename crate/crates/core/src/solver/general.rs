//! The general-data solver: all five terms of the bounded-interval
//! representation, for arbitrary initial data and boundary data at both
//! ends.
//!
//! Terms (coefficients after reduction to exponent-times-bounded form):
//!
//! 1. real-line initial-data term `(1/2pi) int e^{i lambda x - omega t}
//!    hat0(lambda) dlambda`;
//! 2. upper-contour initial-data term with the `sin(x mu)` kernel;
//! 3. upper-contour initial-data term with `sin((L-x) mu)` and
//!    `hat0(nu(lambda))`;
//! 4. left-boundary term with the damped transform of `f`;
//! 5. right-boundary term with the damped transform of `g`.
//!
//! Constant boundary data take the split (residue steady + Gaussian
//! transient) path of the flooding/tank machinery; other data go through
//! the damped time transform under the contour quadrature.

use super::{
    check_grid, combined_boundary_term, eval_grid, merge_diag, min_feasible_time, real_line_term,
    side_sign, split_boundary_term, BoundaryKernel, Kernel,
};
use crate::error::SolverError;
use crate::grid::{PointDiag, Scenario, SolutionGrid};
use crate::quadrature::{ContourConfig, QuadResult, Side};
use crate::special::{cexpm1, em1, em2, phi1};
use crate::spectral::{BoundaryData, InitialData, ProfileProblem};
use crate::transforms::{hat_theta0, TimeTransform};
use crate::C64;
#[allow(unused_imports)] // float math trait; required for no_std builds
use num_traits::Float;

/// `e^{i lambda L} hat0(lambda)`: the determinant-paired form of the initial
/// transform, bounded wherever `Im(argument) >= 0`.
fn hat_paired(problem: &ProfileProblem, lam: C64) -> C64 {
    let length = problem.length();
    let i = C64::new(0.0, 1.0);
    match problem.initial() {
        InitialData::Zero => C64::new(0.0, 0.0),
        InitialData::Constant(c) => *c * length * phi1(i * lam * length),
        InitialData::Tabulated(samples) => {
            let mut sum = C64::new(0.0, 0.0);
            for pair in samples.windows(2) {
                let (xa, va) = pair[0];
                let (xb, vb) = pair[1];
                let h = xb - xa;
                let slope = (vb - va) / h;
                let z = i * lam * h;
                sum += (i * lam * (length - xa)).exp()
                    * (va * h * em1(z) + slope * h * h * em2(z));
            }
            sum
        }
    }
}

#[derive(Debug, Clone)]
pub struct GeneralSolver {
    problem: ProfileProblem,
    kernel: Kernel,
    cfg: ContourConfig,
    t_min: f64,
}

impl GeneralSolver {
    pub fn new(problem: ProfileProblem, cfg: ContourConfig) -> Result<Self, SolverError> {
        cfg.validate()
            .map_err(|e| SolverError::Quadrature { x: 0.0, t: 0.0, source: e })?;
        let kernel = Kernel::new(problem.coeffs(), problem.length());
        let t_min = min_feasible_time(&kernel, &cfg);
        Ok(Self {
            problem,
            kernel,
            cfg,
            t_min,
        })
    }

    pub fn problem(&self) -> &ProfileProblem {
        &self.problem
    }

    pub fn min_time(&self) -> f64 {
        self.t_min
    }

    pub fn value_at(&self, x: f64, t: f64) -> Result<(f64, PointDiag), SolverError> {
        self.value_impl(x, t, None)
    }

    /// Evaluation with the contour terms forced onto the given side.
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
            return Ok((self.problem.initial().eval(x), diag));
        }
        if x == 0.0 {
            diag.short_circuit = true;
            return Ok((self.problem.left_bc().eval(t), diag));
        }
        if x == length {
            diag.short_circuit = true;
            return Ok((self.problem.right_bc().eval(t), diag));
        }
        if t < self.t_min && force_side.is_none() {
            diag.short_circuit = true;
            return Ok((self.problem.initial().eval(x), diag));
        }
        let side = force_side.unwrap_or(self.kernel.natural_side());
        let at = |e: crate::error::QuadError| SolverError::Quadrature { x, t, source: e };
        let mut total = 0.0;

        if self.problem.initial() != &InitialData::Zero {
            let quad = self.term_real_line(x, t).map_err(at)?;
            total += quad.value.re / (2.0 * core::f64::consts::PI);
            merge_diag(&mut diag, &quad);
            let quad = self.term_initial_near(x, t, side).map_err(at)?;
            total -= quad.value.re / (2.0 * core::f64::consts::PI);
            merge_diag(&mut diag, &quad);
            let quad = self.term_initial_far(x, t, side).map_err(at)?;
            total -= quad.value.re / (2.0 * core::f64::consts::PI);
            merge_diag(&mut diag, &quad);
        }

        total += self.boundary_term(BoundaryKernel::Left, x, t, side, force_side.is_some(), &mut diag)?;
        total += self.boundary_term(BoundaryKernel::Right, x, t, side, force_side.is_some(), &mut diag)?;
        Ok((total, diag))
    }

    /// Term 1: `(1/2pi) int_R e^{i lambda x - omega t} hat0 dlambda`
    /// (returned without the `1/2pi`).
    fn term_real_line(&self, x: f64, t: f64) -> Result<QuadResult, crate::error::QuadError> {
        let k = self.kernel;
        let problem = &self.problem;
        let f = move |lam: C64| {
            (C64::new(0.0, x) * lam - k.omega(lam) * t).exp() * hat_theta0(problem, lam)
        };
        let osc = x + self.kernel.length + self.kernel.k0.abs() * t;
        real_line_term(f, &self.cfg, self.kernel.d0 * t, osc)
    }

    /// Term 2: the initial-data contour term whose kernel peaks near the
    /// surface; on the upper side
    /// `int exp(i(L-x)mu - ct(L-x) - omega t) hatL(lambda) (1-e^{2ix mu}) / (1-q)`.
    fn term_initial_near(
        &self,
        x: f64,
        t: f64,
        side: Side,
    ) -> Result<QuadResult, crate::error::QuadError> {
        let k = self.kernel;
        let problem = &self.problem;
        let length = k.length;
        let (r_max, osc) = self.theta_term_radius(x, t, side, x);
        let path = k.contour(side, &self.cfg, r_max, osc, false);
        match side {
            Side::Upper => {
                let f = move |lam: C64| {
                    let mu = k.mu(lam);
                    let e = C64::new(0.0, length - x) * mu - k.ct * (length - x)
                        - k.omega(lam) * t;
                    let bracket = -cexpm1(C64::new(0.0, 2.0 * x) * mu);
                    e.exp() * hat_paired(problem, lam) * bracket / k.one_minus_q(mu, side)
                };
                path.integrate(f, &self.cfg)
            }
            Side::Lower => {
                let f = move |lam: C64| {
                    let mu = k.mu(lam);
                    let e = C64::new(0.0, x) * mu + k.ct * x - k.omega(lam) * t;
                    let bracket = -cexpm1(C64::new(0.0, -2.0 * x) * mu);
                    e.exp() * hat_theta0(problem, lam) * bracket / k.one_minus_q(mu, side)
                };
                path.integrate(f, &self.cfg)
            }
        }
    }

    /// Term 3: the initial-data contour term with the reflected transform;
    /// on the upper side
    /// `int exp(ix mu + ct x - omega t) hat0(nu) (1-e^{2i(L-x) mu}) / (1-q)`.
    fn term_initial_far(
        &self,
        x: f64,
        t: f64,
        side: Side,
    ) -> Result<QuadResult, crate::error::QuadError> {
        let k = self.kernel;
        let problem = &self.problem;
        let length = k.length;
        let (r_max, osc) = self.theta_term_radius(x, t, side, length - x);
        let path = k.contour(side, &self.cfg, r_max, osc, false);
        match side {
            Side::Upper => {
                let f = move |lam: C64| {
                    let mu = k.mu(lam);
                    let nu = k.ctx.nu(lam);
                    let e = C64::new(0.0, x) * mu + k.ct * x - k.omega(lam) * t;
                    let bracket = -cexpm1(C64::new(0.0, 2.0 * (length - x)) * mu);
                    e.exp() * hat_theta0(problem, nu) * bracket / k.one_minus_q(mu, side)
                };
                path.integrate(f, &self.cfg)
            }
            Side::Lower => {
                let f = move |lam: C64| {
                    let mu = k.mu(lam);
                    let nu = k.ctx.nu(lam);
                    let e = C64::new(0.0, length - x) * mu - k.ct * (length - x)
                        - k.omega(lam) * t;
                    let bracket = -cexpm1(C64::new(0.0, -2.0 * (length - x)) * mu);
                    e.exp() * hat_paired(problem, nu) * bracket / k.one_minus_q(mu, side)
                };
                path.integrate(f, &self.cfg)
            }
        }
    }

    /// Truncation radius and oscillation hint for the initial-data contour
    /// terms. On the natural side they are pure Gaussians; on the mirror
    /// side the kernel grows like `e^{growth r}` before the Gaussian wins,
    /// so the radius must clear the hump.
    fn theta_term_radius(&self, x: f64, t: f64, side: Side, z2: f64) -> (f64, f64) {
        let k = &self.kernel;
        let cfg = &self.cfg;
        let osc = k.osc_rate(cfg, k.length, z2.max(k.length - z2), t, true);
        let r_gauss = k.radius_for(cfg, t, 0.0);
        if side == k.natural_side() {
            return (r_gauss, osc);
        }
        let growth = k.length.min(x.max(k.length - x)) * cfg.ray_angle.sin();
        let g = k.d0 * t * (2.0 * cfg.ray_angle).cos();
        let hump = growth / (2.0 * g);
        (2.0 * hump + r_gauss, osc)
    }

    fn boundary_term(
        &self,
        kind: BoundaryKernel,
        x: f64,
        t: f64,
        side: Side,
        forced: bool,
        diag: &mut PointDiag,
    ) -> Result<f64, SolverError> {
        let bc = match kind {
            BoundaryKernel::Left => self.problem.left_bc(),
            BoundaryKernel::Right => self.problem.right_bc(),
        };
        let at = |e: crate::error::QuadError| SolverError::Quadrature { x, t, source: e };
        match bc {
            BoundaryData::Zero => Ok(0.0),
            BoundaryData::Constant(c) => {
                let (v, quad) = if !forced && self.kernel.k0 != 0.0 {
                    split_boundary_term(&self.kernel, kind, *c, x, t, &self.cfg)
                } else {
                    combined_boundary_term(&self.kernel, kind, *c, x, t, side, &self.cfg)
                }
                .map_err(at)?;
                merge_diag(diag, &quad);
                Ok(v)
            }
            _ => {
                let quad = self
                    .damped_boundary_quad(kind, bc, x, t, side)
                    .map_err(at)?;
                merge_diag(diag, &quad);
                Ok(quad.value.re)
            }
        }
    }

    /// Boundary term through the damped time transform:
    /// `-(i d0/pi) int mu exp(...) damped(omega, t) bracket / (1-q)`.
    fn damped_boundary_quad(
        &self,
        kind: BoundaryKernel,
        bc: &BoundaryData,
        x: f64,
        t: f64,
        side: Side,
    ) -> Result<QuadResult, crate::error::QuadError> {
        let k = self.kernel;
        let length = k.length;
        let s = side_sign(side);
        let (z1, z2, pref_arg) = match kind {
            BoundaryKernel::Left => (x, length - x, k.ct * x),
            BoundaryKernel::Right => (length - x, x, -k.ct * (length - x)),
        };
        let tt = TimeTransform::new(bc);
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
            let e = C64::new(0.0, s * z1) * mu + pref_arg;
            let bracket = -cexpm1(C64::new(0.0, 2.0 * s * z2) * mu);
            e.exp() * mu * damped * bracket / k.one_minus_q(mu, side)
        };
        let rate = z1 * self.cfg.ray_angle.sin();
        let r_max = k.radius_for(&self.cfg, 0.0, rate);
        let osc = k.osc_rate(&self.cfg, z1, z2, t, true);
        let path = k.contour(side, &self.cfg, r_max, osc, false);
        let mut quad = path.integrate(f, &self.cfg)?;
        if let Some(e) = err.take() {
            return Err(e);
        }
        let coeff = C64::new(0.0, -k.d0 / core::f64::consts::PI);
        quad.value *= coeff;
        Ok(quad)
    }

    pub fn solve_grid(&self, xs: &[f64], ts: &[f64]) -> Result<SolutionGrid, SolverError> {
        check_grid(xs, ts, self.kernel.length)?;
        eval_grid(Scenario::General, xs, ts, &self.cfg, |x, t| self.value_at(x, t))
    }
}

/// Solve the general problem on a tensor grid.
pub fn solve_general(
    problem: &ProfileProblem,
    xs: &[f64],
    ts: &[f64],
    cfg: &ContourConfig,
) -> Result<SolutionGrid, SolverError> {
    GeneralSolver::new(problem.clone(), *cfg)?.solve_grid(xs, ts)
}
