//! Half-line limit of the representation (`L -> inf`, bottom datum absorbed
//! into the far-field constant): a real-line initial-data term plus a single
//! contour term carrying the reflected transform and the surface datum.
//!
//! Initial data must be constant-offset or decaying: the solver splits off
//! the far-field constant (`tail`) and transforms only the compactly
//! supported deviation.

use super::{real_line_term, Kernel};
use crate::error::SolverError;
use crate::grid::{PointDiag, Scenario, SolutionGrid};
use crate::quadrature::{ContourConfig, QuadResult, Side};
use crate::special::{em1, em2};
use crate::spectral::{BoundaryData, InitialData, TransportCoefficients};
use crate::transforms::TimeTransform;
use crate::C64;
use alloc::vec::Vec;
#[allow(unused_imports)] // float math trait; required for no_std builds
use num_traits::Float;

#[derive(Debug, Clone)]
pub struct HalfLineSolver {
    kernel: Kernel,
    /// Far-field constant content.
    tail: f64,
    /// Initial deviation from the tail, compactly supported.
    deviation: Vec<(f64, f64)>,
    surface: BoundaryData,
    cfg: ContourConfig,
}

impl HalfLineSolver {
    pub fn new(
        initial: InitialData,
        surface: BoundaryData,
        coeffs: TransportCoefficients,
        cfg: ContourConfig,
    ) -> Result<Self, SolverError> {
        cfg.validate()
            .map_err(|e| SolverError::Quadrature { x: 0.0, t: 0.0, source: e })?;
        surface.validate()?;
        let (tail, deviation) = match initial {
            InitialData::Zero => (0.0, Vec::new()),
            InitialData::Constant(c) => (c, Vec::new()),
            InitialData::Tabulated(samples) => {
                if samples.len() < 2 {
                    return Err(SolverError::Invalid(
                        "tabulated initial data needs at least two samples".into(),
                    ));
                }
                if samples.windows(2).any(|p| !(p[1].0 > p[0].0)) {
                    return Err(SolverError::Invalid(
                        "tabulated initial data abscissae must be strictly increasing".into(),
                    ));
                }
                let tail = samples.last().unwrap().1;
                let dev: Vec<(f64, f64)> =
                    samples.iter().map(|&(x, v)| (x, v - tail)).collect();
                (tail, dev)
            }
        };
        // The deviation support sets the only intrinsic length; fall back to
        // a diffusion scale when absent (the kernel length only steers
        // oscillation hints here, no determinant is involved).
        let span = deviation
            .last()
            .map(|s| s.0)
            .unwrap_or(coeffs.d0() / coeffs.k0().abs().max(1e-300))
            .max(1e-12);
        Ok(Self {
            kernel: Kernel::new(coeffs, span),
            tail,
            deviation,
            surface,
            cfg,
        })
    }

    fn initial_eval(&self, x: f64) -> f64 {
        if self.deviation.is_empty() {
            return self.tail;
        }
        let dev = match self
            .deviation
            .binary_search_by(|s| s.0.partial_cmp(&x).unwrap())
        {
            Ok(i) => self.deviation[i].1,
            Err(0) => self.deviation[0].1,
            Err(i) if i == self.deviation.len() => 0.0,
            Err(i) => {
                let (x0, v0) = self.deviation[i - 1];
                let (x1, v1) = self.deviation[i];
                v0 + (v1 - v0) * (x - x0) / (x1 - x0)
            }
        };
        self.tail + dev
    }

    /// Transform of the deviation, `int_0^X e^{-i lambda x} dev(x) dx`.
    fn dev_hat(&self, lam: C64) -> C64 {
        let i = C64::new(0.0, 1.0);
        let mut sum = C64::new(0.0, 0.0);
        for pair in self.deviation.windows(2) {
            let (xa, va) = pair[0];
            let (xb, vb) = pair[1];
            let h = xb - xa;
            let slope = (vb - va) / h;
            let z = i * lam * h;
            sum += (-i * lam * xa).exp() * (va * h * em1(z) + slope * h * h * em2(z));
        }
        sum
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
        if t == 0.0 {
            diag.short_circuit = true;
            return Ok((self.initial_eval(x), diag));
        }
        if x == 0.0 {
            diag.short_circuit = true;
            return Ok((self.surface.eval(t), diag));
        }
        let at = |e: crate::error::QuadError| SolverError::Quadrature { x, t, source: e };
        let mut total = self.tail;
        let k = self.kernel;
        if !self.deviation.is_empty() {
            let f = |lam: C64| {
                (C64::new(0.0, x) * lam - k.omega(lam) * t).exp() * self.dev_hat(lam)
            };
            let osc = x + self.kernel.length + self.kernel.k0.abs() * t;
            let quad = real_line_term(f, &self.cfg, k.d0 * t, osc).map_err(at)?;
            total += quad.value.re / (2.0 * core::f64::consts::PI);
            super::merge_diag(&mut diag, &quad);
        }
        let side = force_side.unwrap_or(k.natural_side());
        let quad = self.contour_term(x, t, side).map_err(at)?;
        total -= quad.value.re / (2.0 * core::f64::consts::PI);
        super::merge_diag(&mut diag, &quad);
        Ok((total, diag))
    }

    /// The single contour term
    /// `int e^{i lambda x - omega t} [dev^(nu) + (2 i lambda d0 - k0) f0~] dlambda`
    /// in damped form, on the upper contour; the mirror evaluation pulls the
    /// integrand back through the invariant map onto the lower contour.
    fn contour_term(&self, x: f64, t: f64, side: Side) -> Result<QuadResult, crate::error::QuadError> {
        let k = self.kernel;
        let shifted = shifted_surface(&self.surface, self.tail);
        let tt = TimeTransform::new(&shifted);
        let err = core::cell::Cell::new(None);
        let natural = side == k.natural_side();
        let f = |lam_path: C64| {
            // On the mirror side the change of variables lambda -> nu maps
            // the contour back while exchanging the transforms, with an
            // orientation-cancelling sign.
            let lam = if natural { lam_path } else { k.ctx.nu(lam_path) };
            let w = k.omega(lam);
            let damped = match tt.damped(w, t) {
                Ok(v) => v,
                Err(e) => {
                    err.set(Some(e));
                    return C64::new(0.0, 0.0);
                }
            };
            let hat_term = if self.deviation.is_empty() {
                C64::new(0.0, 0.0)
            } else {
                (-w * t).exp() * self.dev_hat(k.ctx.nu(lam))
            };
            let coeff = C64::new(0.0, 2.0 * k.d0) * lam - k.k0;
            let v = (C64::new(0.0, x) * lam).exp() * (hat_term + coeff * damped);
            if natural {
                v
            } else {
                -v
            }
        };
        let rate = x * self.cfg.ray_angle.sin();
        let r_max = k.radius_for_both(&self.cfg, t, rate);
        let osc = x * self.cfg.ray_angle.cos() + k.k0.abs() * t;
        let path = k.contour(side, &self.cfg, r_max, osc, false);
        let quad = path.integrate(f, &self.cfg)?;
        if let Some(e) = err.take() {
            return Err(e);
        }
        Ok(quad)
    }

    pub fn solve_grid(&self, xs: &[f64], ts: &[f64]) -> Result<SolutionGrid, SolverError> {
        if xs.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err(SolverError::Invalid("positions must be >= 0".into()));
        }
        if ts.iter().any(|&t| t < 0.0 || !t.is_finite()) {
            return Err(SolverError::Invalid("times must be >= 0".into()));
        }
        super::eval_grid(Scenario::HalfLine, xs, ts, &self.cfg, |x, t| {
            self.value_at(x, t)
        })
    }
}

fn shifted_surface(surface: &BoundaryData, tail: f64) -> BoundaryData {
    match surface {
        BoundaryData::Zero => BoundaryData::Constant(-tail),
        BoundaryData::Constant(c) => BoundaryData::Constant(c - tail),
        BoundaryData::BraesterFlux { ka, theta_offset } => BoundaryData::BraesterFlux {
            ka: *ka,
            theta_offset: theta_offset - tail,
        },
        BoundaryData::Tabulated(samples) => {
            BoundaryData::Tabulated(samples.iter().map(|&(t, v)| (t, v - tail)).collect())
        }
    }
}

/// Solve the half-line problem on a tensor grid (`xs >= 0`).
pub fn solve_half_line(
    initial: InitialData,
    surface: BoundaryData,
    coeffs: TransportCoefficients,
    xs: &[f64],
    ts: &[f64],
    cfg: &ContourConfig,
) -> Result<SolutionGrid, SolverError> {
    HalfLineSolver::new(initial, surface, coeffs, *cfg)?.solve_grid(xs, ts)
}
