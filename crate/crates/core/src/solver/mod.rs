//! Scenario solvers assembling the contour-integral representation of the
//! solution into point and grid evaluators.
//!
//! Every evaluator works from the same stable building blocks. The
//! characteristic determinant and the sine kernels grow exponentially off
//! the real axis, so integrands are never assembled literally: each term is
//! reduced analytically to `exp(E) * B` with a single explicit exponent `E`
//! whose real part is non-positive up to the fixed scale `|k0| L / (2 d0)`,
//! and a bounded factor `B` built from `expm1`-style quotients. On the upper
//! contour the shifted variable satisfies `Im mu >= |k0|/(2 d0)`, on the
//! lower contour the mirror bound, which is what makes those reductions
//! uniformly valid.

mod flooding;
mod general;
mod half_line;
mod rainfall;
mod tank;

pub use flooding::{i1_closed, i1_direct_quadrature, solve_flooding, FloodingSolver};
pub use general::{solve_general, GeneralSolver};
pub use half_line::{solve_half_line, HalfLineSolver};
pub use rainfall::{solve_rainfall_flux, RainfallSolver};
pub use tank::{solve_pressure_tank, TankParameters, TankSolver};

use crate::error::{QuadError, SolverError};
use crate::grid::{PointDiag, Scenario, SolutionGrid};
use crate::quadrature::{adaptive_complex, ContourConfig, ContourPath, QuadResult, Side};
use crate::special::cexpm1;
use crate::spectral::{SpectralContext, TransportCoefficients};
use crate::C64;
use alloc::vec::Vec;
#[allow(unused_imports)] // float math trait; required for no_std builds
use num_traits::Float;

/// Which sine kernel a boundary term carries: the left-boundary terms use
/// `sin((L - x) mu)`, the right-boundary terms `sin(x mu)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BoundaryKernel {
    Left,
    Right,
}

/// Shared spectral geometry of one problem.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Kernel {
    pub ctx: SpectralContext,
    pub d0: f64,
    pub k0: f64,
    /// `k0 / (2 d0)`, the imaginary shift of the spectral variable.
    pub ct: f64,
    pub length: f64,
}

impl Kernel {
    pub fn new(coeffs: TransportCoefficients, length: f64) -> Self {
        Self {
            ctx: SpectralContext::new(coeffs, length),
            d0: coeffs.d0(),
            k0: coeffs.k0(),
            ct: coeffs.half_ratio(),
            length,
        }
    }

    #[inline]
    pub fn mu(&self, lam: C64) -> C64 {
        lam + C64::new(0.0, self.ct)
    }

    #[inline]
    pub fn omega(&self, lam: C64) -> C64 {
        self.ctx.omega(lam)
    }

    /// `1 - e^{2 i mu L}` (upper) / `1 - e^{-2 i mu L}` (lower): the bounded
    /// determinant factor, exact near the root family.
    #[inline]
    pub fn one_minus_q(&self, mu: C64, side: Side) -> C64 {
        let s = side_sign(side);
        -cexpm1(C64::new(0.0, 2.0 * s) * mu * self.length)
    }

    /// Vertex of the deformed contour: the root of `omega` lying on the
    /// spectral boundary of the given side (`0` or `-i k0/d0`).
    pub fn vertex(&self, side: Side) -> C64 {
        let other = C64::new(0.0, -self.k0 / self.d0);
        match side {
            Side::Upper => {
                if self.k0 >= 0.0 {
                    C64::new(0.0, 0.0)
                } else {
                    other
                }
            }
            Side::Lower => {
                if self.k0 >= 0.0 {
                    other
                } else {
                    C64::new(0.0, 0.0)
                }
            }
        }
    }

    /// The natural contour side for split (steady + transient) evaluation:
    /// the side whose vertex is the origin, so the bypass encloses the
    /// advective pole with the residue bookkeeping of the closed form.
    pub fn natural_side(&self) -> Side {
        if self.k0 >= 0.0 {
            Side::Upper
        } else {
            Side::Lower
        }
    }

    /// Bypass radius keeping the arc clear of the root family and of the
    /// second root of `omega`.
    pub fn bypass_radius(&self) -> f64 {
        let pole_gap = (core::f64::consts::PI / self.length).min(2.0 * self.ct.abs());
        0.4 * pole_gap
    }

    /// Deformed contour of the given side. A horizontal segment through the
    /// vertex keeps `Re omega >= 0` along the whole path (on the segment it
    /// equals `d0 s^2`); rays alone would dip into the growth region by
    /// `exp(k0^2 t sin^2 theta / (4 d0 cos 2theta))`, fatal for long times.
    pub fn contour(
        &self,
        side: Side,
        cfg: &ContourConfig,
        r_max: f64,
        osc_rate: f64,
        bypass: bool,
    ) -> ContourPath {
        let theta = cfg.ray_angle;
        let bypass_radius = if bypass { self.bypass_radius() } else { 0.0 };
        let mut half_width = self.ct.abs() * theta.tan();
        if bypass_radius > 0.0 {
            half_width = half_width.max(2.5 * bypass_radius);
        }
        ContourPath {
            side,
            vertex: self.vertex(side),
            half_width,
            bypass_radius,
            r_max,
            osc_rate,
        }
    }

    /// Truncation radius covering a Gaussian decay `e^{-d0 t cos(2theta) r^2}`
    /// and, when positive, a linear-exponential decay at `rate`.
    pub fn radius_for(&self, cfg: &ContourConfig, t: f64, exp_rate: f64) -> f64 {
        let ln = (1.0 / cfg.abs_tol).ln();
        let mut r: f64 = 0.0;
        if t > 0.0 {
            let gauss = self.d0 * t * (2.0 * cfg.ray_angle).cos();
            r = cfg.truncation_safety * (ln / gauss).sqrt();
        }
        if exp_rate > 0.0 {
            let r_exp = cfg.truncation_safety * ln / exp_rate;
            r = if r == 0.0 { r_exp } else { r.min(r_exp) };
        }
        r
    }

    /// Like [`Self::radius_for`] but for integrands needing BOTH decays to
    /// fall below tolerance (combined steady-plus-transient forms).
    pub fn radius_for_both(&self, cfg: &ContourConfig, t: f64, exp_rate: f64) -> f64 {
        let ln = (1.0 / cfg.abs_tol).ln();
        let mut r: f64 = 0.0;
        if t > 0.0 {
            let gauss = self.d0 * t * (2.0 * cfg.ray_angle).cos();
            r = cfg.truncation_safety * (ln / gauss).sqrt();
        }
        if exp_rate > 0.0 {
            r = r.max(cfg.truncation_safety * ln / exp_rate);
        }
        r
    }

    /// Amplitude-weighted oscillation rate (radians of integrand phase per
    /// unit radius) for seeding the panel subdivision. `z1` is the
    /// unit-amplitude kernel scale, `z2` the bracket scale (amplitude
    /// suppressed by `e^{-2 z2 |ct|}`), and `with_omega` adds the advective
    /// phase of `e^{-omega t}`.
    pub fn osc_rate(&self, cfg: &ContourConfig, z1: f64, z2: f64, t: f64, with_omega: bool) -> f64 {
        let cosb = cfg.ray_angle.cos();
        let mut rate = z1 * cosb;
        rate += 2.0 * z2 * cosb * (-2.0 * z2 * self.ct.abs()).exp();
        rate += 2.0 * self.length * cosb * (-2.0 * self.length * self.ct.abs()).exp();
        if with_omega {
            rate += self.k0.abs() * t * cosb;
        }
        rate
    }

    /// Node-count estimate for a contour evaluation; the small-time
    /// fallback threshold.
    pub fn nodes_estimate(&self, r_max: f64, osc_rate: f64) -> f64 {
        (osc_rate * r_max + if r_max > 0.0 { 70.0 } else { 0.0 }) * 15.0
            / (6.0 * core::f64::consts::PI)
    }
}

#[inline]
pub(crate) fn side_sign(side: Side) -> f64 {
    match side {
        Side::Upper => 1.0,
        Side::Lower => -1.0,
    }
}

/// Stable transient integrand of the split representation:
/// `-e^{-omega t} mu sin(z mu) / (omega delta)` reduced to exponent-plus-
/// bounded-factor form on the given side. `kind` selects the sine argument
/// (`Left`: `sin((L-x) mu)`, `Right`: `sin(x mu)`).
pub(crate) fn transient_integrand(
    kernel: &Kernel,
    kind: BoundaryKernel,
    x: f64,
    t: f64,
    side: Side,
) -> impl Fn(C64) -> C64 + '_ {
    let (z1, z2) = kernel_args(kernel, kind, x);
    let s = side_sign(side);
    let ct_l = kernel.ct * kernel.length;
    let k = *kernel;
    move |lam: C64| {
        let mu = k.mu(lam);
        let omega = k.omega(lam);
        let e = C64::new(0.0, s * z1) * mu + ct_l - omega * t;
        let bracket = -cexpm1(C64::new(0.0, 2.0 * s * z2) * mu);
        let denom = omega * k.one_minus_q(mu, side);
        C64::new(0.0, -0.5) * e.exp() * mu * bracket / denom
    }
}

/// Steady integrand `mu sin(z mu) / (omega delta)` in the same stable form;
/// quadrature over the bypassed contour reproduces the residue closed form.
pub(crate) fn steady_integrand(
    kernel: &Kernel,
    kind: BoundaryKernel,
    x: f64,
    side: Side,
) -> impl Fn(C64) -> C64 + '_ {
    let (z1, z2) = kernel_args(kernel, kind, x);
    let s = side_sign(side);
    let ct_l = kernel.ct * kernel.length;
    let k = *kernel;
    move |lam: C64| {
        let mu = k.mu(lam);
        let omega = k.omega(lam);
        let e = C64::new(0.0, s * z1) * mu + ct_l;
        let bracket = -cexpm1(C64::new(0.0, 2.0 * s * z2) * mu);
        let denom = omega * k.one_minus_q(mu, side);
        C64::new(0.0, 0.5) * e.exp() * mu * bracket / denom
    }
}

fn kernel_args(kernel: &Kernel, kind: BoundaryKernel, x: f64) -> (f64, f64) {
    match kind {
        BoundaryKernel::Left => (x, kernel.length - x),
        BoundaryKernel::Right => (kernel.length - x, x),
    }
}

/// One boundary term of the split representation:
/// `-c (2 d0/pi) e^{-ct (L - x)} (I1 + I2)` (left kernel) or
/// `-c (2 d0/pi) e^{-ct (2L - x)} (J1 + J2)` (right kernel), with the steady
/// part by residue and the transient by bypassed-contour quadrature on the
/// natural side.
pub(crate) fn split_boundary_term(
    kernel: &Kernel,
    kind: BoundaryKernel,
    c: f64,
    x: f64,
    t: f64,
    cfg: &ContourConfig,
) -> Result<(f64, QuadResult), QuadError> {
    debug_assert!(kernel.k0 != 0.0, "split path requires k0 != 0");
    let side = kernel.natural_side();
    let (z1, z2) = kernel_args(kernel, kind, x);
    let r_max = kernel.radius_for(cfg, t, 0.0);
    let osc = kernel.osc_rate(cfg, z1, z2, t, true);
    let path = kernel.contour(side, cfg, r_max, osc, true);
    let quad = path.integrate(transient_integrand(kernel, kind, x, t, side), cfg)?;
    let steady = match kind {
        BoundaryKernel::Left => i1_closed_impl(kernel, x),
        BoundaryKernel::Right => i1_closed_impl(kernel, kernel.length - x),
    };
    let pref_arg = match kind {
        BoundaryKernel::Left => -kernel.ct * (kernel.length - x),
        BoundaryKernel::Right => -kernel.ct * (2.0 * kernel.length - x),
    };
    let pref = -c * (2.0 * kernel.d0 / core::f64::consts::PI) * pref_arg.exp();
    let value = pref * (steady + quad.value.re);
    Ok((value, quad))
}

/// Combined (unsplit) boundary term `-c (2 d0/pi) e^{...} *
/// int (1 - e^{-omega t}) mu sin(z mu) / (omega delta) dlambda`, regular at
/// the roots of `omega`; used on mirror contours and for `k0 = 0` where the
/// residue split is unavailable.
pub(crate) fn combined_boundary_term(
    kernel: &Kernel,
    kind: BoundaryKernel,
    c: f64,
    x: f64,
    t: f64,
    side: Side,
    cfg: &ContourConfig,
) -> Result<(f64, QuadResult), QuadError> {
    let (z1, z2) = kernel_args(kernel, kind, x);
    let s = side_sign(side);
    let ct_l = kernel.ct * kernel.length;
    let k = *kernel;
    let integrand = move |lam: C64| {
        let mu = k.mu(lam);
        let omega = k.omega(lam);
        let e = C64::new(0.0, s * z1) * mu + ct_l;
        let bracket = -cexpm1(C64::new(0.0, 2.0 * s * z2) * mu);
        // (1 - e^{-omega t}) / omega, entire in omega
        let em = t * crate::special::em1(omega * t);
        C64::new(0.0, 0.5) * e.exp() * mu * bracket * em / k.one_minus_q(mu, side)
    };
    let r_max = kernel.radius_for_both(cfg, t, z1 * cfg.ray_angle.sin());
    let osc = kernel.osc_rate(cfg, z1, z2, t, true);
    let path = kernel.contour(side, cfg, r_max, osc, false);
    let quad = path.integrate(integrand, cfg)?;
    let pref_arg = match kind {
        BoundaryKernel::Left => -kernel.ct * (kernel.length - x),
        BoundaryKernel::Right => -kernel.ct * (2.0 * kernel.length - x),
    };
    let pref = -c * (2.0 * kernel.d0 / core::f64::consts::PI) * pref_arg.exp();
    Ok((pref * quad.value.re, quad))
}

/// `I1(x) = -(pi/d0) sinh(ct (L - x)) / (1 - e^{-2 ct L})`: the residue
/// contribution of the steady part of the split representation at the
/// origin, in overflow-free form. For `k0 = 0` the continuous limit
/// `-(pi/d0) (L - x) / (2 L)` applies.
pub(crate) fn i1_closed_impl(kernel: &Kernel, x: f64) -> f64 {
    let y = kernel.ct * (kernel.length - x);
    let z = 2.0 * kernel.ct * kernel.length;
    if z.abs() < 1e-14 {
        return -(core::f64::consts::PI / kernel.d0) * (kernel.length - x)
            / (2.0 * kernel.length);
    }
    -(core::f64::consts::PI / kernel.d0) * crate::special::sinh_over_one_minus_exp(y, z)
}

/// Adaptive real-line integral with oscillation-aware seeding (internal to
/// the solvers; the public API variant lives in [`crate::quadrature`]).
pub(crate) fn real_line_term<F: Fn(C64) -> C64>(
    f: F,
    cfg: &ContourConfig,
    decay_scale: f64,
    osc_rate: f64,
) -> Result<QuadResult, QuadError> {
    if !(decay_scale > 0.0) {
        return Err(QuadError::DegenerateTime);
    }
    let r = cfg.truncation_radius(decay_scale);
    let g = |s: f64| f(C64::new(s, 0.0));
    let seeds = ((osc_rate * 2.0 * r / (6.0 * core::f64::consts::PI)) as usize)
        .clamp(16, (cfg.max_nodes / 60).max(16));
    let (value, err_est, nodes) =
        adaptive_complex(&g, -r, r, cfg.rel_tol, cfg.abs_tol, cfg.max_nodes, seeds)?;
    let end_mag = g(-r).norm() + g(r).norm();
    let tail_est = end_mag * r / (1.0 / cfg.abs_tol).ln();
    let tol = cfg.abs_tol.max(cfg.rel_tol * value.norm());
    if tail_est > 10.0 * tol {
        return Err(QuadError::TruncationDominated {
            tail_est,
            limit: 10.0 * tol,
        });
    }
    Ok(QuadResult {
        value,
        err_est,
        tail_est,
        nodes: nodes + 2,
    })
}

/// Smallest time for which the transient quadrature stays inside the node
/// budget at the worst grid abscissa. Below it the solvers return the
/// initial data directly: the truncation radius grows like `1/sqrt(t)` and
/// the representation converges too slowly to beat the (continuous)
/// initial condition.
pub(crate) fn min_feasible_time(kernel: &Kernel, cfg: &ContourConfig) -> f64 {
    let osc = kernel.osc_rate(cfg, kernel.length, kernel.length, 0.0, false);
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    let budget = 0.9 * cfg.max_nodes as f64;
    let feasible = |t: f64| {
        let r = kernel.radius_for(cfg, t, 0.0);
        kernel.nodes_estimate(r, osc) <= budget
    };
    if feasible(f64::MIN_POSITIVE) {
        return 0.0;
    }
    while !feasible(hi) {
        hi *= 4.0;
        if hi > 1e30 {
            return hi;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    hi
}

/// Shared grid driver: evaluates `point` over the tensor grid sequentially.
pub(crate) fn eval_grid<F>(
    scenario: Scenario,
    xs: &[f64],
    ts: &[f64],
    cfg: &ContourConfig,
    mut point: F,
) -> Result<SolutionGrid, SolverError>
where
    F: FnMut(f64, f64) -> Result<(f64, PointDiag), SolverError>,
{
    let mut values = Vec::with_capacity(xs.len() * ts.len());
    let mut diags = Vec::with_capacity(xs.len() * ts.len());
    for &x in xs {
        for &t in ts {
            let (v, d) = point(x, t)?;
            values.push(v);
            diags.push(d);
        }
    }
    SolutionGrid::new(
        scenario,
        xs.to_vec(),
        ts.to_vec(),
        values,
        diags,
        Some(*cfg),
    )
}

pub(crate) fn merge_diag(diag: &mut PointDiag, quad: &QuadResult) {
    diag.nodes += quad.nodes;
    diag.err_est += quad.err_est + quad.value.im.abs();
    diag.tail_est += quad.tail_est;
}

/// Validate grid abscissae against the problem domain.
pub(crate) fn check_grid(xs: &[f64], ts: &[f64], length: f64) -> Result<(), SolverError> {
    if xs.iter().any(|&x| !(0.0..=length).contains(&x) || !x.is_finite()) {
        return Err(SolverError::Invalid(alloc::format!(
            "grid positions must lie in [0, {length}]"
        )));
    }
    if ts.iter().any(|&t| t < 0.0 || !t.is_finite()) {
        return Err(SolverError::Invalid("grid times must be >= 0".into()));
    }
    Ok(())
}
