//! Evaluated solution grids and their metadata.

use crate::error::SolverError;
use crate::quadrature::ContourConfig;
use alloc::format;
use alloc::vec::Vec;

/// Which scenario produced a grid; determines the value semantics
/// (water content for the content scenarios, pressure head for the tank).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    General,
    Flooding,
    RainfallFlux,
    PressureTank,
    HalfLine,
    FdOracle,
    Reference,
}

impl Scenario {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::General => "general",
            Scenario::Flooding => "flooding",
            Scenario::RainfallFlux => "rainfall_flux",
            Scenario::PressureTank => "pressure_tank",
            Scenario::HalfLine => "half_line",
            Scenario::FdOracle => "fd_oracle",
            Scenario::Reference => "reference",
        }
    }
}

/// Per-point quadrature diagnostics.
#[derive(Debug, Clone, Copy, Default)]
pub struct PointDiag {
    /// Integrand evaluations spent on this point.
    pub nodes: usize,
    /// Accumulated error estimate of the contour integrals.
    pub err_est: f64,
    /// Accumulated truncation-tail bound.
    pub tail_est: f64,
    /// The point was served by a short-circuit (initial/boundary data or the
    /// small-time fallback) rather than quadrature.
    pub short_circuit: bool,
}

/// Solution values on the tensor grid `xs x ts`, stored row-major in `x`.
#[derive(Debug, Clone)]
pub struct SolutionGrid {
    xs: Vec<f64>,
    ts: Vec<f64>,
    values: Vec<f64>,
    diags: Vec<PointDiag>,
    scenario: Scenario,
    contour: Option<ContourConfig>,
}

impl SolutionGrid {
    pub fn new(
        scenario: Scenario,
        xs: Vec<f64>,
        ts: Vec<f64>,
        values: Vec<f64>,
        diags: Vec<PointDiag>,
        contour: Option<ContourConfig>,
    ) -> Result<Self, SolverError> {
        if values.len() != xs.len() * ts.len() {
            return Err(SolverError::Invalid(format!(
                "grid dimensions inconsistent: {} values for {} x {} points",
                values.len(),
                xs.len(),
                ts.len()
            )));
        }
        if !diags.is_empty() && diags.len() != values.len() {
            return Err(SolverError::Invalid(
                "diagnostics length does not match values".into(),
            ));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(SolverError::Invalid(format!(
                "grid contains non-finite value {bad}"
            )));
        }
        Ok(Self {
            xs,
            ts,
            values,
            diags,
            scenario,
            contour,
        })
    }

    #[inline]
    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    #[inline]
    pub fn ts(&self) -> &[f64] {
        &self.ts
    }

    #[inline]
    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    #[inline]
    pub fn contour(&self) -> Option<&ContourConfig> {
        self.contour.as_ref()
    }

    #[inline]
    pub fn value(&self, ix: usize, it: usize) -> f64 {
        self.values[ix * self.ts.len() + it]
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn diag(&self, ix: usize, it: usize) -> Option<&PointDiag> {
        self.diags.get(ix * self.ts.len() + it)
    }

    pub fn diags(&self) -> &[PointDiag] {
        &self.diags
    }

    /// Iterate `(ix, it, x, t, value)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64, f64, f64)> + '_ {
        let nt = self.ts.len();
        self.values.iter().enumerate().map(move |(k, v)| {
            let ix = k / nt;
            let it = k % nt;
            (ix, it, self.xs[ix], self.ts[it], *v)
        })
    }

    /// Same xs/ts as another grid, within exact equality.
    pub fn same_grid(&self, other: &SolutionGrid) -> bool {
        self.xs == other.xs && self.ts == other.ts
    }

    /// Map values pointwise, keeping the grid and diagnostics.
    pub fn map_values(mut self, f: impl Fn(f64) -> f64) -> Result<Self, SolverError> {
        for v in &mut self.values {
            *v = f(*v);
        }
        if let Some(bad) = self.values.iter().find(|v| !v.is_finite()) {
            return Err(SolverError::Invalid(format!(
                "mapped grid contains non-finite value {bad}"
            )));
        }
        Ok(self)
    }
}
