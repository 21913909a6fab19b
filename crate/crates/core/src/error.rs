//! Error types shared across the crate.

use alloc::string::String;
use core::fmt;

/// Failures of the contour/real-line quadrature engine.
#[derive(Debug, Clone, PartialEq)]
pub enum QuadError {
    /// Adaptive refinement exhausted the node budget before reaching the
    /// requested tolerance.
    NonConvergent { nodes: usize, err_est: f64 },
    /// The integrand magnitude at the truncation radius is incompatible with
    /// the requested absolute tolerance; the caller's decay estimate is off.
    TruncationDominated { tail_est: f64, limit: f64 },
    /// A time-dependent integral was requested at t <= 0 where the Gaussian
    /// damping vanishes; the caller must special-case t = 0.
    DegenerateTime,
    /// The local Laurent expansion around the bypassed point did not
    /// stabilise between two probe radii.
    SingularityNotResolved { residue_drift: f64 },
    /// Invalid configuration value.
    InvalidConfig(&'static str),
}

impl fmt::Display for QuadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadError::NonConvergent { nodes, err_est } => write!(
                f,
                "quadrature did not converge within {nodes} nodes (error estimate {err_est:.3e})"
            ),
            QuadError::TruncationDominated { tail_est, limit } => write!(
                f,
                "estimated truncation tail {tail_est:.3e} exceeds limit {limit:.3e}; decay scale misused"
            ),
            QuadError::DegenerateTime => write!(f, "integral requested at t <= 0"),
            QuadError::SingularityNotResolved { residue_drift } => write!(
                f,
                "local expansion at the bypassed point did not converge (residue drift {residue_drift:.3e})"
            ),
            QuadError::InvalidConfig(what) => write!(f, "invalid contour configuration: {what}"),
        }
    }
}

impl core::error::Error for QuadError {}

/// Failures of series summation in the reference solutions.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesError {
    /// The tail bound was still above tolerance when the term budget ran out.
    /// Expected for very small times; reported rather than silently truncated.
    NotConverged { terms: usize, tail_bound: f64 },
    /// The argument of the logarithm became non-positive.
    LogDomain { argument: f64 },
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::NotConverged { terms, tail_bound } => write!(
                f,
                "series not converged after {terms} terms (tail bound {tail_bound:.3e})"
            ),
            SeriesError::LogDomain { argument } => {
                write!(f, "log argument {argument:.3e} is not positive")
            }
        }
    }
}

impl core::error::Error for SeriesError {}

/// Failures of the finite-difference oracle.
#[derive(Debug, Clone, PartialEq)]
pub enum FdError {
    /// Grid Peclet/Courant constraints cannot be met within the size budget.
    UnstableDiscretization { nx_required: usize, nx_limit: usize },
    /// Successive refinements did not self-converge within the budget.
    NoConvergence { achieved: f64, target: f64 },
    InvalidConfig(&'static str),
}

impl fmt::Display for FdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FdError::UnstableDiscretization { nx_required, nx_limit } => write!(
                f,
                "stable discretization needs nx >= {nx_required}, above the limit {nx_limit}"
            ),
            FdError::NoConvergence { achieved, target } => write!(
                f,
                "refinement stalled at {achieved:.3e} (target {target:.3e})"
            ),
            FdError::InvalidConfig(what) => write!(f, "invalid FD configuration: {what}"),
        }
    }
}

impl core::error::Error for FdError {}

/// Top-level solver error with evaluation-point context.
#[derive(Debug, Clone, PartialEq)]
pub enum SolverError {
    /// Quadrature failure while evaluating the solution at (x, t).
    Quadrature { x: f64, t: f64, source: QuadError },
    /// The tank solution left the admissible range of the exponential
    /// transform, so the pressure head logarithm is undefined. Signals a
    /// quadrature failure since the exact solution stays in range.
    LogDomain { x: f64, t: f64, argument: f64 },
    /// Invalid problem datum.
    Invalid(String),
    Series(SeriesError),
    Fd(FdError),
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverError::Quadrature { x, t, source } => {
                write!(f, "quadrature failed at (x = {x:.6e}, t = {t:.6e}): {source}")
            }
            SolverError::LogDomain { x, t, argument } => write!(
                f,
                "transformed head {argument:.3e} not positive at (x = {x:.6e}, t = {t:.6e})"
            ),
            SolverError::Invalid(what) => write!(f, "invalid problem: {what}"),
            SolverError::Series(e) => write!(f, "{e}"),
            SolverError::Fd(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SolverError {}

impl From<SeriesError> for SolverError {
    fn from(e: SeriesError) -> Self {
        SolverError::Series(e)
    }
}

impl From<FdError> for SolverError {
    fn from(e: FdError) -> Self {
        SolverError::Fd(e)
    }
}

impl SolverError {
    pub(crate) fn quad_at(x: f64, t: f64) -> impl FnOnce(QuadError) -> SolverError {
        move |source| SolverError::Quadrature { x, t, source }
    }
}
