//! Analytical and numerical solvers for one-dimensional vertical infiltration
//! in a bounded profile.
//!
//! The governing model is the linear advection-diffusion initial boundary
//! value problem
//!
//! ```text
//!   u_t + k0 u_x = d0 u_xx          on (0, L), t > 0
//!   u(x, 0) = u0(x)
//!   u(0, t) = f(t),  u(L, t) = g(t)
//! ```
//!
//! which arises from the Richards equation for water content under constant
//! diffusivity and conductivity linear in the content. The solution is
//! represented with the unified transform (Fokas method) as contour integrals
//! of spectral transforms of the initial and boundary data, and evaluated by
//! adaptive quadrature along deformed contours in the complex plane.
//!
//! The crate is `no_std`-compatible (it requires `alloc`); all floating-point
//! math goes through `libm` in that configuration.
//!
//! Module map:
//!
//! * [`spectral`] - problem description and the exact spectral functions
//!   (dispersion relation, invariant map, characteristic determinant).
//! * [`transforms`] - transforms of initial and boundary data, closed-form
//!   where possible, adaptive time quadrature otherwise.
//! * [`quadrature`] - adaptive Gauss-Kronrod machinery for the real line and
//!   the deformed ray contours.
//! * [`solver`] - the scenario solvers (general data, flooding, constant-flux
//!   rainfall, pressure tank, half line).
//! * [`reference`] - classical closed-form/series reference solutions.
//! * [`fd`] - an independent Crank-Nicolson finite-difference oracle.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod error;
pub mod fd;
pub mod grid;
pub mod quadrature;
pub mod reference;
pub mod solver;
pub mod special;
pub mod spectral;
pub mod transforms;

pub use error::{FdError, QuadError, SeriesError, SolverError};
pub use grid::{PointDiag, Scenario, SolutionGrid};
pub use quadrature::ContourConfig;
pub use reference::SeriesControl;
pub use solver::TankParameters;
pub use spectral::{
    BoundaryData, InitialData, ProfileProblem, SpectralContext, TransportCoefficients,
};

/// Complex double used throughout.
pub type C64 = num_complex::Complex<f64>;
