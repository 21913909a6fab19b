//! Problem description and the exact spectral functions entering every
//! integral representation: the dispersion relation `omega`, the invariant
//! map `nu`, and the characteristic determinant `delta`.

use crate::error::SolverError;
use crate::special::cexpm1;
use crate::C64;
use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)] // float math trait; required for no_std builds
use num_traits::Float;

/// Transport coefficients of the linear advection-diffusion equation
/// `u_t + k0 u_x = d0 u_xx`.
///
/// `k0` is signed: a negative value encodes reversed advection, as in the
/// pressure-tank scenario where the unknown is a transformed pressure head
/// rather than a water content.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportCoefficients {
    d0: f64,
    k0: f64,
}

impl TransportCoefficients {
    pub fn new(d0: f64, k0: f64) -> Result<Self, SolverError> {
        if !(d0 > 0.0) || !d0.is_finite() {
            return Err(SolverError::Invalid(format!(
                "diffusivity d0 must be positive and finite, got {d0}"
            )));
        }
        if !k0.is_finite() {
            return Err(SolverError::Invalid(format!(
                "advective coefficient k0 must be finite, got {k0}"
            )));
        }
        Ok(Self { d0, k0 })
    }

    #[inline]
    pub fn d0(&self) -> f64 {
        self.d0
    }

    #[inline]
    pub fn k0(&self) -> f64 {
        self.k0
    }

    /// Half drift-to-diffusion ratio `k0 / (2 d0)`, the imaginary shift of
    /// the spectral variable.
    #[inline]
    pub fn half_ratio(&self) -> f64 {
        0.5 * self.k0 / self.d0
    }
}

/// Initial water-content profile on `[0, L]`.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    Zero,
    Constant(f64),
    /// Piecewise-linear samples `(x, value)`, strictly increasing in `x`,
    /// covering `[0, L]`.
    Tabulated(Vec<(f64, f64)>),
}

impl InitialData {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            InitialData::Zero => 0.0,
            InitialData::Constant(c) => *c,
            InitialData::Tabulated(samples) => interp_linear(samples, x),
        }
    }

    fn validate(&self, length: f64) -> Result<(), SolverError> {
        if let InitialData::Tabulated(samples) = self {
            validate_samples(samples, "initial data")?;
            let first = samples.first().map(|s| s.0).unwrap_or(f64::NAN);
            let last = samples.last().map(|s| s.0).unwrap_or(f64::NAN);
            if first > 1e-12 * length || last < length * (1.0 - 1e-12) {
                return Err(SolverError::Invalid(format!(
                    "tabulated initial data must cover [0, {length}], got [{first}, {last}]"
                )));
            }
        }
        Ok(())
    }
}

/// Time-dependent boundary value at one end of the profile.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryData {
    Zero,
    Constant(f64),
    /// The constant-flux rainfall surface value: `f2(t; ka) + theta_offset`,
    /// where `f2` is the erfc-based flux response (see
    /// [`crate::transforms::braester_f2`]) and `ka > 0` its rate constant.
    BraesterFlux { ka: f64, theta_offset: f64 },
    /// Piecewise-linear samples `(t, value)`, strictly increasing in `t`,
    /// starting at `t = 0`. Held constant beyond the last sample.
    Tabulated(Vec<(f64, f64)>),
}

impl BoundaryData {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            BoundaryData::Zero => 0.0,
            BoundaryData::Constant(c) => *c,
            BoundaryData::BraesterFlux { ka, theta_offset } => {
                crate::transforms::braester_f2(t, *ka) + theta_offset
            }
            BoundaryData::Tabulated(samples) => interp_linear(samples, t),
        }
    }

    pub(crate) fn validate(&self) -> Result<(), SolverError> {
        match self {
            BoundaryData::BraesterFlux { ka, .. } => {
                if !(*ka > 0.0) {
                    return Err(SolverError::Invalid(format!(
                        "BraesterFlux rate ka must be positive, got {ka}"
                    )));
                }
            }
            BoundaryData::Tabulated(samples) => {
                validate_samples(samples, "boundary data")?;
                if samples.first().map(|s| s.0).unwrap_or(f64::NAN).abs() > 0.0 {
                    return Err(SolverError::Invalid(
                        "tabulated boundary data must start at t = 0".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

fn validate_samples(samples: &[(f64, f64)], what: &str) -> Result<(), SolverError> {
    if samples.len() < 2 {
        return Err(SolverError::Invalid(format!(
            "tabulated {what} needs at least two samples"
        )));
    }
    for pair in samples.windows(2) {
        if !(pair[1].0 > pair[0].0) {
            return Err(SolverError::Invalid(format!(
                "tabulated {what} abscissae must be strictly increasing"
            )));
        }
    }
    if samples.iter().any(|s| !s.0.is_finite() || !s.1.is_finite()) {
        return Err(SolverError::Invalid(format!(
            "tabulated {what} contains non-finite entries"
        )));
    }
    Ok(())
}

fn interp_linear(samples: &[(f64, f64)], x: f64) -> f64 {
    match samples.binary_search_by(|s| s.0.partial_cmp(&x).unwrap()) {
        Ok(i) => samples[i].1,
        Err(0) => samples[0].1,
        Err(i) if i == samples.len() => samples[samples.len() - 1].1,
        Err(i) => {
            let (x0, v0) = samples[i - 1];
            let (x1, v1) = samples[i];
            v0 + (v1 - v0) * (x - x0) / (x1 - x0)
        }
    }
}

/// The initial boundary value problem instance on `(0, L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileProblem {
    length: f64,
    coeffs: TransportCoefficients,
    initial: InitialData,
    left_bc: BoundaryData,
    right_bc: BoundaryData,
}

impl ProfileProblem {
    pub fn new(
        length: f64,
        coeffs: TransportCoefficients,
        initial: InitialData,
        left_bc: BoundaryData,
        right_bc: BoundaryData,
    ) -> Result<Self, SolverError> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(SolverError::Invalid(format!(
                "profile length must be positive and finite, got {length}"
            )));
        }
        initial.validate(length)?;
        left_bc.validate()?;
        right_bc.validate()?;
        Ok(Self {
            length,
            coeffs,
            initial,
            left_bc,
            right_bc,
        })
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.length
    }

    #[inline]
    pub fn coeffs(&self) -> TransportCoefficients {
        self.coeffs
    }

    #[inline]
    pub fn initial(&self) -> &InitialData {
        &self.initial
    }

    #[inline]
    pub fn left_bc(&self) -> &BoundaryData {
        &self.left_bc
    }

    #[inline]
    pub fn right_bc(&self) -> &BoundaryData {
        &self.right_bc
    }

    pub fn spectral(&self) -> SpectralContext {
        SpectralContext::new(self.coeffs, self.length)
    }
}

/// Spectral data of a problem: the dispersion relation, the invariant map,
/// the shifted variable and the characteristic determinant, for fixed
/// coefficients and interval length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralContext {
    coeffs: TransportCoefficients,
    length: f64,
}

impl SpectralContext {
    pub fn new(coeffs: TransportCoefficients, length: f64) -> Self {
        Self { coeffs, length }
    }

    #[inline]
    pub fn coeffs(&self) -> TransportCoefficients {
        self.coeffs
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Dispersion relation `omega(lambda) = d0 lambda^2 + i k0 lambda`, the
    /// time exponent of the spectral evolution.
    #[inline]
    pub fn omega(&self, lambda: C64) -> C64 {
        let TransportCoefficients { d0, k0 } = self.coeffs;
        d0 * lambda * lambda + C64::new(0.0, k0) * lambda
    }

    /// Invariant map `nu(lambda) = -lambda - i k0/d0`. It is an involution
    /// and satisfies `omega(nu(lambda)) = omega(lambda)`; it is what
    /// eliminates the unknown boundary fluxes from the global relation.
    #[inline]
    pub fn nu(&self, lambda: C64) -> C64 {
        -lambda - C64::new(0.0, self.coeffs.k0 / self.coeffs.d0)
    }

    /// Shifted spectral variable `mu(lambda) = lambda + i k0/(2 d0)`, in
    /// which the representation kernels are plain sines.
    #[inline]
    pub fn mu(&self, lambda: C64) -> C64 {
        lambda + C64::new(0.0, self.coeffs.half_ratio())
    }

    /// Characteristic determinant `delta(lambda) = e^{-i lambda L} - e^{-i nu(lambda) L}`.
    ///
    /// Evaluated as `scale * (1 - e^{+-2 i mu L})` with the scale chosen as
    /// the dominant of the two exponentials, so the cancellation near the
    /// root family is isolated in an `expm1`-style factor. The value itself
    /// still grows like the dominant exponential; the solvers only ever use
    /// it through ratios.
    pub fn delta(&self, lambda: C64) -> C64 {
        let mu = self.mu(lambda);
        let i = C64::new(0.0, 1.0);
        if mu.im >= 0.0 {
            // |e^{-i lambda L}| dominates.
            let scale = (-i * lambda * self.length).exp();
            scale * -cexpm1(2.0 * i * mu * self.length)
        } else {
            let scale = (-i * self.nu(lambda) * self.length).exp();
            scale * cexpm1(-2.0 * i * mu * self.length)
        }
    }

    /// Roots of `delta`: `lambda_n = -i k0/(2 d0) + n pi / L`. Used by tests
    /// and contour-safety checks only.
    pub fn delta_roots(&self, n_range: core::ops::RangeInclusive<i64>) -> Vec<C64> {
        let shift = -self.coeffs.half_ratio();
        n_range
            .map(|n| C64::new(n as f64 * core::f64::consts::PI / self.length, shift))
            .collect()
    }

    /// Roots of `omega`: `0` and `-i k0/d0`.
    pub fn omega_roots(&self) -> [C64; 2] {
        [
            C64::new(0.0, 0.0),
            C64::new(0.0, -self.coeffs.k0 / self.coeffs.d0),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn ctx(d0: f64, k0: f64, length: f64) -> SpectralContext {
        SpectralContext::new(TransportCoefficients::new(d0, k0).unwrap(), length)
    }

    #[test]
    fn coefficient_validation() {
        assert!(TransportCoefficients::new(0.0, 1.0).is_err());
        assert!(TransportCoefficients::new(-1.0, 1.0).is_err());
        assert!(TransportCoefficients::new(1.0, f64::NAN).is_err());
        // k0 = 0 (pure diffusion) and k0 < 0 (reversed advection) are legal
        assert!(TransportCoefficients::new(1.0, 0.0).is_ok());
        assert!(TransportCoefficients::new(1.0, -3.0).is_ok());
    }

    #[test]
    fn omega_direct_substitution() {
        let c = ctx(0.5, 1.0, 1.0);
        assert_eq!(c.omega(C64::new(0.0, 0.0)), C64::new(0.0, 0.0));
        let w = c.omega(C64::new(1.0, 0.0));
        assert!((w - C64::new(0.5, 1.0)).norm() < 1e-15);
        let w = c.omega(C64::new(0.0, 1.0));
        assert!((w - C64::new(-1.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn nu_substitution_involution_fixed_point() {
        let c = ctx(0.5, 1.0, 1.0); // k0/d0 = 2
        let v = c.nu(C64::new(1.0, 0.0));
        assert!((v - C64::new(-1.0, -2.0)).norm() < 1e-15);
        // fixed point at -i k0/(2 d0)
        let fp = C64::new(0.0, -1.0);
        assert!((c.nu(fp) - fp).norm() < 1e-15);
    }

    #[test]
    fn spectral_identities_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for &(d0, k0) in &[(0.5, 1.0), (0.4653, 0.0012), (2.0, -0.8), (1.0, 0.0)] {
            let c = ctx(d0, k0, 1.3);
            for _ in 0..1000 {
                let lambda = C64::new(
                    rng.gen_range(-1e3..1e3),
                    rng.gen_range(-1e3..1e3),
                );
                let nn = c.nu(c.nu(lambda));
                assert!(
                    (nn - lambda).norm() <= 1e-12 * (1.0 + lambda.norm()),
                    "involution failed at {lambda}"
                );
                let w = c.omega(lambda);
                let wn = c.omega(c.nu(lambda));
                assert!(
                    (wn - w).norm() <= 1e-10 * (1.0 + w.norm()),
                    "omega(nu) != omega at {lambda}: {wn} vs {w}"
                );
            }
        }
    }

    #[test]
    fn delta_at_zero_and_symmetric_case() {
        let c = ctx(0.5, 1.0, 0.05);
        // delta(0) = 1 - e^{-k0 L / d0}
        let want = 1.0 - (-1.0f64 * 0.05 / 0.5).exp();
        let got = c.delta(C64::new(0.0, 0.0));
        assert!((got - C64::new(want, 0.0)).norm() < 1e-15);
        // k0 = 0: delta(real lambda) = -2i sin(lambda L)
        let c = ctx(1.0, 0.0, 2.0);
        for lam in [0.3, 1.7, -2.2] {
            let got = c.delta(C64::new(lam, 0.0));
            let want = C64::new(0.0, -2.0 * (lam * 2.0).sin());
            assert!((got - want).norm() < 1e-14 * (1.0 + want.norm()));
        }
    }

    #[test]
    fn delta_roots_are_roots() {
        for &(d0, k0, length) in &[(0.5, 1.0, 0.05), (0.4653, 0.0012, 140.0), (2.3, -0.9, 7.0)] {
            let c = ctx(d0, k0, length);
            let half = 0.5 * k0 / d0;
            for (i, root) in c.delta_roots(-50..=50).iter().enumerate() {
                let n = i as i64 - 50;
                let want = C64::new(n as f64 * core::f64::consts::PI / length, -half);
                assert!((root - want).norm() < 1e-12 * (1.0 + want.norm()));
                let scale = ((half.abs()) * length).exp().max(1.0);
                assert!(
                    c.delta(*root).norm() <= 1e-10 * scale,
                    "delta(lambda_{n}) = {} not ~0 (scale {scale})",
                    c.delta(*root).norm()
                );
            }
        }
    }

    #[test]
    fn delta_root_example_n1() {
        let c = ctx(0.5, 1.0, 0.05);
        let r = c.delta_roots(1..=1)[0];
        assert!((r - C64::new(20.0 * core::f64::consts::PI, -1.0)).norm() < 1e-12);
        assert!((r.re - 62.8319).abs() < 1e-4);
    }

    /// Numerical Cauchy-Riemann check: delta is analytic.
    #[test]
    fn delta_analytic_cauchy_riemann() {
        let c = ctx(0.7, 0.9, 1.4);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let h = 1e-5;
        for _ in 0..50 {
            let z = C64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let dre = (c.delta(z + C64::new(h, 0.0)) - c.delta(z - C64::new(h, 0.0))) / (2.0 * h);
            let dim = (c.delta(z + C64::new(0.0, h)) - c.delta(z - C64::new(0.0, h))) / (2.0 * h);
            // f'(z) along real = f'(z) along i (times i)
            let scale = 1.0 + dre.norm();
            assert!(
                (dre - dim / C64::new(0.0, 1.0)).norm() <= 1e-6 * scale,
                "CR failed at {z}"
            );
        }
    }

    #[test]
    fn tabulated_validation_and_interp() {
        let coeffs = TransportCoefficients::new(1.0, 0.5).unwrap();
        let bad = ProfileProblem::new(
            1.0,
            coeffs,
            InitialData::Tabulated(alloc::vec![(0.0, 1.0), (0.5, 2.0)]),
            BoundaryData::Zero,
            BoundaryData::Zero,
        );
        assert!(bad.is_err(), "samples not covering [0, L] must be rejected");
        let bad = ProfileProblem::new(
            1.0,
            coeffs,
            InitialData::Constant(1.0),
            BoundaryData::Tabulated(alloc::vec![(0.1, 1.0), (0.5, 2.0)]),
            BoundaryData::Zero,
        );
        assert!(bad.is_err(), "boundary table must start at t = 0");
        let data = InitialData::Tabulated(alloc::vec![(0.0, 0.0), (1.0, 2.0)]);
        assert!((data.eval(0.25) - 0.5).abs() < 1e-15);
    }
}
