//! Cross-validation of the scenario solvers against the independent
//! finite-difference oracle, the series/closed-form references, and each
//! other.

use infil_core::fd::{refine_until, FdConfig};
use infil_core::quadrature::Side;
use infil_core::reference::{philip_theta, tracy_series, SeriesControl};
use infil_core::solver::{
    i1_closed, i1_direct_quadrature, FloodingSolver, GeneralSolver, HalfLineSolver,
    RainfallSolver, TankParameters, TankSolver,
};
use infil_core::{
    BoundaryData, ContourConfig, InitialData, ProfileProblem, TransportCoefficients,
};
use rand::{Rng, SeedableRng};

fn coeffs(d0: f64, k0: f64) -> TransportCoefficients {
    TransportCoefficients::new(d0, k0).unwrap()
}

/// Shallow-profile flooding benchmark coefficients.
fn case1() -> (TransportCoefficients, f64) {
    (coeffs(0.5, 1.0), 0.05)
}

/// Field-scale flooding benchmark coefficients (content units, cm-s).
fn case2() -> (TransportCoefficients, f64) {
    (coeffs(0.4653, 4.32 / 3600.0 / 0.31), 140.0)
}

/// Tank benchmark, hour-scale variant, in cm-s base units.
fn tank_case2() -> TankParameters {
    TankParameters {
        a: 1e-6,
        ks: 9e-3,
        theta1: 0.5,
        theta0: 0.11,
        h0: -1e7,
        length: 1000.0,
    }
}

/// Tank benchmark, day-scale variant, in cm-s base units.
fn tank_case1() -> TankParameters {
    TankParameters {
        a: 0.001,
        ks: 1e-4,
        theta1: 0.45,
        theta0: 0.15,
        h0: -2000.0,
        length: 5000.0,
    }
}

#[test]
fn i1_closed_matches_direct_quadrature() {
    let (c, length) = case1();
    let closed = i1_closed(0.0, c, length);
    assert!((closed - (-3.3026655533062046)).abs() < 1e-12);
    let cfg = ContourConfig::default();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    for _ in 0..8 {
        let length = rng.gen_range(0.5..30.0);
        let d0 = rng.gen_range(0.05..2.0);
        let ratio = rng.gen_range(0.05..3.0); // ct * L
        let k0 = 2.0 * d0 * ratio / length;
        let x = rng.gen_range(0.1..0.9) * length;
        let c = coeffs(d0, k0);
        let quad = i1_direct_quadrature(x, c, length, &cfg).unwrap();
        let closed = i1_closed(x, c, length);
        assert!(
            (quad - closed).abs() <= 1e-8 * (1.0 + closed.abs()),
            "L={length} d0={d0} k0={k0} x={x}: quad {quad} vs closed {closed}"
        );
    }
}

#[test]
fn flooding_boundary_cases_and_fd_agreement() {
    let (c, length) = case1();
    let cfg = ContourConfig::default();
    let solver = FloodingSolver::new(0.0, 1.9355, c, length, cfg).unwrap();
    // boundary short-circuits
    assert_eq!(solver.value_at(length, 0.7).unwrap().0, 0.0);
    assert_eq!(solver.value_at(0.0, 0.7).unwrap().0, 1.9355);
    assert_eq!(solver.value_at(0.02, 0.0).unwrap().0, 0.0);

    let problem = ProfileProblem::new(
        length,
        c,
        InitialData::Constant(0.0),
        BoundaryData::Constant(1.9355),
        BoundaryData::Constant(0.0),
    )
    .unwrap();
    let xs: Vec<f64> = (1..50).map(|i| i as f64 * length / 50.0).collect();
    let ts = [0.03, 0.06, 0.6];
    let fd = refine_until(&problem, &FdConfig::default(), &xs, &ts, 1e-5).unwrap();
    let mut worst = 0.0f64;
    for (ix, &x) in xs.iter().enumerate() {
        for (it, &t) in ts.iter().enumerate() {
            let (v, _) = solver.value_at(x, t).unwrap();
            worst = worst.max((v - fd.grid.value(ix, it)).abs());
        }
    }
    println!("flooding case1 vs refined oracle: {worst:.3e}");
    assert!(worst < 1e-5, "disagreement {worst:.3e}");
}

#[test]
fn flooding_range_bound_and_time_monotonicity() {
    let (c, length) = case2();
    let cfg = ContourConfig::default();
    let (theta0, theta1) = (0.025, 0.335);
    let solver = FloodingSolver::new(theta0, theta1, c, length, cfg).unwrap();
    let xs: Vec<f64> = (0..=50).map(|i| i as f64 * length / 50.0).collect();
    let ts = [900.0, 1800.0, 2700.0];
    let grid = solver.solve_grid(&xs, &ts).unwrap();
    for (ix, _, _, _, v) in grid.iter() {
        assert!(
            v >= theta0 - 1e-6 && v <= theta1 + 1e-6,
            "range violation {v} at ix={ix}"
        );
    }
    for ix in 0..xs.len() {
        for it in 1..ts.len() {
            assert!(
                grid.value(ix, it) >= grid.value(ix, it - 1) - 1e-6,
                "wetting front receded at x={}",
                xs[ix]
            );
        }
    }
}

#[test]
fn general_solver_zero_data_and_flooding_consistency() {
    let (c, length) = case1();
    let mut cfg = ContourConfig::default();
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-13;
    // zero data -> identically zero
    let zero = ProfileProblem::new(
        length,
        c,
        InitialData::Zero,
        BoundaryData::Zero,
        BoundaryData::Zero,
    )
    .unwrap();
    let gen = GeneralSolver::new(zero, cfg).unwrap();
    for x in [0.01, 0.03] {
        for t in [0.05, 0.5] {
            assert_eq!(gen.value_at(x, t).unwrap().0, 0.0);
        }
    }
    // unshifted flooding data: all five terms against the split solver
    let flood = FloodingSolver::new(0.025, 0.335, c, length, cfg).unwrap();
    let problem = ProfileProblem::new(
        length,
        c,
        InitialData::Constant(0.025),
        BoundaryData::Constant(0.335),
        BoundaryData::Constant(0.025),
    )
    .unwrap();
    let gen = GeneralSolver::new(problem, cfg).unwrap();
    let mut worst = 0.0f64;
    for x in [0.005, 0.017, 0.03, 0.045] {
        for t in [0.01, 0.06, 0.6] {
            let (a, _) = flood.value_at(x, t).unwrap();
            let (b, _) = gen.value_at(x, t).unwrap();
            worst = worst.max((a - b).abs());
        }
    }
    println!("general vs flooding: {worst:.3e}");
    assert!(worst < 1e-7, "worst {worst:.3e}");
}

#[test]
fn general_solver_case2_vs_oracle() {
    let (c, length) = case2();
    let cfg = ContourConfig::default();
    let problem = ProfileProblem::new(
        length,
        c,
        InitialData::Constant(0.025),
        BoundaryData::Constant(0.335),
        BoundaryData::Constant(0.025),
    )
    .unwrap();
    let gen = GeneralSolver::new(problem.clone(), cfg).unwrap();
    let xs: Vec<f64> = (1..36).map(|i| i as f64 * length / 36.0).collect();
    let ts = [900.0, 1800.0, 2700.0];
    let fd = refine_until(&problem, &FdConfig::default(), &xs, &ts, 1e-5).unwrap();
    let mut worst = 0.0f64;
    for (ix, &x) in xs.iter().enumerate() {
        for (it, &t) in ts.iter().enumerate() {
            let (v, _) = gen.value_at(x, t).unwrap();
            worst = worst.max((v - fd.grid.value(ix, it)).abs());
        }
    }
    println!("general case2 vs oracle: {worst:.3e}");
    assert!(worst < 1e-4, "disagreement {worst:.3e}");
}

#[test]
fn tank_identities_and_tracy_agreement() {
    let cfg = ContourConfig::default();
    let params = tank_case2();
    let solver = TankSolver::new(params, cfg).unwrap();
    // boundary identities
    assert_eq!(solver.head_at(0.0, 10.0).unwrap().0, params.h0);
    assert_eq!(solver.head_at(params.length, 10.0).unwrap().0, 0.0);
    // interior agreement with the eigenfunction series, relative in head
    let ctl = SeriesControl::default();
    let mut worst = 0.0f64;
    for x in [200.0, 500.0, 800.0, 920.0, 940.0, 960.0] {
        for t in [1.8, 3.6, 36.0] {
            let (h, _) = solver.head_at(x, t).unwrap();
            let ht = tracy_series(x, t, &params, &ctl).unwrap().value;
            worst = worst.max((h - ht).abs() / ht.abs().max(1.0));
        }
    }
    println!("tank case2 vs series (relative): {worst:.3e}");
    assert!(worst < 1e-4, "worst {worst:.3e}");
}

#[test]
fn tank_case1_series_absolute_agreement() {
    // Both methods converged: deviation below 1e-5 in head units (cm).
    let mut cfg = ContourConfig::default();
    cfg.rel_tol = 1e-10;
    let params = tank_case1();
    let solver = TankSolver::new(params, cfg).unwrap();
    let ctl = SeriesControl::default();
    let mut worst = 0.0f64;
    for x in [1000.0, 2500.0, 4000.0, 4500.0, 4700.0] {
        for t in [86400.0, 5.0 * 86400.0, 10.0 * 86400.0] {
            let (h, _) = solver.head_at(x, t).unwrap();
            let ht = tracy_series(x, t, &params, &ctl).unwrap().value;
            worst = worst.max((h - ht).abs());
        }
    }
    println!("tank case1 vs series (absolute, cm): {worst:.3e}");
    assert!(worst < 1e-5, "worst {worst:.3e} cm");
}

#[test]
fn tank_vs_fd_in_transformed_variable() {
    let cfg = ContourConfig::default();
    let params = tank_case2();
    let solver = TankSolver::new(params, cfg).unwrap();
    let problem = ProfileProblem::new(
        params.length,
        params.coeffs().unwrap(),
        InitialData::Zero,
        BoundaryData::Zero,
        BoundaryData::Constant(1.0 - params.eps()),
    )
    .unwrap();
    let xs: Vec<f64> = (1..40).map(|i| i as f64 * params.length / 40.0).collect();
    let ts = [1.8, 3.6, 36.0];
    let fd = refine_until(&problem, &FdConfig::default(), &xs, &ts, 1e-5).unwrap();
    let mut worst = 0.0f64;
    for (ix, &x) in xs.iter().enumerate() {
        for (it, &t) in ts.iter().enumerate() {
            let (ha, _) = solver.transformed_at(x, t).unwrap();
            worst = worst.max((ha - fd.grid.value(ix, it)).abs());
        }
    }
    println!("tank case2 vs oracle (transformed): {worst:.3e}");
    assert!(worst < 1e-4, "disagreement {worst:.3e}");
}

#[test]
fn rainfall_boundary_exactness_and_oracle() {
    let a = 0.001;
    let d0 = 0.387;
    let k0 = a * d0;
    let ka = a * k0;
    let c = coeffs(d0, k0);
    let length = 14000.0;
    let surface = BoundaryData::BraesterFlux { ka, theta_offset: 0.0 };
    let solver =
        RainfallSolver::new(0.025, surface.clone(), c, length, ContourConfig::default()).unwrap();
    // boundary exactness at the surface
    for t in [60.0, 300.0, 600.0] {
        let (v, _) = solver.value_at(0.0, t).unwrap();
        assert_eq!(v, infil_core::transforms::braester_f2(t, ka));
    }
    // degenerate compatible datum: constant surface equal to the initial content
    let degenerate = RainfallSolver::new(
        0.025,
        BoundaryData::Tabulated(vec![(0.0, 0.025), (1e9, 0.025)]),
        c,
        length,
        ContourConfig::default(),
    )
    .unwrap();
    for (x, t) in [(5.0, 300.0), (40.0, 600.0)] {
        let (v, _) = degenerate.value_at(x, t).unwrap();
        assert!((v - 0.025).abs() < 1e-8, "compatible constant drifted: {v}");
    }
    // oracle agreement near the surface where the response is active
    let problem = ProfileProblem::new(
        length,
        c,
        InitialData::Constant(0.025),
        surface,
        BoundaryData::Constant(0.025),
    )
    .unwrap();
    let xs = [2.0, 10.0, 30.0, 80.0, 150.0];
    let ts = [300.0, 420.0, 600.0];
    let fd = refine_until(
        &problem,
        &FdConfig { nx: 28000, nt_min: 600, ..Default::default() },
        &xs,
        &ts,
        1e-5,
    )
    .unwrap();
    let mut worst = 0.0f64;
    for (ix, &x) in xs.iter().enumerate() {
        for (it, &t) in ts.iter().enumerate() {
            let (v, _) = solver.value_at(x, t).unwrap();
            worst = worst.max((v - fd.grid.value(ix, it)).abs());
        }
    }
    println!("rainfall vs oracle: {worst:.3e}");
    assert!(worst < 1e-4, "disagreement {worst:.3e}");
}

#[test]
fn half_line_closed_form_and_zero_data() {
    let (c, _) = case2();
    let cfg = ContourConfig::default();
    // zero data -> zero
    let hl = HalfLineSolver::new(InitialData::Zero, BoundaryData::Zero, c, cfg).unwrap();
    for (x, t) in [(3.0, 100.0), (40.0, 2000.0)] {
        let (v, _) = hl.value_at(x, t).unwrap();
        assert!(v.abs() < 1e-12);
    }
    // constant-inlet closed form (erfc pair with the advective image term)
    let hl = HalfLineSolver::new(
        InitialData::Constant(0.025),
        BoundaryData::Constant(0.335),
        c,
        cfg,
    )
    .unwrap();
    // boundary exactness
    assert_eq!(hl.value_at(0.0, 900.0).unwrap().0, 0.335);
    let mut worst = 0.0f64;
    for x in [5.0, 20.0, 50.0, 120.0] {
        for t in [900.0, 2700.0] {
            let (v, _) = hl.value_at(x, t).unwrap();
            let w = 0.025
                + (0.335 - 0.025) * philip_theta(x, t, c.d0(), c.k0() * 0.31, 0.025, 0.335);
            worst = worst.max((v - w).abs());
        }
    }
    println!("half line vs erfc closed form: {worst:.3e}");
    assert!(worst < 1e-7, "worst {worst:.3e}");
}

#[test]
fn half_line_matches_large_bounded_profile() {
    let (c, _) = case2();
    let cfg = ContourConfig::default();
    let t_max = 2700.0;
    let ell = (c.d0() * t_max).sqrt();
    let big_l = 20.0 * ell;
    let flood = FloodingSolver::new(0.025, 0.335, c, big_l, cfg).unwrap();
    let hl = HalfLineSolver::new(
        InitialData::Constant(0.025),
        BoundaryData::Constant(0.335),
        c,
        cfg,
    )
    .unwrap();
    let mut worst = 0.0f64;
    for i in 1..=10 {
        let x = i as f64 * big_l / 40.0;
        for t in [900.0, t_max] {
            let (a, _) = flood.value_at(x, t).unwrap();
            let (b, _) = hl.value_at(x, t).unwrap();
            worst = worst.max((a - b).abs());
        }
    }
    println!("bounded 20-diffusion-length vs half line: {worst:.3e}");
    assert!(worst < 1e-6, "worst {worst:.3e}");
}

#[test]
fn representation_sides_agree_across_scenarios() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
    // flooding, shallow benchmark
    let (c, length) = case1();
    let cfg = ContourConfig::default();
    let flood = FloodingSolver::new(0.0, 1.9355, c, length, cfg).unwrap();
    for _ in 0..12 {
        let x = rng.gen_range(0.1..0.9) * length;
        let t = rng.gen_range(0.02..0.8);
        let (u, _) = flood.value_at_on(x, t, Side::Upper).unwrap();
        let (l, _) = flood.value_at_on(x, t, Side::Lower).unwrap();
        assert!(
            (u - l).abs() <= 1e-8 * (1.0 + u.abs()),
            "flooding sides differ at ({x}, {t}): {u} vs {l}"
        );
    }
    // tank (reversed advection): natural side is the lower one
    let params = tank_case2();
    let tank = TankSolver::new(params, cfg).unwrap();
    for _ in 0..12 {
        let x = rng.gen_range(0.1..0.9) * params.length;
        let t = rng.gen_range(1.0..40.0);
        let (u, _) = tank.transformed_at_on(x, t, Side::Upper).unwrap();
        let (l, _) = tank.transformed_at_on(x, t, Side::Lower).unwrap();
        assert!(
            (u - l).abs() <= 1e-8 * (1.0 + u.abs()),
            "tank sides differ at ({x}, {t}): {u} vs {l}"
        );
    }
}

#[test]
fn small_time_fallback_returns_initial_data() {
    let (c, length) = case1();
    let mut cfg = ContourConfig::default();
    cfg.max_nodes = 600; // tiny budget forces a visible threshold
    let solver = FloodingSolver::new(0.1, 1.0, c, length, cfg).unwrap();
    let t_min = solver.min_time();
    assert!(t_min > 0.0);
    let (v, diag) = solver.value_at(0.02, 0.5 * t_min).unwrap();
    assert_eq!(v, 0.1);
    assert!(diag.short_circuit);
}
