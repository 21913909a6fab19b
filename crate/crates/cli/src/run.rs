//! Scenario orchestration: solve, compare, persist.

use crate::config::{ComparisonKind, ResolvedConfig, ScenarioSpec};
use crate::output::{csv_string, plot_script};
use crate::report::{compare_grids, render, summarize_diags, ComparisonReport};
use anyhow::{anyhow, Context, Result};
use infil_core::fd::{refine_until, CornerMask};
use infil_core::grid::{PointDiag, Scenario};
use infil_core::reference::{philip_theta, tracy_series, SeriesControl};
use infil_core::solver::{
    FloodingSolver, GeneralSolver, HalfLineSolver, RainfallSolver, TankSolver,
};
use infil_core::{
    BoundaryData, InitialData, ProfileProblem, SolutionGrid, SolverError,
};
use rayon::prelude::*;
use std::path::PathBuf;
use std::time::Instant;

/// Why a run failed; drives the process exit code.
#[derive(Debug)]
pub enum RunError {
    /// Configuration or I/O problem (exit 1).
    Config(anyhow::Error),
    /// Numerical failure with diagnostics (exit 2).
    Numerical(anyhow::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "configuration error: {e:#}"),
            RunError::Numerical(e) => write!(f, "numerical failure: {e:#}"),
        }
    }
}

impl std::error::Error for RunError {}

fn numerical(e: SolverError) -> RunError {
    RunError::Numerical(anyhow!("{e}"))
}

/// A scenario solver behind one point-evaluation surface.
pub enum AnySolver {
    Flooding(FloodingSolver),
    Rainfall(RainfallSolver),
    Tank(TankSolver),
    General(GeneralSolver),
    HalfLine(HalfLineSolver),
}

impl AnySolver {
    pub fn build(cfg: &ResolvedConfig) -> Result<Self, SolverError> {
        Ok(match &cfg.scenario {
            ScenarioSpec::Flooding {
                theta0,
                theta1,
                coeffs,
                length,
            } => AnySolver::Flooding(FloodingSolver::new(
                *theta0,
                *theta1,
                *coeffs,
                *length,
                cfg.contour,
            )?),
            ScenarioSpec::RainfallFlux {
                theta0,
                ka,
                coeffs,
                length,
            } => AnySolver::Rainfall(RainfallSolver::new(
                *theta0,
                BoundaryData::BraesterFlux {
                    ka: *ka,
                    theta_offset: 0.0,
                },
                *coeffs,
                *length,
                cfg.contour,
            )?),
            ScenarioSpec::PressureTank(p) => AnySolver::Tank(TankSolver::new(*p, cfg.contour)?),
            ScenarioSpec::General(p) => {
                AnySolver::General(GeneralSolver::new(p.clone(), cfg.contour)?)
            }
            ScenarioSpec::HalfLine {
                initial,
                surface,
                coeffs,
            } => AnySolver::HalfLine(HalfLineSolver::new(
                initial.clone(),
                surface.clone(),
                *coeffs,
                cfg.contour,
            )?),
        })
    }

    pub fn value_at(&self, x: f64, t: f64) -> Result<(f64, PointDiag), SolverError> {
        match self {
            AnySolver::Flooding(s) => s.value_at(x, t),
            AnySolver::Rainfall(s) => s.value_at(x, t),
            AnySolver::Tank(s) => s.head_at(x, t),
            AnySolver::General(s) => s.value_at(x, t),
            AnySolver::HalfLine(s) => s.value_at(x, t),
        }
    }

    pub fn scenario(&self) -> Scenario {
        match self {
            AnySolver::Flooding(_) => Scenario::Flooding,
            AnySolver::Rainfall(_) => Scenario::RainfallFlux,
            AnySolver::Tank(_) => Scenario::PressureTank,
            AnySolver::General(_) => Scenario::General,
            AnySolver::HalfLine(_) => Scenario::HalfLine,
        }
    }
}

/// Evaluate the scenario over the grid. Points are independent pure
/// evaluations, so the parallel map returns exactly the sequential values;
/// `sequential` exists for deterministic single-threaded reruns.
pub fn solve(cfg: &ResolvedConfig, sequential: bool) -> Result<SolutionGrid, SolverError> {
    let solver = AnySolver::build(cfg)?;
    let points: Vec<(f64, f64)> = cfg
        .xs
        .iter()
        .flat_map(|&x| cfg.ts.iter().map(move |&t| (x, t)))
        .collect();
    let results: Result<Vec<(f64, PointDiag)>, SolverError> = if sequential {
        points.iter().map(|&(x, t)| solver.value_at(x, t)).collect()
    } else {
        points
            .par_iter()
            .map(|&(x, t)| solver.value_at(x, t))
            .collect()
    };
    let results = results?;
    let (values, diags): (Vec<f64>, Vec<PointDiag>) = results.into_iter().unzip();
    SolutionGrid::new(
        solver.scenario(),
        cfg.xs.clone(),
        cfg.ts.clone(),
        values,
        diags,
        Some(cfg.contour),
    )
}

pub struct RunSummary {
    pub out_dir: PathBuf,
    pub grid: SolutionGrid,
    pub report: Option<ComparisonReport>,
}

/// Full scenario run: solve, persist `solution.csv` and the manifest,
/// optionally compute a reference and the comparison report, optionally
/// emit the plot script.
pub fn run_scenario(cfg: &ResolvedConfig, sequential: bool) -> Result<RunSummary, RunError> {
    std::fs::create_dir_all(&cfg.out_dir)
        .with_context(|| format!("cannot create {}", cfg.out_dir.display()))
        .map_err(RunError::Config)?;

    let t0 = Instant::now();
    let grid = solve(cfg, sequential).map_err(numerical)?;
    let solve_seconds = t0.elapsed().as_secs_f64();

    std::fs::write(cfg.out_dir.join("solution.csv"), csv_string(&grid))
        .context("writing solution.csv")
        .map_err(RunError::Config)?;
    std::fs::write(
        cfg.out_dir.join("manifest.toml"),
        crate::config::manifest(cfg, sequential),
    )
    .context("writing manifest.toml")
    .map_err(RunError::Config)?;

    let mut report = None;
    let mut has_reference = false;
    if cfg.comparison != ComparisonKind::None {
        let t1 = Instant::now();
        let (reference, compared, mask, variable, ref_name) =
            build_reference(cfg, &grid).map_err(numerical)?;
        let reference_seconds = t1.elapsed().as_secs_f64();
        let mut rep = compare_grids(&compared, &reference, &mask)
            .map_err(RunError::Config)?;
        rep.variable = variable;
        rep.reference = ref_name;
        rep.solve_seconds = solve_seconds;
        rep.reference_seconds = reference_seconds;
        let diag = summarize_diags(&grid);
        rep.total_nodes = diag.0;
        rep.max_nodes_per_point = diag.1;
        rep.short_circuits = diag.2;
        std::fs::write(cfg.out_dir.join("reference.csv"), csv_string(&reference))
            .context("writing reference.csv")
            .map_err(RunError::Config)?;
        std::fs::write(cfg.out_dir.join("report.toml"), render(&rep))
            .context("writing report.toml")
            .map_err(RunError::Config)?;
        report = Some(rep);
        has_reference = true;
    }

    if cfg.emit_plot {
        let label = match grid.scenario() {
            Scenario::PressureTank => "pressure head [cm]",
            _ => "water content",
        };
        std::fs::write(
            cfg.out_dir.join("plot.gp"),
            plot_script(&cfg.ts, has_reference, label),
        )
        .context("writing plot.gp")
        .map_err(RunError::Config)?;
    }

    Ok(RunSummary {
        out_dir: cfg.out_dir.clone(),
        grid,
        report,
    })
}

type ReferenceBundle = (SolutionGrid, SolutionGrid, CornerMask, String, String);

/// Build the reference grid and the (possibly re-expressed) solution grid it
/// is compared against. The tank's oracle comparison runs in the
/// transformed-head variable, where both sides are O(1); back in head units
/// the log-inverse would amplify the oracle's own discretisation error by
/// `1/(a eps)`.
fn build_reference(
    cfg: &ResolvedConfig,
    grid: &SolutionGrid,
) -> Result<ReferenceBundle, SolverError> {
    match cfg.comparison {
        ComparisonKind::None => unreachable!(),
        ComparisonKind::FdOracle => {
            let (problem, transform) = oracle_problem(&cfg.scenario)?;
            let run = refine_until(&problem, &cfg.fd, &cfg.xs, &cfg.ts, cfg.fd_tol)?;
            let (compared, variable) = match (&cfg.scenario, transform) {
                (ScenarioSpec::PressureTank(p), true) => {
                    let a = p.a;
                    let eps = p.eps();
                    (
                        grid.clone().map_values(|h| (a * h).exp() - eps)?,
                        "transformed_head".to_string(),
                    )
                }
                _ => (grid.clone(), "water_content".to_string()),
            };
            Ok((
                run.grid,
                compared,
                run.mask,
                variable,
                format!("crank_nicolson(nx={}, nt={})", run.nx, run.nt),
            ))
        }
        ComparisonKind::Tracy => {
            let p = match &cfg.scenario {
                ScenarioSpec::PressureTank(p) => *p,
                _ => unreachable!("validated at load"),
            };
            let ctl = SeriesControl::default();
            let mut values = Vec::with_capacity(cfg.xs.len() * cfg.ts.len());
            let mut terms_max = 0usize;
            for &x in &cfg.xs {
                for &t in &cfg.ts {
                    let v = if t == 0.0 {
                        if x == p.length {
                            0.0
                        } else {
                            p.h0
                        }
                    } else {
                        let sv = tracy_series(x, t, &p, &ctl)?;
                        terms_max = terms_max.max(sv.terms_used);
                        sv.value
                    };
                    values.push(v);
                }
            }
            let reference = SolutionGrid::new(
                Scenario::Reference,
                cfg.xs.clone(),
                cfg.ts.clone(),
                values,
                vec![],
                None,
            )?;
            Ok((
                reference,
                grid.clone(),
                CornerMask::none(),
                "pressure_head".to_string(),
                format!("tracy_series(max_terms={terms_max})"),
            ))
        }
        ComparisonKind::Philip => {
            let (theta0, theta1, coeffs) = match &cfg.scenario {
                ScenarioSpec::Flooding {
                    theta0,
                    theta1,
                    coeffs,
                    ..
                } => (*theta0, *theta1, *coeffs),
                _ => unreachable!("validated at load"),
            };
            let mut values = Vec::with_capacity(cfg.xs.len() * cfg.ts.len());
            for &x in &cfg.xs {
                for &t in &cfg.ts {
                    let v = if t == 0.0 {
                        theta0
                    } else {
                        theta0
                            + (theta1 - theta0)
                                * philip_theta(x, t, coeffs.d0(), coeffs.k0() * (theta1 - theta0), theta0, theta1)
                    };
                    values.push(v);
                }
            }
            let reference = SolutionGrid::new(
                Scenario::Reference,
                cfg.xs.clone(),
                cfg.ts.clone(),
                values,
                vec![],
                None,
            )?;
            Ok((
                reference,
                grid.clone(),
                CornerMask::none(),
                "water_content".to_string(),
                "philip_erfc_half_line".to_string(),
            ))
        }
    }
}

/// The equivalent bounded problem fed to the oracle, plus whether the
/// comparison happens in the transformed variable.
fn oracle_problem(scenario: &ScenarioSpec) -> Result<(ProfileProblem, bool), SolverError> {
    Ok(match scenario {
        ScenarioSpec::Flooding {
            theta0,
            theta1,
            coeffs,
            length,
        } => (
            ProfileProblem::new(
                *length,
                *coeffs,
                InitialData::Constant(*theta0),
                BoundaryData::Constant(*theta1),
                BoundaryData::Constant(*theta0),
            )?,
            false,
        ),
        ScenarioSpec::RainfallFlux {
            theta0,
            ka,
            coeffs,
            length,
        } => (
            ProfileProblem::new(
                *length,
                *coeffs,
                InitialData::Constant(*theta0),
                BoundaryData::BraesterFlux {
                    ka: *ka,
                    theta_offset: 0.0,
                },
                BoundaryData::Constant(*theta0),
            )?,
            false,
        ),
        ScenarioSpec::PressureTank(p) => (
            ProfileProblem::new(
                p.length,
                p.coeffs()?,
                InitialData::Zero,
                BoundaryData::Zero,
                BoundaryData::Constant(1.0 - p.eps()),
            )?,
            true,
        ),
        ScenarioSpec::General(p) => (p.clone(), false),
        ScenarioSpec::HalfLine { .. } => {
            return Err(SolverError::Invalid(
                "the finite-difference oracle needs a bounded profile".into(),
            ))
        }
    })
}
