//! Command-line front end for the bounded-profile infiltration solvers.

use anyhow::Result;
use clap::{Parser, Subcommand};
use infil_cli::config::{self, ComparisonKind};
use infil_cli::run::{self, RunError};
use infil_cli::BUNDLED;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "infil",
    version,
    about = "Unified-transform solvers for vertical infiltration in bounded profiles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a configuration file and persist the artifacts.
    Solve {
        /// Path to the scenario configuration (TOML with unit-suffixed fields).
        #[arg(long)]
        config: PathBuf,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Force deterministic single-threaded evaluation.
        #[arg(long)]
        sequential: bool,
        /// Override the configured comparison (fd|tracy|philip|none).
        #[arg(long)]
        compare: Option<String>,
    },
    /// List the bundled benchmark scenarios.
    ListScenarios,
    /// Parse and validate a configuration without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}


fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve {
            config,
            out,
            sequential,
            compare,
        } => match solve_command(&config, out, sequential, compare) {
            Ok(()) => ExitCode::SUCCESS,
            Err(RunError::Config(e)) => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
            Err(RunError::Numerical(e)) => {
                eprintln!("numerical failure: {e:#}");
                ExitCode::from(2)
            }
        },
        Command::ListScenarios => {
            list_scenarios();
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match validate_command(&config) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        },
    }
}

fn solve_command(
    config_path: &PathBuf,
    out: Option<PathBuf>,
    sequential: bool,
    compare: Option<String>,
) -> Result<(), RunError> {
    let mut cfg = config::load(config_path).map_err(RunError::Config)?;
    if let Some(dir) = out {
        cfg.out_dir = dir;
    }
    if let Some(kind) = compare {
        cfg.comparison = ComparisonKind::parse(&kind).map_err(RunError::Config)?;
        config::validate_comparison(&cfg.scenario, cfg.comparison).map_err(RunError::Config)?;
    }
    let summary = run::run_scenario(&cfg, sequential)?;
    println!(
        "solved {} on {} x {} grid -> {}",
        cfg.scenario.name(),
        cfg.xs.len(),
        cfg.ts.len(),
        summary.out_dir.display()
    );
    if let Some(report) = &summary.report {
        println!(
            "compared against {} in {}: max abs {:.3e}, rms {:.3e} ({} masked points)",
            report.reference,
            report.variable,
            report.max_abs_error,
            report.rms_error,
            report.masked_points
        );
    }
    Ok(())
}

fn list_scenarios() {
    println!("bundled benchmark scenarios (see configs/ in the source tree):\n");
    for (name, text) in BUNDLED {
        let parsed = config::parse(text);
        match parsed {
            Ok(cfg) => println!(
                "  {name:<22} {:<14} {}",
                cfg.scenario.name(),
                cfg.description
            ),
            Err(e) => println!("  {name:<22} <invalid: {e}>"),
        }
    }
    println!("\nrun one with: infil solve --config configs/<name>.toml");
}

fn validate_command(path: &PathBuf) -> Result<()> {
    let cfg = config::load(path)?;
    println!(
        "ok: scenario {} on a {} x {} grid, comparison {}, output {}",
        cfg.scenario.name(),
        cfg.xs.len(),
        cfg.ts.len(),
        cfg.comparison.as_str(),
        cfg.out_dir.display()
    );
    Ok(())
}
