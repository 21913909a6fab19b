//! Error metrics between two solution grids.

use anyhow::{bail, Result};
use infil_core::fd::CornerMask;
use infil_core::SolutionGrid;

/// Per-time-slice error summary.
#[derive(Debug, Clone)]
pub struct SliceError {
    pub t: f64,
    pub max_abs: f64,
    pub rms: f64,
    pub points: usize,
}

/// Comparison outcome between a solution grid and a reference grid.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    /// Which variable the metrics were computed in (water content,
    /// pressure head, or the tank's transformed head).
    pub variable: String,
    pub reference: String,
    pub max_abs_error: f64,
    pub rms_error: f64,
    pub per_slice: Vec<SliceError>,
    pub masked_points: usize,
    /// Quadrature diagnostics of the solution grid.
    pub total_nodes: usize,
    pub max_nodes_per_point: usize,
    pub short_circuits: usize,
    /// Wall-clock timings in seconds (absent in deterministic contexts).
    pub solve_seconds: f64,
    pub reference_seconds: f64,
}

/// Masked error metrics between grids on identical axes. The mask defaults
/// to the oracle's corner-exclusion rule (points adjacent to a boundary at
/// early times carry the incompatible-corner singularity of both methods).
pub fn compare_grids(
    a: &SolutionGrid,
    b: &SolutionGrid,
    mask: &CornerMask,
) -> Result<ComparisonReport> {
    if !a.same_grid(b) {
        bail!(
            "grid mismatch: {}x{} vs {}x{} points",
            a.xs().len(),
            a.ts().len(),
            b.xs().len(),
            b.ts().len()
        );
    }
    let length = a.xs().iter().cloned().fold(0.0, f64::max);
    let mut max_abs = 0.0f64;
    let mut sq_sum = 0.0f64;
    let mut counted = 0usize;
    let mut masked = 0usize;
    let mut per_slice = Vec::with_capacity(a.ts().len());
    for (it, &t) in a.ts().iter().enumerate() {
        let mut slice_max = 0.0f64;
        let mut slice_sq = 0.0f64;
        let mut slice_n = 0usize;
        for (ix, &x) in a.xs().iter().enumerate() {
            if mask.excludes(x, t, length) {
                masked += 1;
                continue;
            }
            let d = (a.value(ix, it) - b.value(ix, it)).abs();
            slice_max = slice_max.max(d);
            slice_sq += d * d;
            slice_n += 1;
        }
        max_abs = max_abs.max(slice_max);
        sq_sum += slice_sq;
        counted += slice_n;
        per_slice.push(SliceError {
            t,
            max_abs: slice_max,
            rms: if slice_n > 0 {
                (slice_sq / slice_n as f64).sqrt()
            } else {
                0.0
            },
            points: slice_n,
        });
    }
    let diag = summarize_diags(a);
    Ok(ComparisonReport {
        variable: String::new(),
        reference: String::new(),
        max_abs_error: max_abs,
        rms_error: if counted > 0 {
            (sq_sum / counted as f64).sqrt()
        } else {
            0.0
        },
        per_slice,
        masked_points: masked,
        total_nodes: diag.0,
        max_nodes_per_point: diag.1,
        short_circuits: diag.2,
        solve_seconds: 0.0,
        reference_seconds: 0.0,
    })
}

pub fn summarize_diags(grid: &SolutionGrid) -> (usize, usize, usize) {
    let mut total = 0usize;
    let mut per_point = 0usize;
    let mut shorts = 0usize;
    for d in grid.diags() {
        total += d.nodes;
        per_point = per_point.max(d.nodes);
        if d.short_circuit {
            shorts += 1;
        }
    }
    (total, per_point, shorts)
}

/// Render the report as structured text.
pub fn render(report: &ComparisonReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(out, "[comparison]").unwrap();
    writeln!(out, "variable = {:?}", report.variable).unwrap();
    writeln!(out, "reference = {:?}", report.reference).unwrap();
    writeln!(out, "max_abs_error = {:e}", report.max_abs_error).unwrap();
    writeln!(out, "rms_error = {:e}", report.rms_error).unwrap();
    writeln!(out, "masked_points = {}", report.masked_points).unwrap();
    writeln!(out).unwrap();
    for s in &report.per_slice {
        writeln!(out, "[[slice]]").unwrap();
        writeln!(out, "t = {}", s.t).unwrap();
        writeln!(out, "max_abs = {:e}", s.max_abs).unwrap();
        writeln!(out, "rms = {:e}", s.rms).unwrap();
        writeln!(out, "points = {}", s.points).unwrap();
        writeln!(out).unwrap();
    }
    writeln!(out, "[diagnostics]").unwrap();
    writeln!(out, "total_nodes = {}", report.total_nodes).unwrap();
    writeln!(out, "max_nodes_per_point = {}", report.max_nodes_per_point).unwrap();
    writeln!(out, "short_circuits = {}", report.short_circuits).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "[timings]").unwrap();
    writeln!(out, "solve_seconds = {}", report.solve_seconds).unwrap();
    writeln!(out, "reference_seconds = {}", report.reference_seconds).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use infil_core::{Scenario, SolutionGrid};

    fn grid(values: Vec<f64>) -> SolutionGrid {
        SolutionGrid::new(
            Scenario::Reference,
            vec![0.0, 1.0, 2.0],
            vec![0.5, 1.5],
            values,
            vec![],
            None,
        )
        .unwrap()
    }

    #[test]
    fn identical_grids_have_zero_error() {
        let a = grid(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let r = compare_grids(&a, &a, &CornerMask::none()).unwrap();
        assert_eq!(r.max_abs_error, 0.0);
        assert_eq!(r.rms_error, 0.0);
    }

    #[test]
    fn constant_shift_is_measured_exactly() {
        let a = grid(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let b = grid(vec![1.001, 2.001, 3.001, 4.001, 5.001, 6.001]);
        let r = compare_grids(&a, &b, &CornerMask::none()).unwrap();
        assert!((r.max_abs_error - 1e-3).abs() < 1e-15);
        assert!((r.rms_error - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn mismatched_grids_rejected() {
        let a = grid(vec![0.0; 6]);
        let b = SolutionGrid::new(
            Scenario::Reference,
            vec![0.0, 1.0],
            vec![0.5, 1.5],
            vec![0.0; 4],
            vec![],
            None,
        )
        .unwrap();
        assert!(compare_grids(&a, &b, &CornerMask::none()).is_err());
    }

    #[test]
    fn corner_mask_excludes_early_boundary_cells() {
        let a = grid(vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let mut b = a.clone();
        b = b.map_values(|v| v + 0.0).unwrap();
        // big deviation only at (x=0, t=0.5), inside the mask window
        let mut vals: Vec<f64> = b.values().to_vec();
        vals[0] += 7.0;
        let b = grid(vals);
        let mask = CornerMask {
            x_pad: 0.5,
            t_window: 1.0,
        };
        let r = compare_grids(&a, &b, &mask).unwrap();
        assert_eq!(r.max_abs_error, 0.0);
        assert_eq!(r.masked_points, 2); // x = 0 and x = 2 at t = 0.5
    }
}
