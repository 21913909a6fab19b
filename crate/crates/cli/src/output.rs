//! File artifacts of a run: the solution/reference CSVs and the plot script.

use infil_core::SolutionGrid;

/// Render a grid as `x,t,value` CSV, one row per grid point, 17 significant
/// digits (bit round-trip).
pub fn csv_string(grid: &SolutionGrid) -> String {
    let mut out = String::with_capacity(grid.values().len() * 48 + 16);
    out.push_str("x,t,value\n");
    for (_, _, x, t, v) in grid.iter() {
        out.push_str(&format!("{x:.16e},{t:.16e},{v:.16e}\n"));
    }
    out
}


/// Emit a gnuplot script reproducing the benchmark figure layout: solid
/// lines for the transform solution, dotted lines for the reference, one
/// colour per time slice.
pub fn plot_script(ts: &[f64], has_reference: bool, value_label: &str) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(out, "# gnuplot script; run from the output directory").unwrap();
    writeln!(out, "set datafile separator ','").unwrap();
    writeln!(out, "set xlabel 'x [cm]'").unwrap();
    writeln!(out, "set ylabel '{value_label}'").unwrap();
    writeln!(out, "set key outside").unwrap();
    writeln!(out, "filter(t,col) = (abs($2 - t) < 1e-12 * (abs(t) + 1) ? column(col) : 1/0)").unwrap();
    let mut pieces = Vec::new();
    for (i, &t) in ts.iter().enumerate() {
        let color = i + 1;
        pieces.push(format!(
            "'solution.csv' using 1:(filter({t:e},3)) with lines lc {color} lw 2 title 't = {t} s'"
        ));
        if has_reference {
            pieces.push(format!(
                "'reference.csv' using 1:(filter({t:e},3)) with lines dt 3 lc {color} lw 2 title 'reference, t = {t} s'"
            ));
        }
    }
    writeln!(out, "plot \\\n    {}", pieces.join(", \\\n    ")).unwrap();
    writeln!(out, "pause -1 'press enter to close'").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use infil_core::Scenario;

    #[test]
    fn csv_layout_and_roundtrip() {
        let grid = SolutionGrid::new(
            Scenario::Reference,
            vec![0.0, 0.5],
            vec![1.0],
            vec![0.1234567890123456789, 2.0 / 3.0],
            vec![],
            None,
        )
        .unwrap();
        let text = csv_string(&grid);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,t,value"));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 3);
        let v: f64 = row[2].parse().unwrap();
        assert_eq!(v.to_bits(), (0.1234567890123456789f64).to_bits());
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        let v: f64 = row[2].parse().unwrap();
        assert_eq!(v.to_bits(), (2.0f64 / 3.0).to_bits());
    }

    #[test]
    fn plot_script_mentions_both_files() {
        let s = plot_script(&[0.03, 0.6], true, "water content");
        assert!(s.contains("solution.csv"));
        assert!(s.contains("reference.csv"));
        assert!(s.contains("dt 3"), "reference must be dotted");
    }
}
