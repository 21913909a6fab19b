//! Scenario configuration: parsing, validation, resolution to solver types,
//! and manifest emission.
//!
//! A configuration is nested key-value text (TOML) whose numeric fields
//! carry unit suffixes. The resolved form — everything converted to the
//! cm-s base system — is what the manifest records; a manifest is itself a
//! valid configuration, so a run can be reproduced from its output
//! directory alone.

use crate::units::{format_quantity, parse_quantity, Dimension};
use anyhow::{anyhow, bail, Context, Result};
use infil_core::fd::FdConfig;
use infil_core::solver::TankParameters;
use infil_core::{
    BoundaryData, ContourConfig, InitialData, ProfileProblem, TransportCoefficients,
};
use std::path::{Path, PathBuf};
use toml::Value;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparisonKind {
    None,
    FdOracle,
    Tracy,
    Philip,
}

impl ComparisonKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "none" => ComparisonKind::None,
            "fd_oracle" | "fd" => ComparisonKind::FdOracle,
            "tracy" => ComparisonKind::Tracy,
            "philip" => ComparisonKind::Philip,
            other => bail!("unknown comparison `{other}` (expected none|fd_oracle|tracy|philip)"),
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ComparisonKind::None => "none",
            ComparisonKind::FdOracle => "fd_oracle",
            ComparisonKind::Tracy => "tracy",
            ComparisonKind::Philip => "philip",
        }
    }
}

/// Scenario payload with everything in base units.
#[derive(Debug, Clone)]
pub enum ScenarioSpec {
    Flooding {
        theta0: f64,
        theta1: f64,
        coeffs: TransportCoefficients,
        length: f64,
    },
    RainfallFlux {
        theta0: f64,
        ka: f64,
        coeffs: TransportCoefficients,
        length: f64,
    },
    PressureTank(TankParameters),
    General(ProfileProblem),
    HalfLine {
        initial: InitialData,
        surface: BoundaryData,
        coeffs: TransportCoefficients,
    },
}

impl ScenarioSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioSpec::Flooding { .. } => "flooding",
            ScenarioSpec::RainfallFlux { .. } => "rainfall_flux",
            ScenarioSpec::PressureTank(_) => "pressure_tank",
            ScenarioSpec::General(_) => "general",
            ScenarioSpec::HalfLine { .. } => "half_line",
        }
    }

    pub fn length(&self) -> Option<f64> {
        match self {
            ScenarioSpec::Flooding { length, .. } => Some(*length),
            ScenarioSpec::RainfallFlux { length, .. } => Some(*length),
            ScenarioSpec::PressureTank(p) => Some(p.length),
            ScenarioSpec::General(p) => Some(p.length()),
            ScenarioSpec::HalfLine { .. } => None,
        }
    }
}

/// Fully resolved run description.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub description: String,
    pub scenario: ScenarioSpec,
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    pub contour: ContourConfig,
    pub comparison: ComparisonKind,
    pub fd: FdConfig,
    pub fd_tol: f64,
    pub out_dir: PathBuf,
    pub emit_plot: bool,
}

struct Table<'a> {
    value: &'a toml::value::Table,
    path: &'a str,
}

impl<'a> Table<'a> {
    fn get(&self, key: &str) -> Result<&'a Value> {
        self.value
            .get(key)
            .ok_or_else(|| anyhow!("missing field `{}` in [{}]", key, self.path))
    }

    fn opt(&self, key: &str) -> Option<&'a Value> {
        self.value.get(key)
    }

    fn quantity(&self, key: &str, dim: Dimension) -> Result<f64> {
        let v = self.get(key)?;
        quantity_value(v, dim).with_context(|| format!("field `{}` in [{}]", key, self.path))
    }

    fn opt_quantity(&self, key: &str, dim: Dimension) -> Result<Option<f64>> {
        match self.opt(key) {
            None => Ok(None),
            Some(v) => Ok(Some(quantity_value(v, dim).with_context(|| {
                format!("field `{}` in [{}]", key, self.path)
            })?)),
        }
    }

    fn str(&self, key: &str) -> Result<&'a str> {
        self.get(key)?
            .as_str()
            .ok_or_else(|| anyhow!("field `{}` in [{}] must be a string", key, self.path))
    }

    fn table(&self, key: &'a str) -> Result<Table<'a>> {
        match self.get(key)? {
            Value::Table(t) => Ok(Table { value: t, path: key }),
            _ => bail!("field `{}` in [{}] must be a table", key, self.path),
        }
    }
}

fn quantity_value(v: &Value, dim: Dimension) -> Result<f64> {
    match v {
        Value::String(s) => parse_quantity(s, dim),
        Value::Float(f) if dim == Dimension::Dimensionless => Ok(*f),
        Value::Integer(i) if dim == Dimension::Dimensionless => Ok(*i as f64),
        Value::Float(_) | Value::Integer(_) => {
            bail!("bare number; annotate the unit, expected {}", dim.describe())
        }
        _ => bail!("expected a quantity string"),
    }
}

/// Parse and validate a configuration file.
pub fn load(path: &Path) -> Result<ResolvedConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    parse(&text).with_context(|| format!("in config {}", path.display()))
}

pub fn parse(text: &str) -> Result<ResolvedConfig> {
    let root_value: Value = text.parse::<Value>().context("config is not valid TOML")?;
    let root_table = match &root_value {
        Value::Table(t) => Table { value: t, path: "config" },
        _ => bail!("config root must be a table"),
    };
    let description = root_table
        .opt("description")
        .and_then(|v| v.as_str())
        .unwrap_or("")
        .to_string();
    let scenario_name = root_table.str("scenario")?;
    let params = root_table.table("parameters")?;
    let scenario = match scenario_name {
        "flooding" => {
            let coeffs = coeffs_from(&params)?;
            let spec = ScenarioSpec::Flooding {
                theta0: params.quantity("theta0", Dimension::Dimensionless)?,
                theta1: params.quantity("theta1", Dimension::Dimensionless)?,
                coeffs,
                length: params.quantity("length", Dimension::Length)?,
            };
            if let ScenarioSpec::Flooding { theta0, theta1, .. } = &spec {
                if !(theta1 > theta0) {
                    bail!("flooding requires theta1 > theta0");
                }
            }
            spec
        }
        "rainfall_flux" => ScenarioSpec::RainfallFlux {
            theta0: params.quantity("theta0", Dimension::Dimensionless)?,
            ka: params.quantity("ka", Dimension::PerTime)?,
            coeffs: coeffs_from(&params)?,
            length: params.quantity("length", Dimension::Length)?,
        },
        "pressure_tank" => {
            let tank = TankParameters {
                a: params.quantity("a", Dimension::PerLength)?,
                ks: params.quantity("ks", Dimension::Velocity)?,
                theta1: params.quantity("theta1", Dimension::Dimensionless)?,
                theta0: params.quantity("theta0", Dimension::Dimensionless)?,
                h0: params.quantity("h0", Dimension::Length)?,
                length: params.quantity("length", Dimension::Length)?,
            };
            tank.validate().map_err(|e| anyhow!("{e}"))?;
            ScenarioSpec::PressureTank(tank)
        }
        "general" => {
            let coeffs = coeffs_from(&params)?;
            let length = params.quantity("length", Dimension::Length)?;
            let initial = initial_from(&params.table("initial")?, length)?;
            let left = boundary_from(&params.table("left_bc")?)?;
            let right = boundary_from(&params.table("right_bc")?)?;
            let problem = ProfileProblem::new(length, coeffs, initial, left, right)
                .map_err(|e| anyhow!("{e}"))?;
            ScenarioSpec::General(problem)
        }
        "half_line" => {
            let coeffs = coeffs_from(&params)?;
            let initial = initial_from(&params.table("initial")?, f64::INFINITY)?;
            let surface = boundary_from(&params.table("surface")?)?;
            ScenarioSpec::HalfLine {
                initial,
                surface,
                coeffs,
            }
        }
        other => bail!(
            "unknown scenario `{other}` (expected flooding|rainfall_flux|pressure_tank|general|half_line)"
        ),
    };

    let grid = root_table.table("grid")?;
    let xs = axis_from(&grid.table("x")?, Dimension::Length)?;
    let ts = axis_from(&grid.table("t")?, Dimension::Time)?;
    if xs.is_empty() || ts.is_empty() {
        bail!("grid axes must be non-empty");
    }
    if let Some(length) = scenario.length() {
        if xs.iter().any(|&x| x < 0.0 || x > length) {
            bail!("grid positions must lie in [0, {length}] cm");
        }
    } else if xs.iter().any(|&x| x < 0.0) {
        bail!("grid positions must be non-negative");
    }
    if ts.iter().any(|&t| t < 0.0) {
        bail!("grid times must be non-negative");
    }

    let mut contour = ContourConfig::default();
    if let Some(Value::Table(t)) = root_table.opt("contour") {
        let t = Table { value: t, path: "contour" };
        if let Some(v) = t.opt_quantity("ray_angle", Dimension::Dimensionless)? {
            contour.ray_angle = v;
        }
        if let Some(v) = t.opt_quantity("rel_tol", Dimension::Dimensionless)? {
            contour.rel_tol = v;
        }
        if let Some(v) = t.opt_quantity("abs_tol", Dimension::Dimensionless)? {
            contour.abs_tol = v;
        }
        if let Some(v) = t.opt_quantity("max_nodes", Dimension::Dimensionless)? {
            contour.max_nodes = v as usize;
        }
        if let Some(v) = t.opt_quantity("truncation_safety", Dimension::Dimensionless)? {
            contour.truncation_safety = v;
        }
    }
    contour.validate().map_err(|e| anyhow!("{e}"))?;

    let mut comparison = ComparisonKind::None;
    let mut fd = FdConfig::default();
    let mut fd_tol = fd.convergence_tol;
    if let Some(Value::Table(t)) = root_table.opt("comparison") {
        let t = Table { value: t, path: "comparison" };
        comparison = ComparisonKind::parse(t.str("kind")?)?;
        if let Some(v) = t.opt_quantity("fd_nx", Dimension::Dimensionless)? {
            fd.nx = v as usize;
        }
        if let Some(v) = t.opt_quantity("fd_nt_min", Dimension::Dimensionless)? {
            fd.nt_min = v as usize;
        }
        if let Some(v) = t.opt_quantity("fd_courant", Dimension::Dimensionless)? {
            fd.courant_limit = v;
        }
        if let Some(v) = t.opt_quantity("fd_tol", Dimension::Dimensionless)? {
            fd_tol = v;
        }
    }
    validate_comparison(&scenario, comparison)?;

    let mut out_dir = PathBuf::from("out");
    let mut emit_plot = false;
    if let Some(Value::Table(t)) = root_table.opt("output") {
        let t = Table { value: t, path: "output" };
        if let Some(v) = t.opt("dir") {
            out_dir = PathBuf::from(
                v.as_str()
                    .ok_or_else(|| anyhow!("field `dir` in [output] must be a string"))?,
            );
        }
        if let Some(v) = t.opt("plot") {
            emit_plot = v
                .as_bool()
                .ok_or_else(|| anyhow!("field `plot` in [output] must be a boolean"))?;
        }
    }

    Ok(ResolvedConfig {
        description,
        scenario,
        xs,
        ts,
        contour,
        comparison,
        fd,
        fd_tol,
        out_dir,
        emit_plot,
    })
}

pub fn validate_comparison(scenario: &ScenarioSpec, comparison: ComparisonKind) -> Result<()> {
    match comparison {
        ComparisonKind::Tracy if !matches!(scenario, ScenarioSpec::PressureTank(_)) => {
            bail!("comparison `tracy` is only valid for the pressure_tank scenario")
        }
        ComparisonKind::Philip if !matches!(scenario, ScenarioSpec::Flooding { .. }) => {
            bail!("comparison `philip` is only valid for the flooding scenario")
        }
        ComparisonKind::FdOracle if matches!(scenario, ScenarioSpec::HalfLine { .. }) => {
            bail!("comparison `fd_oracle` needs a bounded profile; half_line has none")
        }
        _ => Ok(()),
    }
}

fn coeffs_from(params: &Table) -> Result<TransportCoefficients> {
    let d0 = params.quantity("d0", Dimension::Diffusivity)?;
    let k0 = params.quantity("k0", Dimension::Velocity)?;
    TransportCoefficients::new(d0, k0).map_err(|e| anyhow!("{e}"))
}

fn initial_from(t: &Table, _length: f64) -> Result<InitialData> {
    match t.str("kind")? {
        "zero" => Ok(InitialData::Zero),
        "constant" => Ok(InitialData::Constant(
            t.quantity("value", Dimension::Dimensionless)?,
        )),
        // domain coverage is validated by the problem constructor
        "tabulated" => Ok(InitialData::Tabulated(samples_from(t, Dimension::Length)?)),
        other => bail!("unknown initial data kind `{other}` (zero|constant|tabulated)"),
    }
}

fn boundary_from(t: &Table) -> Result<BoundaryData> {
    match t.str("kind")? {
        "zero" => Ok(BoundaryData::Zero),
        "constant" => Ok(BoundaryData::Constant(
            t.quantity("value", Dimension::Dimensionless)?,
        )),
        "braester" => Ok(BoundaryData::BraesterFlux {
            ka: t.quantity("ka", Dimension::PerTime)?,
            theta_offset: t
                .opt_quantity("offset", Dimension::Dimensionless)?
                .unwrap_or(0.0),
        }),
        "tabulated" => Ok(BoundaryData::Tabulated(samples_from(t, Dimension::Time)?)),
        other => bail!("unknown boundary data kind `{other}` (zero|constant|braester|tabulated)"),
    }
}

fn samples_from(t: &Table, abscissa: Dimension) -> Result<Vec<(f64, f64)>> {
    let v = t.get("samples")?;
    let arr = v
        .as_array()
        .ok_or_else(|| anyhow!("`samples` must be an array of [abscissa, value] pairs"))?;
    let mut out = Vec::with_capacity(arr.len());
    for (i, item) in arr.iter().enumerate() {
        let pair = item
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| anyhow!("sample {i} must be a two-element array"))?;
        let x = quantity_value(&pair[0], abscissa).with_context(|| format!("sample {i}"))?;
        let val = quantity_value(&pair[1], Dimension::Dimensionless)
            .with_context(|| format!("sample {i}"))?;
        out.push((x, val));
    }
    Ok(out)
}

fn axis_from(t: &Table, dim: Dimension) -> Result<Vec<f64>> {
    if let Some(v) = t.opt("list") {
        let arr = v
            .as_array()
            .ok_or_else(|| anyhow!("`list` in [grid] must be an array"))?;
        return arr
            .iter()
            .map(|v| quantity_value(v, dim).context("grid list entry"))
            .collect();
    }
    if let Some(Value::Table(lin)) = t.opt("linspace") {
        let lin = Table { value: lin, path: "grid.linspace" };
        let start = lin.quantity("start", dim)?;
        let stop = lin.quantity("stop", dim)?;
        let count = lin.quantity("count", Dimension::Dimensionless)? as usize;
        if count < 2 {
            bail!("linspace count must be at least 2");
        }
        if !(stop > start) {
            bail!("linspace needs stop > start");
        }
        let step = (stop - start) / (count - 1) as f64;
        return Ok((0..count)
            .map(|i| {
                if i + 1 == count {
                    stop
                } else {
                    start + i as f64 * step
                }
            })
            .collect());
    }
    bail!("grid axis needs either `list` or `linspace`")
}

/// Serialize a resolved configuration back into config syntax with all
/// quantities in base units. The output reparses to bit-identical values.
pub fn manifest(cfg: &ResolvedConfig, sequential: bool) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let q = |v: f64, d: Dimension| format_quantity(v, d);
    writeln!(out, "# run manifest: resolved configuration in base units (cm, s)").unwrap();
    writeln!(out, "description = {:?}", cfg.description).unwrap();
    writeln!(out, "scenario = {:?}", cfg.scenario.name()).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "[meta]").unwrap();
    writeln!(out, "tool_version = {TOOL_VERSION:?}").unwrap();
    writeln!(out, "sequential = {sequential}").unwrap();
    writeln!(out).unwrap();
    writeln!(out, "[parameters]").unwrap();
    match &cfg.scenario {
        ScenarioSpec::Flooding { theta0, theta1, coeffs, length } => {
            writeln!(out, "d0 = {:?}", q(coeffs.d0(), Dimension::Diffusivity)).unwrap();
            writeln!(out, "k0 = {:?}", q(coeffs.k0(), Dimension::Velocity)).unwrap();
            writeln!(out, "length = {:?}", q(*length, Dimension::Length)).unwrap();
            writeln!(out, "theta0 = {:?}", q(*theta0, Dimension::Dimensionless)).unwrap();
            writeln!(out, "theta1 = {:?}", q(*theta1, Dimension::Dimensionless)).unwrap();
        }
        ScenarioSpec::RainfallFlux { theta0, ka, coeffs, length } => {
            writeln!(out, "d0 = {:?}", q(coeffs.d0(), Dimension::Diffusivity)).unwrap();
            writeln!(out, "k0 = {:?}", q(coeffs.k0(), Dimension::Velocity)).unwrap();
            writeln!(out, "ka = {:?}", q(*ka, Dimension::PerTime)).unwrap();
            writeln!(out, "length = {:?}", q(*length, Dimension::Length)).unwrap();
            writeln!(out, "theta0 = {:?}", q(*theta0, Dimension::Dimensionless)).unwrap();
        }
        ScenarioSpec::PressureTank(p) => {
            writeln!(out, "a = {:?}", q(p.a, Dimension::PerLength)).unwrap();
            writeln!(out, "ks = {:?}", q(p.ks, Dimension::Velocity)).unwrap();
            writeln!(out, "theta1 = {:?}", q(p.theta1, Dimension::Dimensionless)).unwrap();
            writeln!(out, "theta0 = {:?}", q(p.theta0, Dimension::Dimensionless)).unwrap();
            writeln!(out, "h0 = {:?}", q(p.h0, Dimension::Length)).unwrap();
            writeln!(out, "length = {:?}", q(p.length, Dimension::Length)).unwrap();
        }
        ScenarioSpec::General(p) => {
            writeln!(out, "d0 = {:?}", q(p.coeffs().d0(), Dimension::Diffusivity)).unwrap();
            writeln!(out, "k0 = {:?}", q(p.coeffs().k0(), Dimension::Velocity)).unwrap();
            writeln!(out, "length = {:?}", q(p.length(), Dimension::Length)).unwrap();
            write_initial(&mut out, "parameters.initial", p.initial());
            write_boundary(&mut out, "parameters.left_bc", p.left_bc());
            write_boundary(&mut out, "parameters.right_bc", p.right_bc());
        }
        ScenarioSpec::HalfLine { initial, surface, coeffs } => {
            writeln!(out, "d0 = {:?}", q(coeffs.d0(), Dimension::Diffusivity)).unwrap();
            writeln!(out, "k0 = {:?}", q(coeffs.k0(), Dimension::Velocity)).unwrap();
            write_initial(&mut out, "parameters.initial", initial);
            write_boundary(&mut out, "parameters.surface", surface);
        }
    }
    writeln!(out).unwrap();
    writeln!(out, "[grid.x]").unwrap();
    writeln!(out, "list = [{}]", quantity_list(&cfg.xs, Dimension::Length)).unwrap();
    writeln!(out, "[grid.t]").unwrap();
    writeln!(out, "list = [{}]", quantity_list(&cfg.ts, Dimension::Time)).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "[contour]").unwrap();
    writeln!(out, "ray_angle = {}", cfg.contour.ray_angle).unwrap();
    writeln!(out, "rel_tol = {}", cfg.contour.rel_tol).unwrap();
    writeln!(out, "abs_tol = {}", cfg.contour.abs_tol).unwrap();
    writeln!(out, "max_nodes = {}", cfg.contour.max_nodes).unwrap();
    writeln!(out, "truncation_safety = {}", cfg.contour.truncation_safety).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "[comparison]").unwrap();
    writeln!(out, "kind = {:?}", cfg.comparison.as_str()).unwrap();
    writeln!(out, "fd_nx = {}", cfg.fd.nx).unwrap();
    writeln!(out, "fd_nt_min = {}", cfg.fd.nt_min).unwrap();
    writeln!(out, "fd_courant = {}", cfg.fd.courant_limit).unwrap();
    writeln!(out, "fd_tol = {}", cfg.fd_tol).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "[output]").unwrap();
    writeln!(out, "dir = {:?}", cfg.out_dir.display().to_string()).unwrap();
    writeln!(out, "plot = {}", cfg.emit_plot).unwrap();
    out
}

fn quantity_list(values: &[f64], dim: Dimension) -> String {
    values
        .iter()
        .map(|&v| format!("{:?}", format_quantity(v, dim)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn write_initial(out: &mut String, section: &str, data: &InitialData) {
    use std::fmt::Write;
    writeln!(out, "[{section}]").unwrap();
    match data {
        InitialData::Zero => writeln!(out, "kind = \"zero\"").unwrap(),
        InitialData::Constant(c) => {
            writeln!(out, "kind = \"constant\"").unwrap();
            writeln!(out, "value = {:?}", format_quantity(*c, Dimension::Dimensionless)).unwrap();
        }
        InitialData::Tabulated(samples) => {
            writeln!(out, "kind = \"tabulated\"").unwrap();
            writeln!(out, "samples = [{}]", sample_list(samples, Dimension::Length)).unwrap();
        }
    }
}

fn write_boundary(out: &mut String, section: &str, data: &BoundaryData) {
    use std::fmt::Write;
    writeln!(out, "[{section}]").unwrap();
    match data {
        BoundaryData::Zero => writeln!(out, "kind = \"zero\"").unwrap(),
        BoundaryData::Constant(c) => {
            writeln!(out, "kind = \"constant\"").unwrap();
            writeln!(out, "value = {:?}", format_quantity(*c, Dimension::Dimensionless)).unwrap();
        }
        BoundaryData::BraesterFlux { ka, theta_offset } => {
            writeln!(out, "kind = \"braester\"").unwrap();
            writeln!(out, "ka = {:?}", format_quantity(*ka, Dimension::PerTime)).unwrap();
            writeln!(
                out,
                "offset = {:?}",
                format_quantity(*theta_offset, Dimension::Dimensionless)
            )
            .unwrap();
        }
        BoundaryData::Tabulated(samples) => {
            writeln!(out, "kind = \"tabulated\"").unwrap();
            writeln!(out, "samples = [{}]", sample_list(samples, Dimension::Time)).unwrap();
        }
    }
}

fn sample_list(samples: &[(f64, f64)], dim: Dimension) -> String {
    samples
        .iter()
        .map(|&(x, v)| {
            format!(
                "[{:?}, {:?}]",
                format_quantity(x, dim),
                format_quantity(v, Dimension::Dimensionless)
            )
        })
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLOODING: &str = r#"
description = "test"
scenario = "flooding"

[parameters]
d0 = "0.5 cm2/s"
k0 = "1 cm/s"
length = "0.05 cm"
theta0 = "0"
theta1 = "1.9355"

[grid.x]
linspace = { start = "0 cm", stop = "0.05 cm", count = 11 }
[grid.t]
list = ["0.03 s", "0.06 s", "0.6 s"]
"#;

    #[test]
    fn parses_flooding_config() {
        let cfg = parse(FLOODING).unwrap();
        assert_eq!(cfg.xs.len(), 11);
        assert_eq!(cfg.ts, vec![0.03, 0.06, 0.6]);
        match cfg.scenario {
            ScenarioSpec::Flooding { theta1, length, .. } => {
                assert_eq!(theta1, 1.9355);
                assert_eq!(length, 0.05);
            }
            _ => panic!("wrong scenario"),
        }
    }

    #[test]
    fn missing_length_names_the_field() {
        let broken = FLOODING.replace("length = \"0.05 cm\"\n", "");
        let err = parse(&broken).unwrap_err();
        let msg = format!("{err:#}");
        assert!(msg.contains("length"), "message was: {msg}");
    }

    #[test]
    fn comparison_validity_per_scenario() {
        let with_tracy = FLOODING.to_string() + "\n[comparison]\nkind = \"tracy\"\n";
        assert!(parse(&with_tracy).is_err());
        let with_philip = FLOODING.to_string() + "\n[comparison]\nkind = \"philip\"\n";
        assert!(parse(&with_philip).is_ok());
    }

    #[test]
    fn manifest_reparses_bit_identically() {
        let mut cfg = parse(FLOODING).unwrap();
        cfg.comparison = ComparisonKind::Philip;
        let text = manifest(&cfg, true);
        let back = parse(&text).unwrap();
        assert_eq!(back.xs, cfg.xs);
        assert_eq!(back.ts, cfg.ts);
        match (&back.scenario, &cfg.scenario) {
            (
                ScenarioSpec::Flooding { coeffs: a, .. },
                ScenarioSpec::Flooding { coeffs: b, .. },
            ) => {
                assert_eq!(a.d0().to_bits(), b.d0().to_bits());
                assert_eq!(a.k0().to_bits(), b.k0().to_bits());
            }
            _ => panic!("scenario changed shape"),
        }
        assert_eq!(back.comparison, cfg.comparison);
    }
}
