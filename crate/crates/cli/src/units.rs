//! Unit-annotated quantities.
//!
//! Every numeric field in a scenario configuration carries an explicit unit
//! suffix (`d0 = "0.4653 cm2/s"`). Parsing converts to the single base unit
//! system of the solvers: centimetres and seconds. The benchmark parameter
//! sets mix cm/hour, cm^2/s, minutes, metres and days, so the conversion is
//! total and explicit rather than implied.

use anyhow::{anyhow, bail, Result};

/// Physical dimension a field is declared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Dimensionless,
    Length,
    Time,
    /// length/time
    Velocity,
    /// length^2/time
    Diffusivity,
    /// 1/length
    PerLength,
    /// 1/time
    PerTime,
}

impl Dimension {
    pub fn describe(&self) -> &'static str {
        match self {
            Dimension::Dimensionless => "dimensionless (no unit or `1`)",
            Dimension::Length => "a length (mm, cm, m, km)",
            Dimension::Time => "a time (s, min, h, day)",
            Dimension::Velocity => "a velocity (length/time, e.g. `cm/h`)",
            Dimension::Diffusivity => "a diffusivity (length^2/time, e.g. `cm2/s`)",
            Dimension::PerLength => "an inverse length (e.g. `1/m`)",
            Dimension::PerTime => "an inverse time (e.g. `1/s`)",
        }
    }

    /// Canonical base unit written into manifests.
    pub fn base_unit(&self) -> &'static str {
        match self {
            Dimension::Dimensionless => "",
            Dimension::Length => "cm",
            Dimension::Time => "s",
            Dimension::Velocity => "cm/s",
            Dimension::Diffusivity => "cm2/s",
            Dimension::PerLength => "1/cm",
            Dimension::PerTime => "1/s",
        }
    }
}

fn length_factor(unit: &str) -> Option<f64> {
    Some(match unit {
        "mm" => 0.1,
        "cm" => 1.0,
        "m" => 100.0,
        "km" => 1e5,
        _ => return None,
    })
}

fn time_factor(unit: &str) -> Option<f64> {
    Some(match unit {
        "s" | "sec" => 1.0,
        "min" => 60.0,
        "h" | "hour" => 3600.0,
        "day" | "d" => 86400.0,
        _ => return None,
    })
}

/// Conversion factor of a unit string to base units for the dimension.
fn unit_factor(unit: &str, dim: Dimension) -> Result<f64> {
    let bad = || anyhow!("unit `{unit}` is not {}", dim.describe());
    match dim {
        Dimension::Dimensionless => {
            if unit.is_empty() || unit == "1" || unit == "-" {
                Ok(1.0)
            } else {
                Err(bad())
            }
        }
        Dimension::Length => length_factor(unit).ok_or_else(bad),
        Dimension::Time => time_factor(unit).ok_or_else(bad),
        Dimension::Velocity => {
            let (num, den) = unit.split_once('/').ok_or_else(bad)?;
            Ok(length_factor(num).ok_or_else(bad)? / time_factor(den).ok_or_else(bad)?)
        }
        Dimension::Diffusivity => {
            let (num, den) = unit.split_once('/').ok_or_else(bad)?;
            let num = num
                .strip_suffix('2')
                .or_else(|| num.strip_suffix("^2"))
                .ok_or_else(bad)?;
            let lf = length_factor(num).ok_or_else(bad)?;
            Ok(lf * lf / time_factor(den).ok_or_else(bad)?)
        }
        Dimension::PerLength => {
            let (num, den) = unit.split_once('/').ok_or_else(bad)?;
            if num != "1" {
                return Err(bad());
            }
            Ok(1.0 / length_factor(den).ok_or_else(bad)?)
        }
        Dimension::PerTime => {
            let (num, den) = unit.split_once('/').ok_or_else(bad)?;
            if num != "1" {
                return Err(bad());
            }
            Ok(1.0 / time_factor(den).ok_or_else(bad)?)
        }
    }
}

/// Parse `"<number> [unit]"` into base units (cm, s).
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        bail!("empty quantity; expected {}", dim.describe());
    }
    let (num_str, unit_str) = match trimmed.split_once(char::is_whitespace) {
        Some((n, u)) => (n, u.trim()),
        None => (trimmed, ""),
    };
    let value: f64 = num_str
        .parse()
        .map_err(|_| anyhow!("`{num_str}` is not a number"))?;
    if !value.is_finite() {
        bail!("quantity `{trimmed}` is not finite");
    }
    if unit_str.is_empty() && dim != Dimension::Dimensionless {
        bail!("quantity `{trimmed}` is missing a unit; expected {}", dim.describe());
    }
    Ok(value * unit_factor(unit_str, dim)?)
}

/// Format a base-unit value back into an annotated string that reparses to
/// the identical bits (shortest round-trip float formatting).
pub fn format_quantity(value: f64, dim: Dimension) -> String {
    let unit = dim.base_unit();
    if unit.is_empty() {
        format!("{value}")
    } else {
        format!("{value} {unit}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_and_mixed_units() {
        assert_eq!(parse_quantity("0.4653 cm2/s", Dimension::Diffusivity).unwrap(), 0.4653);
        let v = parse_quantity("4.32 cm/h", Dimension::Velocity).unwrap();
        assert!((v - 4.32 / 3600.0).abs() < 1e-18);
        assert_eq!(parse_quantity("140 m", Dimension::Length).unwrap(), 14000.0);
        assert_eq!(parse_quantity("10 min", Dimension::Time).unwrap(), 600.0);
        assert_eq!(parse_quantity("1 day", Dimension::Time).unwrap(), 86400.0);
        assert_eq!(parse_quantity("0.1 1/m", Dimension::PerLength).unwrap(), 0.001);
        assert_eq!(parse_quantity("-20 m", Dimension::Length).unwrap(), -2000.0);
        assert_eq!(parse_quantity("0.335", Dimension::Dimensionless).unwrap(), 0.335);
        let v = parse_quantity("9e-5 m/s", Dimension::Velocity).unwrap();
        assert!((v - 9e-3).abs() < 1e-17);
        let v = parse_quantity("1e-6 m/day", Dimension::Velocity).unwrap();
        assert!((v - 1e-4 / 86400.0).abs() < 1e-20);
    }

    #[test]
    fn dimension_mismatches_rejected() {
        assert!(parse_quantity("3 cm", Dimension::Time).is_err());
        assert!(parse_quantity("3 cm/s", Dimension::Diffusivity).is_err());
        assert!(parse_quantity("3", Dimension::Length).is_err());
        assert!(parse_quantity("3 parsecs", Dimension::Length).is_err());
        assert!(parse_quantity("abc cm", Dimension::Length).is_err());
        assert!(parse_quantity("1.5 1", Dimension::Dimensionless).is_ok());
    }

    #[test]
    fn round_trip_formatting() {
        for v in [0.4653, 1.0 / 3.0, 4.32 / 3600.0, -2000.0, 1e-7] {
            let s = format_quantity(v, Dimension::Velocity);
            let back = parse_quantity(&s, Dimension::Velocity).unwrap();
            assert_eq!(v.to_bits(), back.to_bits(), "{s} did not round trip");
        }
    }
}
