//! Unit-suffixed quantity parsing.
//!
//! Config values carry explicit units ("28 dBm", "1 ms", "0.01 MHz") and are
//! converted to SI on load; mixing dBm, MHz, and ms silently is the easiest
//! way to wreck a link budget.

use crate::AppError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Power,
    PowerDensity,
    Time,
    Frequency,
    Length,
}

impl Unit {
    fn describe(&self) -> &'static str {
        match self {
            Unit::Power => "power (W, mW, dBm)",
            Unit::PowerDensity => "power density (W/Hz, dBm/Hz)",
            Unit::Time => "time (s, ms, us)",
            Unit::Frequency => "frequency (Hz, kHz, MHz, GHz)",
            Unit::Length => "length (m, km)",
        }
    }
}

/// Parse "value unit" into SI. The field name is only for diagnostics.
pub fn parse_quantity(text: &str, unit: Unit, field: &str) -> Result<f64, AppError> {
    let s = text.trim();
    let (num_str, unit_str) = match s.find(|c: char| c.is_ascii_alphabetic()) {
        Some(pos) => (s[..pos].trim(), s[pos..].trim()),
        None => {
            return Err(AppError::config(format!(
                "field `{field}`: `{s}` has no unit; expected {}",
                unit.describe()
            )))
        }
    };
    let value: f64 = num_str.parse().map_err(|_| {
        AppError::config(format!(
            "field `{field}`: cannot parse `{num_str}` as a number"
        ))
    })?;
    let si = match (unit, unit_str) {
        (Unit::Power, "W") => value,
        (Unit::Power, "mW") => value * 1e-3,
        (Unit::Power, "dBm") => 10f64.powf((value - 30.0) / 10.0),
        (Unit::PowerDensity, "W/Hz") => value,
        (Unit::PowerDensity, "dBm/Hz") => 10f64.powf((value - 30.0) / 10.0),
        (Unit::Time, "s") => value,
        (Unit::Time, "ms") => value * 1e-3,
        (Unit::Time, "us") => value * 1e-6,
        (Unit::Frequency, "Hz") => value,
        (Unit::Frequency, "kHz") => value * 1e3,
        (Unit::Frequency, "MHz") => value * 1e6,
        (Unit::Frequency, "GHz") => value * 1e9,
        (Unit::Length, "m") => value,
        (Unit::Length, "km") => value * 1e3,
        _ => {
            return Err(AppError::config(format!(
                "field `{field}`: unit `{unit_str}` is not a {}",
                unit.describe()
            )))
        }
    };
    Ok(si)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn si_conversions() {
        assert!((parse_quantity("28 dBm", Unit::Power, "p").unwrap() - 0.6309573).abs() < 1e-6);
        assert_eq!(parse_quantity("2 W", Unit::Power, "p").unwrap(), 2.0);
        assert_eq!(parse_quantity("5 mW", Unit::Power, "p").unwrap(), 5e-3);
        let n0 = parse_quantity("-169 dBm/Hz", Unit::PowerDensity, "n0").unwrap();
        assert!((n0 - 10f64.powf(-19.9)).abs() < 1e-25);
        assert_eq!(parse_quantity("1 ms", Unit::Time, "t").unwrap(), 1e-3);
        assert_eq!(parse_quantity("868 MHz", Unit::Frequency, "f").unwrap(), 868e6);
        assert_eq!(parse_quantity("0.125 m", Unit::Length, "d").unwrap(), 0.125);
    }

    #[test]
    fn rejects_missing_or_wrong_units() {
        assert!(parse_quantity("28", Unit::Power, "p").is_err());
        assert!(parse_quantity("1 parsec", Unit::Length, "d").is_err());
        assert!(parse_quantity("abc dBm", Unit::Power, "p").is_err());
        let err = parse_quantity("1 ms", Unit::Frequency, "spacing").unwrap_err();
        assert!(err.to_string().contains("spacing"));
    }
}
