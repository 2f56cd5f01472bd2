//! Gaussian tail probability Q(x).

use super::incgamma::{regularized_lower_gamma, regularized_upper_gamma};
use crate::{Error, Result};

/// Q(x) = P(Z > x) for Z ~ N(0, 1), evaluated through the regularized
/// incomplete gamma: Q(x) = ½ Q(½, x²/2) for x ≥ 0.
///
/// The far tail underflows towards +0 (never negative); Q(38) is below
/// 1e-300 but still representable as a subnormal.
pub fn q_function(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("q_function requires finite x, got {x}")));
    }
    if x == 0.0 {
        Ok(0.5)
    } else if x > 0.0 {
        Ok(0.5 * regularized_upper_gamma(0.5, 0.5 * x * x)?)
    } else {
        Ok(1.0 - 0.5 * regularized_upper_gamma(0.5, 0.5 * x * x)?)
    }
}

/// CDF of the standard normal, Φ(x) = 1 - Q(x).
pub fn normal_cdf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("normal_cdf requires finite x, got {x}")));
    }
    if x >= 0.0 {
        Ok(1.0 - q_function(x)?)
    } else {
        Ok(0.5 * regularized_lower_gamma(0.5, 0.5 * x * x).map(|p| 1.0 - p)?)
    }
}
