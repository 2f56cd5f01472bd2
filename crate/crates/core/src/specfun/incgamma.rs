//! Incomplete gamma functions and the exponential integral E₁.
//!
//! The regularized pair P(a,x) / Q(a,x) is evaluated by the usual split:
//! power series for x < a + 1, Lentz continued fraction otherwise, so the
//! smaller of the two is always the one computed directly.

use super::gamma::{gamma, ln_gamma};
use crate::{Error, Result};

const MAX_ITER: usize = 600;
const FPMIN: f64 = f64::MIN_POSITIVE / f64::EPSILON;

fn series_p(a: f64, x: f64) -> Result<f64> {
    // P(a,x) = x^a e^{-x}/Γ(a) · Σ_{n≥0} x^n / (a(a+1)...(a+n))
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * f64::EPSILON {
            let log_pre = a * x.ln() - x - ln_gamma(a)?;
            return Ok((sum.ln() + log_pre).exp());
        }
    }
    Err(Error::numerical("incomplete gamma series did not converge"))
}

/// Continued fraction for the tail, already scaled by e^x:
/// returns `e^x Γ(a,x) / x^a`. Valid for x ≥ a + 1.
fn cf_tail(a: f64, x: f64) -> Result<f64> {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < f64::EPSILON {
            return Ok(h);
        }
    }
    Err(Error::numerical(
        "incomplete gamma continued fraction did not converge",
    ))
}

/// Regularized lower incomplete gamma P(a, x) = γ(a,x)/Γ(a), a > 0, x ≥ 0.
pub fn regularized_lower_gamma(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() || !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "regularized_lower_gamma requires a > 0, x >= 0, got a = {a}, x = {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < a + 1.0 {
        series_p(a, x)
    } else {
        Ok(1.0 - regularized_upper_gamma(a, x)?)
    }
}

/// Regularized upper incomplete gamma Q(a, x) = Γ(a,x)/Γ(a), a > 0, x ≥ 0.
pub fn regularized_upper_gamma(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() || !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "regularized_upper_gamma requires a > 0, x >= 0, got a = {a}, x = {x}"
        )));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x < a + 1.0 {
        Ok(1.0 - series_p(a, x)?)
    } else {
        let log_pre = a * x.ln() - x - ln_gamma(a)?;
        Ok((cf_tail(a, x)?.ln() + log_pre).exp())
    }
}

/// Lower incomplete gamma γ(a, x) = ∫₀ˣ t^{a-1} e^{-t} dt, a > 0, x ≥ 0.
pub fn lower_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    Ok(regularized_lower_gamma(a, x)? * gamma(a)?)
}

/// Upper incomplete gamma Γ(a, x) = ∫ₓ^∞ t^{a-1} e^{-t} dt.
///
/// Supports a > 0 with x ≥ 0, and the a = 0 case with x > 0, where
/// Γ(0, x) = E₁(x).
pub fn upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    if a == 0.0 {
        if !(x > 0.0) {
            return Err(Error::domain(
                "upper_incomplete_gamma(0, x) requires x > 0 (the integral diverges at x = 0)",
            ));
        }
        return exp1(x);
    }
    Ok(regularized_upper_gamma(a, x)? * gamma(a)?)
}

/// `e^x Γ(a, x)` evaluated without forming the underflowing factor e^{-x}.
/// Requires x ≥ a + 1 so the continued fraction applies.
pub(crate) fn upper_incomplete_gamma_scaled(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !(x >= a + 1.0) {
        return Err(Error::domain(format!(
            "scaled upper gamma requires a > 0 and x >= a + 1, got a = {a}, x = {x}"
        )));
    }
    Ok((cf_tail(a, x)?.ln() + a * x.ln()).exp())
}

/// Exponential integral E₁(x) = ∫ₓ^∞ e^{-t}/t dt, x > 0.
pub fn exp1(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("exp1 requires x > 0, got {x}")));
    }
    if x <= 1.0 {
        // E₁(x) = -γ - ln x + Σ_{k≥1} (-1)^{k+1} x^k / (k·k!)
        const EULER_GAMMA: f64 = 0.577215664901532860606512;
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..=MAX_ITER {
            let kf = k as f64;
            term *= -x / kf;
            let del = -term / kf;
            sum += del;
            if del.abs() < sum.abs().max(1.0) * f64::EPSILON {
                return Ok(-EULER_GAMMA - x.ln() + sum);
            }
        }
        Err(Error::numerical("exp1 series did not converge"))
    } else {
        // Lentz continued fraction: E₁(x) = e^{-x} / (x + 1 - 1²/(x + 3 - 2²/(x + 5 - ...)))
        let mut b = x + 1.0;
        let mut c = 1.0 / FPMIN;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=MAX_ITER {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < f64::EPSILON {
                return Ok(h * (-x).exp());
            }
        }
        Err(Error::numerical("exp1 continued fraction did not converge"))
    }
}
