//! Gamma function on the positive real axis (Lanczos approximation, g = 7,
//! n = 9; coefficients due to Godfrey, as used by Boost and CPython).

use crate::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    let mut s = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        s += c / (x + i as f64 - 1.0);
    }
    s
}

/// Γ(x) for x > 0. Poles and the negative axis are outside the domain used
/// by the fading and outage expressions and are rejected.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        // reflection keeps the Lanczos series in its accurate range
        let g = gamma(1.0 - x)?;
        return Ok(std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * g));
    }
    let t = x + LANCZOS_G - 0.5;
    let s = lanczos_sum(x);
    Ok((2.0 * std::f64::consts::PI).sqrt() * t.powf(x - 0.5) * (-t).exp() * s)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        let lg = ln_gamma(1.0 - x)?;
        return Ok(std::f64::consts::PI.ln() - (std::f64::consts::PI * x).sin().ln() - lg);
    }
    let t = x + LANCZOS_G - 0.5;
    let s = lanczos_sum(x);
    Ok(0.5 * (2.0 * std::f64::consts::PI).ln() + (x - 0.5) * t.ln() - t + s.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_factorials() {
        assert!((gamma(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma(5.0).unwrap() - 24.0).abs() < 24.0 * 1e-13);
    }

    #[test]
    fn half_integer() {
        let v = gamma(0.5).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn recurrence_over_grid() {
        // Γ(x+1) = x Γ(x), rel 1e-10 over x in {0.1, ..., 10}
        let mut x = 0.1;
        while x <= 10.0 {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(
                ((lhs - rhs) / rhs).abs() < 1e-10,
                "recurrence failed at x = {x}"
            );
            x += 0.1;
        }
    }

    #[test]
    fn ln_gamma_consistent() {
        for &x in &[0.2, 0.7, 1.3, 4.5, 9.9, 57.0] {
            let a = gamma(x).map(|v| v.ln()).unwrap();
            let b = ln_gamma(x).unwrap();
            assert!((a - b).abs() < 1e-11, "x = {x}: {a} vs {b}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.5).is_err());
        assert!(gamma(f64::NAN).is_err());
        assert!(ln_gamma(-0.1).is_err());
    }
}
