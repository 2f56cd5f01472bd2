//! Modified Bessel function of the second kind K_ν for real order.
//!
//! Temme's series for x ≤ 2 and the Steed continued fraction (CF2) for
//! x > 2 give K_μ and K_{μ+1} at the fractional order μ ∈ [-1/2, 1/2];
//! the stable upward recurrence then climbs to the requested order.

use crate::{Error, Result};

const MAX_ITER: usize = 10_000;
const EULER_GAMMA: f64 = 0.577215664901532860606512;
// x³ coefficient of 1/Γ(1+x) = 1 + γx + a₂x² + a₃x³ + ... (DLMF 5.7)
const INV_GAMMA_A3: f64 = -0.042002635034095235529;

/// gam1(μ) = [1/Γ(1-μ) - 1/Γ(1+μ)]/(2μ) and gam2(μ) = [1/Γ(1-μ) + 1/Γ(1+μ)]/2
/// for |μ| ≤ 1/2, with a series branch where the difference quotient cancels.
fn temme_gammas(mu: f64) -> Result<(f64, f64, f64, f64)> {
    let gampl = 1.0 / super::gamma::gamma(1.0 + mu)?;
    let gammi = 1.0 / super::gamma::gamma(1.0 - mu)?;
    let gam1 = if mu.abs() < 1e-3 {
        -(EULER_GAMMA + INV_GAMMA_A3 * mu * mu)
    } else {
        (gammi - gampl) / (2.0 * mu)
    };
    let gam2 = 0.5 * (gammi + gampl);
    Ok((gam1, gam2, gampl, gammi))
}

/// K_μ(x) and K_{μ+1}(x) for |μ| ≤ 1/2, x ≤ 2 (Temme 1975).
fn k_series(mu: f64, x: f64) -> Result<(f64, f64)> {
    let x2 = 0.5 * x;
    let pimu = std::f64::consts::PI * mu;
    let fact = if pimu.abs() < f64::EPSILON {
        1.0
    } else {
        pimu / pimu.sin()
    };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < f64::EPSILON {
        1.0
    } else {
        e.sinh() / e
    };
    let (gam1, gam2, gampl, gammi) = temme_gammas(mu)?;
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let e = e.exp();
    let mut p = 0.5 * e / gampl;
    let mut q = 0.5 / (e * gammi);
    let mut c = 1.0;
    let d2 = x2 * x2;
    let mut sum1 = p;
    for i in 1..=MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu * mu);
        c *= d2 / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        let del1 = c * (p - fi * ff);
        sum1 += del1;
        if del.abs() < sum.abs() * f64::EPSILON {
            return Ok((sum, sum1 * 2.0 / x));
        }
    }
    Err(Error::numerical("bessel_k series did not converge"))
}

/// K_μ(x) and K_{μ+1}(x) for |μ| ≤ 1/2, x > 2 (Steed CF2).
fn k_cf2(mu: f64, x: f64) -> Result<(f64, f64)> {
    let mu2 = mu * mu;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = delh;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    for i in 2..=MAX_ITER {
        a -= 2.0 * (i as f64 - 1.0);
        c = -a * c / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < f64::EPSILON {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::numerical(
            "bessel_k continued fraction did not converge",
        ));
    }
    h = a1 * h;
    let kmu = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let kmu1 = kmu * (mu + x + 0.5 - h) / x;
    Ok((kmu, kmu1))
}

/// K_ν(x) for real ν and x > 0. The order may be negative: K_ν = K_{-ν}.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() || !nu.is_finite() {
        return Err(Error::domain(format!(
            "bessel_k requires finite order and x > 0, got nu = {nu}, x = {x}"
        )));
    }
    let nu = nu.abs();
    let nl = (nu + 0.5).floor() as usize;
    let mu = nu - nl as f64;
    let (mut kmu, mut kmu1) = if x <= 2.0 {
        k_series(mu, x)?
    } else {
        k_cf2(mu, x)?
    };
    // upward recurrence K_{m+1} = K_{m-1} + 2m/x · K_m (stable for K)
    for i in 1..=nl {
        let knext = (mu + i as f64) * (2.0 / x) * kmu1 + kmu;
        kmu = kmu1;
        kmu1 = knext;
    }
    Ok(kmu)
}
