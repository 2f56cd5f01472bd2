//! Adaptive Gauss–Kronrod quadrature.
//!
//! This integrator exists primarily as an *oracle*: the special-function and
//! distribution tests integrate defining integrals with it and compare
//! against the closed-form implementations, which never call into this
//! module themselves (the one internal consumer, [`crate::channel`]'s dyadic
//! CDF, integrates a conditional Gamma form rather than any code path it is
//! used to check).

use crate::{Error, Result};

/// Tolerances and budget for one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: u32,
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: u32) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) {
            return Err(Error::config("quadrature tolerances must be positive"));
        }
        if max_subdivisions < 1 {
            return Err(Error::config("max_subdivisions must be at least 1"));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-11,
            max_subdivisions: 5000,
        }
    }
}

// 15-point Kronrod nodes (positive half) and weights, with the embedded
// 7-point Gauss weights. Values from QUADPACK's dqk15.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One G7-K15 panel: returns (Kronrod estimate, |Kronrod - Gauss|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).abs())
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    integral: f64,
    error: f64,
}

/// Integrate `f` over the finite interval `[a, b]`, globally adaptive:
/// the panel with the largest error estimate is bisected until the summed
/// error estimate meets `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("integration limits must be finite"));
    }
    if a == b {
        return Ok(0.0);
    }
    let (i0, e0) = gk15(&f, a, b);
    let mut panels = vec![Panel {
        a,
        b,
        integral: i0,
        error: e0,
    }];
    for _ in 0..spec.max_subdivisions {
        let total: f64 = panels.iter().map(|p| p.integral).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if !total.is_finite() {
            return Err(Error::numerical("integrand produced a non-finite value"));
        }
        if err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok(total);
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap();
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // interval no longer splittable in f64; keep its estimate
            let (i, _) = gk15(&f, a, b);
            panels.push(Panel {
                a,
                b,
                integral: i,
                error: 0.0,
            });
            continue;
        }
        let (il, el) = gk15(&f, a, mid);
        let (ir, er) = gk15(&f, mid, b);
        panels.push(Panel {
            a,
            b: mid,
            integral: il,
            error: el,
        });
        panels.push(Panel {
            a: mid,
            b,
            integral: ir,
            error: er,
        });
    }
    Err(Error::numerical(format!(
        "quadrature did not converge within {} subdivisions",
        spec.max_subdivisions
    )))
}

/// Integrate `f` over `[a, ∞)` via the substitution `t = a + u/(1-u)`.
pub fn integrate_to_inf<F: Fn(f64) -> f64>(f: F, a: f64, spec: &QuadratureSpec) -> Result<f64> {
    let g = |u: f64| {
        let one_minus = 1.0 - u;
        let t = a + u / one_minus;
        let w = 1.0 / (one_minus * one_minus);
        let v = f(t) * w;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let spec = QuadratureSpec::default();
        let v = integrate(|x| 3.0 * x * x, 0.0, 2.0, &spec).unwrap();
        assert!((v - 8.0).abs() < 1e-13);
    }

    #[test]
    fn gaussian_tail_to_infinity() {
        let spec = QuadratureSpec::default();
        let v = integrate_to_inf(|t| (-t * t / 2.0).exp(), 0.0, &spec).unwrap();
        let expected = (std::f64::consts::PI / 2.0).sqrt();
        assert!((v - expected).abs() < 1e-11, "{v} vs {expected}");
    }

    #[test]
    fn integrable_endpoint_singularity() {
        let spec = QuadratureSpec::default();
        // ∫₀¹ x^{-1/2} dx = 2
        let v = integrate(|x| x.powf(-0.5), 0.0, 1.0, &spec).unwrap();
        assert!((v - 2.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let spec = QuadratureSpec::new(1e-15, 1e-15, 2).unwrap();
        let r = integrate(|x| (50.0 * x).sin().abs(), 0.0, 3.0, &spec);
        assert!(r.is_err());
    }

    #[test]
    fn invalid_spec_rejected() {
        assert!(QuadratureSpec::new(0.0, 1e-9, 10).is_err());
        assert!(QuadratureSpec::new(1e-9, 1e-9, 0).is_err());
    }
}
