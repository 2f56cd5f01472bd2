//! Path loss, Nakagami small-scale fading, and the power distributions of
//! the two backscatter channel geometries: the monostatic roundtrip (the
//! same link traversed twice, so the power is a squared Gamma variate) and
//! the dyadic two-hop channel (product of two independent Gamma variates,
//! whose density carries a modified-Bessel-K kernel).

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::specfun::{bessel_k, gamma, regularized_lower_gamma};
use crate::{Error, Result};

/// Nakagami fading parameter for one unidirectional link.
///
/// `NoFading` is the m → ∞ limit: the amplitude is exactly 1. It is kept as
/// an explicit variant rather than a large float so degenerate scenarios stay
/// exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NakagamiM {
    Finite(f64),
    NoFading,
}

impl NakagamiM {
    /// A finite Nakagami parameter; requires m ≥ 1/2.
    pub fn new(m: f64) -> Result<Self> {
        if !(m >= 0.5) || !m.is_finite() {
            return Err(Error::domain(format!(
                "Nakagami parameter must satisfy m >= 0.5, got {m}"
            )));
        }
        Ok(NakagamiM::Finite(m))
    }

    /// Map a Rician K-factor κ ≥ 0 to the approximating Nakagami parameter
    /// m = (κ+1)²/(2κ+1). κ = 0 gives Rayleigh (m = 1).
    pub fn from_rician_kappa(kappa: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::domain(format!(
                "Rician kappa must be non-negative, got {kappa}"
            )));
        }
        Ok(NakagamiM::Finite(
            (kappa + 1.0) * (kappa + 1.0) / (2.0 * kappa + 1.0),
        ))
    }

    pub fn finite_value(&self) -> Option<f64> {
        match self {
            NakagamiM::Finite(m) => Some(*m),
            NakagamiM::NoFading => None,
        }
    }
}

/// Fading parameters of one tag's links: tag→reader, plus one CE→tag link
/// per carrier emitter (empty for monostatic operation).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FadingParams {
    pub tag_reader: NakagamiM,
    pub ce_tag: Vec<NakagamiM>,
}

impl FadingParams {
    pub fn new(tag_reader: f64, ce_tag: &[f64]) -> Result<Self> {
        Ok(FadingParams {
            tag_reader: NakagamiM::new(tag_reader)?,
            ce_tag: ce_tag
                .iter()
                .map(|&m| NakagamiM::new(m))
                .collect::<Result<_>>()?,
        })
    }

    /// Build from Rician K-factors via m = (κ+1)²/(2κ+1); only the mapped m
    /// is stored, since every expression downstream consumes m.
    pub fn from_rician(kappa_tag_reader: f64, kappa_ce_tag: &[f64]) -> Result<Self> {
        Ok(FadingParams {
            tag_reader: NakagamiM::from_rician_kappa(kappa_tag_reader)?,
            ce_tag: kappa_ce_tag
                .iter()
                .map(|&k| NakagamiM::from_rician_kappa(k))
                .collect::<Result<_>>()?,
        })
    }

    /// Finite m of the tag→reader link (fading laws never produce ∞).
    pub fn m_tag_reader(&self) -> f64 {
        self.tag_reader.finite_value().unwrap_or(f64::INFINITY)
    }

    /// Finite m of the CE→tag link for one emitter.
    pub fn m_ce_tag(&self, emitter: usize) -> f64 {
        self.ce_tag[emitter]
            .finite_value()
            .unwrap_or(f64::INFINITY)
    }
}

/// Power-law path loss with a reference distance (1 m throughout the
/// simulations).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossParams {
    pub wavelength: f64,
    pub reference_distance: f64,
    pub exponent: f64,
}

impl PathLossParams {
    pub fn new(wavelength: f64, exponent: f64) -> Result<Self> {
        if !(wavelength > 0.0) || !wavelength.is_finite() {
            return Err(Error::config(format!(
                "wavelength must be positive, got {wavelength}"
            )));
        }
        if !(exponent > 0.0) || !exponent.is_finite() {
            return Err(Error::config(format!(
                "path-loss exponent must be positive, got {exponent}"
            )));
        }
        Ok(Self {
            wavelength,
            reference_distance: 1.0,
            exponent,
        })
    }
}

/// Path gain L = (λ/(4π d₀))² (d₀/d)^ν for d ≥ d₀; strictly decreasing in d.
pub fn path_loss(distance: f64, params: &PathLossParams) -> Result<f64> {
    if !(distance >= params.reference_distance) {
        return Err(Error::domain(format!(
            "path_loss model is invalid inside the reference distance: d = {distance} < d0 = {}",
            params.reference_distance
        )));
    }
    path_loss_extrapolated(distance, params)
}

/// The same power law evaluated for any d > 0, including d < d₀.
///
/// Fine harvesting grids place tags inside the 1 m reference distance, where
/// the model is an extrapolation; callers opt into this explicitly.
pub fn path_loss_extrapolated(distance: f64, params: &PathLossParams) -> Result<f64> {
    if !(distance > 0.0) || !distance.is_finite() {
        return Err(Error::domain(format!(
            "distance must be positive, got {distance}"
        )));
    }
    let reference = params.wavelength / (4.0 * std::f64::consts::PI * params.reference_distance);
    Ok(reference * reference * (params.reference_distance / distance).powf(params.exponent))
}

/// Draw a Nakagami amplitude with E[a²] = 1: a = sqrt(g), g ~ Gamma(m, 1/m).
pub fn sample_nakagami_amplitude<R: Rng + ?Sized>(m: NakagamiM, rng: &mut R) -> f64 {
    sample_link_power(m, rng).sqrt()
}

/// Draw a link power g = a² ~ Gamma(m, 1/m) (exactly 1 for `NoFading`).
pub fn sample_link_power<R: Rng + ?Sized>(m: NakagamiM, rng: &mut R) -> f64 {
    match m {
        NakagamiM::NoFading => 1.0,
        NakagamiM::Finite(m) => Gamma::new(m, 1.0 / m)
            .expect("NakagamiM guarantees m >= 0.5")
            .sample(rng),
    }
}

/// Draw a channel phase, uniform on [0, 2π).
pub fn sample_phase<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>() * std::f64::consts::TAU
}

/// PDF of the per-link power a² for Nakagami-m fading: Gamma(m, 1/m).
pub fn link_power_pdf(x: f64, m: f64) -> Result<f64> {
    if !(m >= 0.5) || !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "link_power_pdf requires x >= 0 and m >= 0.5, got x = {x}, m = {m}"
        )));
    }
    if x == 0.0 {
        // limit: finite only for m >= 1
        return Ok(if m > 1.0 {
            0.0
        } else if m == 1.0 {
            1.0
        } else {
            f64::INFINITY
        });
    }
    Ok(m.powf(m) * x.powf(m - 1.0) * (-m * x).exp() / gamma(m)?)
}

/// PDF of the dyadic channel power g = a²_{CE→tag} · a²_{tag→reader}:
///
///   f(x) = 2 (x m_ln m_n)^{(m_ln+m_n)/2} K_{m_n - m_ln}(2√(m_ln m_n x)) / (x Γ(m_ln) Γ(m_n))
pub fn dyadic_power_pdf(x: f64, m_ce_tag: f64, m_tag_reader: f64) -> Result<f64> {
    if !(x > 0.0) || !(m_ce_tag >= 0.5) || !(m_tag_reader >= 0.5) {
        return Err(Error::domain(format!(
            "dyadic_power_pdf requires x > 0 and both m >= 0.5, got x = {x}, \
             m_ce_tag = {m_ce_tag}, m_tag_reader = {m_tag_reader}"
        )));
    }
    let prod = m_ce_tag * m_tag_reader;
    let half_sum = 0.5 * (m_ce_tag + m_tag_reader);
    let kernel = bessel_k(m_tag_reader - m_ce_tag, 2.0 * (prod * x).sqrt())?;
    Ok(2.0 * (x * prod).powf(half_sum) * kernel / (x * gamma(m_ce_tag)? * gamma(m_tag_reader)?))
}

/// CDF of the dyadic power for general (m_ln, m_n), via conditioning on the
/// first hop: F(x) = E_Y[P(m_n, m_n x / Y)], Y ~ Gamma(m_ln, 1/m_ln).
pub fn dyadic_power_cdf(x: f64, m_ce_tag: f64, m_tag_reader: f64) -> Result<f64> {
    if !(x >= 0.0) || !(m_ce_tag >= 0.5) || !(m_tag_reader >= 0.5) {
        return Err(Error::domain(format!(
            "dyadic_power_cdf requires x >= 0 and both m >= 0.5, got x = {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let spec = crate::specfun::quad::QuadratureSpec {
        abs_tol: 1e-13,
        rel_tol: 1e-10,
        max_subdivisions: 4000,
    };
    let v = crate::specfun::quad::integrate_to_inf(
        |y| {
            if y <= 0.0 {
                return 0.0;
            }
            let w = link_power_pdf(y, m_ce_tag).unwrap_or(0.0);
            if w == 0.0 || !w.is_finite() {
                return 0.0;
            }
            let p = regularized_lower_gamma(m_tag_reader, m_tag_reader * x / y).unwrap_or(0.0);
            w * p
        },
        0.0,
        &spec,
    )?;
    Ok(v.clamp(0.0, 1.0))
}

/// Rayleigh-fading dyadic power CDF: F(x) = 1 - 2√x K₁(2√x).
pub fn dyadic_power_cdf_rayleigh(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "dyadic_power_cdf_rayleigh requires x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let z = 2.0 * x.sqrt();
    if z < 1e-3 {
        // z K₁(z) = 1 + (z²/2) ln(z/2) + (z²/4)(2γ - 1) + O(z⁴ ln z); the
        // direct form loses all relative accuracy to cancellation here
        const EULER_GAMMA: f64 = 0.577215664901532860606512;
        let z2 = z * z;
        return Ok(-0.5 * z2 * (0.5 * z).ln() - 0.25 * z2 * (2.0 * EULER_GAMMA - 1.0));
    }
    if z > 750.0 {
        return Ok(1.0);
    }
    Ok((1.0 - z * bessel_k(1.0, z)?).clamp(0.0, 1.0))
}

/// PDF of the monostatic roundtrip power g = a⁴ for Nakagami-m fading:
///
///   f(x) = m^m x^{m/2 - 1} e^{-m √x} / (2 Γ(m))
pub fn monostatic_power_pdf(x: f64, m: f64) -> Result<f64> {
    if !(x > 0.0) || !(m >= 0.5) {
        return Err(Error::domain(format!(
            "monostatic_power_pdf requires x > 0 and m >= 0.5, got x = {x}, m = {m}"
        )));
    }
    Ok(m.powf(m) * x.powf(0.5 * m - 1.0) * (-m * x.sqrt()).exp() / (2.0 * gamma(m)?))
}

/// CDF of the roundtrip power: P(a⁴ ≤ x) = P(m, m √x).
pub fn monostatic_power_cdf(x: f64, m: f64) -> Result<f64> {
    if !(x >= 0.0) || !(m >= 0.5) {
        return Err(Error::domain(format!(
            "monostatic_power_cdf requires x >= 0 and m >= 0.5, got x = {x}, m = {m}"
        )));
    }
    regularized_lower_gamma(m, m * x.sqrt())
}

/// Rayleigh-fading roundtrip power CDF: F(x) = 1 - e^{-√x}.
pub fn monostatic_power_cdf_rayleigh(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "monostatic_power_cdf_rayleigh requires x >= 0, got {x}"
        )));
    }
    Ok(-(-x.sqrt()).exp_m1())
}
