//! Bit decisions on received 4-dimensional FSK symbols.
//!
//! Three rules are provided: minimum-distance coherent detection (ML under
//! equal-energy orthogonal hypotheses, requires full CSI), the noncoherent
//! envelope rule |r₁ + e^{2jΦ₀} r₂| ≷ |r₃ + e^{2jΦ₁} r₄| (ML when only the
//! tag phases are known), and the plain square-law detector kept as a
//! reference. All ties break deterministically to bit 0; under continuous
//! noise they occur with probability zero.

use num_complex::Complex64;

use crate::signal::{tag_symbol, RxSymbol, TagPhases};

/// What the receiver knows about the channel when deciding a bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelKnowledge {
    pub amplitude: f64,
    pub phase: f64,
    pub mode: CsiMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsiMode {
    /// Amplitude and phase of the effective channel are known.
    FullCsi,
    /// Only amplitudes and the tag's implementation phases are known; the
    /// dyadic channel angle is unknown.
    AmplitudesAndTagPhasesOnly,
}

/// ML coherent decision: argmin over bits of ‖r - h√(E_eff) x(bit)‖₂.
/// `energy_scale` is the effective energy E_eff (already including any
/// architecture prefactor), so the hypothesis points are h√(E_eff)·x.
pub fn detect_coherent(
    rx: &RxSymbol,
    h: Complex64,
    energy_scale: f64,
    phases: &TagPhases,
) -> u8 {
    let scale = h * energy_scale.sqrt();
    let mut metric = [0.0f64; 2];
    for (bit, m) in metric.iter_mut().enumerate() {
        let x = tag_symbol(bit as u8, phases);
        *m = rx
            .vector
            .iter()
            .zip(x.iter())
            .map(|(r, xi)| (r - scale * xi).norm_sqr())
            .sum();
    }
    u8::from(metric[1] < metric[0])
}

/// Noncoherent envelope decision: bit 0 iff
/// |r₁ + e^{2jΦ₀} r₂| ≥ |r₃ + e^{2jΦ₁} r₄|.
pub fn detect_noncoherent(rx: &RxSymbol, phases: &TagPhases) -> u8 {
    let rot0 = Complex64::from_polar(1.0, 2.0 * phases.phi0);
    let rot1 = Complex64::from_polar(1.0, 2.0 * phases.phi1);
    let env0 = (rx.vector[0] + rot0 * rx.vector[1]).norm();
    let env1 = (rx.vector[2] + rot1 * rx.vector[3]).norm();
    u8::from(env1 > env0)
}

/// Square-law decision: bit 0 iff |r₁|² + |r₂|² ≥ |r₃|² + |r₄|².
pub fn detect_square_law(rx: &RxSymbol) -> u8 {
    let e0 = rx.vector[0].norm_sqr() + rx.vector[1].norm_sqr();
    let e1 = rx.vector[2].norm_sqr() + rx.vector[3].norm_sqr();
    u8::from(e1 > e0)
}

/// Dispatch on the receiver's channel knowledge.
pub fn detect(rx: &RxSymbol, knowledge: &ChannelKnowledge, energy_scale: f64, phases: &TagPhases) -> u8 {
    match knowledge.mode {
        CsiMode::FullCsi => detect_coherent(
            rx,
            Complex64::from_polar(knowledge.amplitude, -knowledge.phase),
            energy_scale,
            phases,
        ),
        CsiMode::AmplitudesAndTagPhasesOnly => detect_noncoherent(rx, phases),
    }
}
