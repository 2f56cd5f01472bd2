//! Baseband FSK signal synthesis and link-budget quantities.
//!
//! A tag's binary FSK symbol occupies four spectral lines, so each bit maps
//! to a 4-dimensional complex vector. This module builds those vectors,
//! forms received symbols with AWGN, computes energy per bit and SNR for the
//! two architectures, and derives subcarrier orthogonality and the
//! adjacent-channel interference coefficients.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::channel::NakagamiM;
use crate::{Error, Result};

/// Noise, timing, power, and tag constants shared by a network study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// N0 [W/Hz]: per-component complex noise variance of the receiver.
    pub noise_density: f64,
    /// Bit duration T [s].
    pub bit_duration: f64,
    /// Carrier emitter transmit powers [W], one per CE (empty when monostatic).
    pub ce_powers: Vec<f64>,
    /// Reader transmit power [W] (monostatic illumination).
    pub reader_power: f64,
    /// |Γ_{n,0} - Γ_{n,1}| per tag.
    pub reflection_gap: Vec<f64>,
    /// Scattering efficiency s_n per tag.
    pub scattering_efficiency: Vec<f64>,
    /// Carrier wavelength λ [m].
    pub wavelength: f64,
}

impl SystemConfig {
    pub fn new(
        noise_density: f64,
        bit_duration: f64,
        ce_powers: Vec<f64>,
        reader_power: f64,
        reflection_gap: Vec<f64>,
        scattering_efficiency: Vec<f64>,
        wavelength: f64,
    ) -> Result<Self> {
        if !(noise_density > 0.0) {
            return Err(Error::config("noise density must be positive"));
        }
        if !(bit_duration > 0.0) {
            return Err(Error::config("bit duration must be positive"));
        }
        if !(reader_power > 0.0) {
            return Err(Error::config("reader power must be positive"));
        }
        if ce_powers.iter().any(|&p| !(p > 0.0)) {
            return Err(Error::config("all CE powers must be positive"));
        }
        if reflection_gap.len() != scattering_efficiency.len() {
            return Err(Error::config(
                "per-tag constant vectors must have equal length",
            ));
        }
        if reflection_gap.iter().any(|&g| !(g > 0.0 && g <= 2.0)) {
            return Err(Error::config("reflection gap must lie in (0, 2]"));
        }
        if scattering_efficiency.iter().any(|&s| !(s > 0.0 && s <= 1.0)) {
            return Err(Error::config("scattering efficiency must lie in (0, 1]"));
        }
        if !(wavelength > 0.0) {
            return Err(Error::config("wavelength must be positive"));
        }
        Ok(Self {
            noise_density,
            bit_duration,
            ce_powers,
            reader_power,
            reflection_gap,
            scattering_efficiency,
            wavelength,
        })
    }

    /// Same tag constants replicated for `n_tags` tags.
    #[allow(clippy::too_many_arguments)]
    pub fn uniform_tags(
        n_tags: usize,
        noise_density: f64,
        bit_duration: f64,
        ce_powers: Vec<f64>,
        reader_power: f64,
        reflection_gap: f64,
        scattering_efficiency: f64,
        wavelength: f64,
    ) -> Result<Self> {
        Self::new(
            noise_density,
            bit_duration,
            ce_powers,
            reader_power,
            vec![reflection_gap; n_tags],
            vec![scattering_efficiency; n_tags],
            wavelength,
        )
    }

    pub fn n_tags(&self) -> usize {
        self.reflection_gap.len()
    }
}

/// Implementation-specific phase mismatch of one tag, constant over all
/// slots of a transmission.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TagPhases {
    pub phi0: f64,
    pub phi1: f64,
}

impl TagPhases {
    /// Wraps both phases into [0, 2π).
    pub fn new(phi0: f64, phi1: f64) -> Self {
        Self {
            phi0: phi0.rem_euclid(std::f64::consts::TAU),
            phi1: phi1.rem_euclid(std::f64::consts::TAU),
        }
    }

    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::new(
            rng.random::<f64>() * std::f64::consts::TAU,
            rng.random::<f64>() * std::f64::consts::TAU,
        )
    }
}

/// One received 4-dimensional FSK symbol together with the channel
/// realization that generated it.
#[derive(Debug, Clone, PartialEq)]
pub struct RxSymbol {
    pub vector: [Complex64; 4],
    pub slot: usize,
    pub tag: usize,
    pub truth_bit: u8,
    pub channel_amp: f64,
    pub channel_phase: f64,
}

/// Which architecture's energy prefactor applies when forming the received
/// signal: the monostatic roundtrip signal is scaled by √(m/(m+1)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnergyScaling {
    Multistatic,
    Monostatic(NakagamiM),
}

impl EnergyScaling {
    /// The effective energy h√(E_eff) multiplying the unit-norm symbol.
    pub fn effective_energy(&self, energy: f64) -> f64 {
        match self {
            EnergyScaling::Multistatic => energy,
            EnergyScaling::Monostatic(m) => match m.finite_value() {
                Some(m) => energy * m / (m + 1.0),
                None => energy,
            },
        }
    }
}

/// The 4-dimensional unit-energy FSK symbol of one bit:
/// x = √½ [e^{+jΦ₀}, e^{-jΦ₀}, e^{+jΦ₁}, e^{-jΦ₁}] ⊙ v_bit with
/// v₀ = [1,1,0,0], v₁ = [0,0,1,1].
pub fn tag_symbol(bit: u8, phases: &TagPhases) -> [Complex64; 4] {
    debug_assert!(bit <= 1);
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let zero = Complex64::new(0.0, 0.0);
    if bit == 0 {
        let e = Complex64::from_polar(half, phases.phi0);
        [e, e.conj(), zero, zero]
    } else {
        let e = Complex64::from_polar(half, phases.phi1);
        [zero, zero, e, e.conj()]
    }
}

/// Average energy per bit of tag `n` illuminated by CE `l`:
/// E = μ²T/2 with μ = √(2 P_Cl L_CE→tag L_tag→reader) |ΔΓ| (2/π) s_n.
pub fn energy_per_bit_multistatic(
    config: &SystemConfig,
    gain_ce_tag: f64,
    gain_tag_reader: f64,
    ce: usize,
    tag: usize,
) -> Result<f64> {
    if !(gain_ce_tag > 0.0) || !(gain_tag_reader > 0.0) {
        return Err(Error::domain(format!(
            "path gains must be positive, got CE→tag {gain_ce_tag}, tag→reader {gain_tag_reader}"
        )));
    }
    let p = *config
        .ce_powers
        .get(ce)
        .ok_or_else(|| Error::config(format!("no CE with index {ce}")))?;
    let mu = (2.0 * p * gain_ce_tag * gain_tag_reader).sqrt()
        * config.reflection_gap[tag]
        * std::f64::consts::FRAC_2_PI
        * config.scattering_efficiency[tag];
    Ok(mu * mu * config.bit_duration / 2.0)
}

/// Average energy per bit of tag `n` in the monostatic architecture:
/// E = ((1+m)/(2m)) μ²T with μ = √(2 P_R) · L_tag→reader · |ΔΓ| (2/π) s_n.
///
/// The path gain enters μ linearly (not under the square root): the carrier
/// suffers the tag→reader loss twice on its roundtrip.
pub fn energy_per_bit_monostatic(
    config: &SystemConfig,
    gain_tag_reader: f64,
    m: NakagamiM,
    tag: usize,
) -> Result<f64> {
    if !(gain_tag_reader > 0.0) {
        return Err(Error::domain(format!(
            "path gain must be positive, got {gain_tag_reader}"
        )));
    }
    let mu = (2.0 * config.reader_power).sqrt()
        * gain_tag_reader
        * config.reflection_gap[tag]
        * std::f64::consts::FRAC_2_PI
        * config.scattering_efficiency[tag];
    let prefactor = match m.finite_value() {
        Some(m) => (1.0 + m) / (2.0 * m),
        None => 0.5,
    };
    Ok(prefactor * mu * mu * config.bit_duration)
}

/// Average SNR of a link: E/N0. Slot-independent for monostatic links; for
/// multistatic links the energy (and hence SNR) changes with the active CE.
pub fn snr(energy_per_bit: f64, config: &SystemConfig) -> f64 {
    energy_per_bit / config.noise_density
}

/// Subcarrier frequency plan: a permutation assigns channel index
/// c = p(n) ∈ {1..N} to tag n, whose tone pair is then
/// (base + c·spacing, base + c·spacing + spacing/5).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyAssignment {
    permutation: Vec<usize>,
    pub base_freq: f64,
    pub spacing: f64,
    /// ε_{n,j} of the interference coefficient; 2πT for the FSK pulse shape
    /// studied here, exposed because it is modulation-dependent.
    pub epsilon: f64,
}

impl FrequencyAssignment {
    pub fn new(permutation: Vec<usize>, base_freq: f64, spacing: f64, epsilon: f64) -> Result<Self> {
        let n = permutation.len();
        let mut seen = vec![false; n + 1];
        for &c in &permutation {
            if c == 0 || c > n || seen[c] {
                return Err(Error::config(
                    "assignment must be a permutation of channels 1..=N",
                ));
            }
            seen[c] = true;
        }
        if !(base_freq > 0.0) || !(spacing > 0.0) || !(epsilon > 0.0) {
            return Err(Error::config(
                "base frequency, spacing, and epsilon must be positive",
            ));
        }
        Ok(Self {
            permutation,
            base_freq,
            spacing,
            epsilon,
        })
    }

    /// Identity assignment (tag n gets channel n+1) with ε = 2πT.
    pub fn identity(n_tags: usize, base_freq: f64, spacing: f64, bit_duration: f64) -> Result<Self> {
        Self::new(
            (1..=n_tags).collect(),
            base_freq,
            spacing,
            std::f64::consts::TAU * bit_duration,
        )
    }

    /// Uniformly random assignment with ε = 2πT.
    pub fn random<R: Rng + ?Sized>(
        n_tags: usize,
        base_freq: f64,
        spacing: f64,
        bit_duration: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let mut perm: Vec<usize> = (1..=n_tags).collect();
        // Fisher-Yates
        for i in (1..n_tags).rev() {
            let j = rng.random_range(0..=i);
            perm.swap(i, j);
        }
        Self::new(perm, base_freq, spacing, std::f64::consts::TAU * bit_duration)
    }

    pub fn n_tags(&self) -> usize {
        self.permutation.len()
    }

    pub fn channel_of(&self, tag: usize) -> usize {
        self.permutation[tag]
    }

    /// The (F_{n,0}, F_{n,1}) subcarrier pair of a tag.
    pub fn freq_pair(&self, tag: usize) -> (f64, f64) {
        let c = self.permutation[tag] as f64;
        let f0 = self.base_freq + c * self.spacing;
        (f0, f0 + self.spacing / 5.0)
    }
}

/// Coherent FSK tones must differ by multiples of 1/(2T); noncoherent
/// detection needs the full 1/T.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrthogonalityMode {
    Coherent,
    Noncoherent,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OrthogonalityViolation {
    /// |F_{n,i} - F_{j,m}| is not an integer multiple of the tone quantum.
    NonIntegerSpacing {
        tag_a: usize,
        bit_a: u8,
        tag_b: usize,
        bit_b: u8,
        delta_hz: f64,
    },
    /// A tone sits too close to DC relative to the bit rate.
    TooCloseToDc { tag: usize, bit: u8, freq_hz: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalityReport {
    pub satisfied: bool,
    pub violations: Vec<OrthogonalityViolation>,
}

/// Check every pair of assigned tones against the orthogonality criterion
/// and each tone against F ≫ 1/(2T) (with ≫ interpreted as a configurable
/// factor, 10 by default via [`check_orthogonality`]).
pub fn check_orthogonality_with_margin(
    assignment: &FrequencyAssignment,
    bit_duration: f64,
    mode: OrthogonalityMode,
    dc_margin_factor: f64,
) -> OrthogonalityReport {
    let quantum = match mode {
        OrthogonalityMode::Coherent => 0.5 / bit_duration,
        OrthogonalityMode::Noncoherent => 1.0 / bit_duration,
    };
    let n = assignment.n_tags();
    let mut violations = Vec::new();
    let tones: Vec<(usize, u8, f64)> = (0..n)
        .flat_map(|t| {
            let (f0, f1) = assignment.freq_pair(t);
            [(t, 0u8, f0), (t, 1u8, f1)]
        })
        .collect();
    let min_freq = dc_margin_factor * 0.5 / bit_duration;
    for &(tag, bit, f) in &tones {
        if f < min_freq {
            violations.push(OrthogonalityViolation::TooCloseToDc {
                tag,
                bit,
                freq_hz: f,
            });
        }
    }
    for i in 0..tones.len() {
        for j in (i + 1)..tones.len() {
            let (ta, ba, fa) = tones[i];
            let (tb, bb, fb) = tones[j];
            let delta = (fa - fb).abs();
            let cycles = delta / quantum;
            if (cycles - cycles.round()).abs() > 1e-6 * cycles.max(1.0) {
                violations.push(OrthogonalityViolation::NonIntegerSpacing {
                    tag_a: ta,
                    bit_a: ba,
                    tag_b: tb,
                    bit_b: bb,
                    delta_hz: delta,
                });
            }
        }
    }
    OrthogonalityReport {
        satisfied: violations.is_empty(),
        violations,
    }
}

/// [`check_orthogonality_with_margin`] with the default margin factor of 10.
pub fn check_orthogonality(
    assignment: &FrequencyAssignment,
    bit_duration: f64,
    mode: OrthogonalityMode,
) -> OrthogonalityReport {
    check_orthogonality_with_margin(assignment, bit_duration, mode, 10.0)
}

/// Symmetric matrix of adjacent-channel interference coefficients
/// ρ_{nj} = [ε · min_{i,m} |F_{n,i} - F_{j,m}|]^{-2}; the diagonal is not a
/// meaningful quantity and reads as an error.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoMatrix {
    n: usize,
    values: Vec<f64>,
}

impl RhoMatrix {
    pub fn n_tags(&self) -> usize {
        self.n
    }

    pub fn get(&self, n: usize, j: usize) -> Result<f64> {
        if n == j {
            return Err(Error::domain(
                "rho is defined only between distinct tags (n != j)",
            ));
        }
        Ok(self.values[n * self.n + j])
    }

    /// Off-diagonal accessor without the error path, for hot loops; the
    /// diagonal is stored as 0.
    #[inline]
    pub fn at(&self, n: usize, j: usize) -> f64 {
        self.values[n * self.n + j]
    }
}

/// Build the ρ matrix of an assignment (Eq. ρ_{nj} = max over bit pairs of
/// [ε |ΔF|]^{-2}, i.e. the inverse square of the smallest tone separation).
pub fn rho_coefficients(assignment: &FrequencyAssignment) -> Result<RhoMatrix> {
    let n = assignment.n_tags();
    let mut values = vec![0.0; n * n];
    for a in 0..n {
        let (fa0, fa1) = assignment.freq_pair(a);
        for b in (a + 1)..n {
            let (fb0, fb1) = assignment.freq_pair(b);
            let min_sep = [fa0 - fb0, fa0 - fb1, fa1 - fb0, fa1 - fb1]
                .iter()
                .map(|d| d.abs())
                .fold(f64::INFINITY, f64::min);
            if min_sep == 0.0 {
                return Err(Error::config(format!(
                    "tags {a} and {b} share a subcarrier tone"
                )));
            }
            let rho = (assignment.epsilon * min_sep).powi(-2);
            values[a * n + b] = rho;
            values[b * n + a] = rho;
        }
    }
    Ok(RhoMatrix { n, values })
}

/// Form a received symbol r = h √(E_eff) x_bit + w with
/// w ~ CN(0, N0 I₄) (each real/imaginary part has variance N0/2).
#[allow(clippy::too_many_arguments)]
pub fn synthesize_rx<R: Rng + ?Sized>(
    bit: u8,
    phases: &TagPhases,
    channel_amp: f64,
    channel_phase: f64,
    energy: f64,
    scaling: EnergyScaling,
    noise_density: f64,
    slot: usize,
    tag: usize,
    rng: &mut R,
) -> RxSymbol {
    let h = Complex64::from_polar(channel_amp, -channel_phase);
    let scale = scaling.effective_energy(energy).sqrt();
    let x = tag_symbol(bit, phases);
    let sigma = (noise_density / 2.0).sqrt();
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let mut vector = [Complex64::new(0.0, 0.0); 4];
    for (v, xi) in vector.iter_mut().zip(x.iter()) {
        let w = Complex64::new(sigma * normal.sample(rng), sigma * normal.sample(rng));
        *v = h * scale * xi + w;
    }
    RxSymbol {
        vector,
        slot,
        tag,
        truth_bit: bit,
        channel_amp,
        channel_phase,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn table_config(n_tags: usize) -> SystemConfig {
        let lambda = 3e8 / 868e6;
        SystemConfig::uniform_tags(
            n_tags,
            10f64.powf((-169.0 - 30.0) / 10.0),
            1e-3,
            vec![0.02; 4],
            0.02,
            2.0,
            0.1,
            lambda,
        )
        .unwrap()
    }

    #[test]
    fn symbol_zero_phase() {
        let x = tag_symbol(0, &TagPhases::new(0.0, 0.0));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((x[0] - Complex64::new(h, 0.0)).norm() < 1e-15);
        assert!((x[1] - Complex64::new(h, 0.0)).norm() < 1e-15);
        assert_eq!(x[2], Complex64::new(0.0, 0.0));
        assert_eq!(x[3], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn symbol_bit_one_quarter_phase() {
        let x = tag_symbol(1, &TagPhases::new(0.0, std::f64::consts::FRAC_PI_2));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((x[2] - Complex64::new(0.0, h)).norm() < 1e-15);
        assert!((x[3] - Complex64::new(0.0, -h)).norm() < 1e-15);
    }

    #[test]
    fn symbol_geometry_for_any_phases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let phases = TagPhases::sample(&mut rng);
            let x0 = tag_symbol(0, &phases);
            let x1 = tag_symbol(1, &phases);
            let norm0: f64 = x0.iter().map(|c| c.norm_sqr()).sum();
            let norm1: f64 = x1.iter().map(|c| c.norm_sqr()).sum();
            assert!((norm0 - 1.0).abs() < 1e-14);
            assert!((norm1 - 1.0).abs() < 1e-14);
            let inner: Complex64 = x0.iter().zip(x1.iter()).map(|(a, b)| a * b.conj()).sum();
            assert!(inner.norm() < 1e-15);
            let dist: f64 = x0
                .iter()
                .zip(x1.iter())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!((dist - std::f64::consts::SQRT_2).abs() < 1e-12);
        }
    }

    #[test]
    fn multistatic_energy_table_evaluation() {
        // P_Cl = 13 dBm, both links at the reference distance, ν = 2
        let config = table_config(1);
        let mut config = config;
        config.ce_powers = vec![10f64.powf((13.0 - 30.0) / 10.0)];
        let l0 = (config.wavelength / (4.0 * std::f64::consts::PI)).powi(2);
        let e = energy_per_bit_multistatic(&config, l0, l0, 0, 0).unwrap();
        // direct evaluation of μ²T/2
        let mu = (2.0 * config.ce_powers[0] * l0 * l0).sqrt()
            * 2.0
            * std::f64::consts::FRAC_2_PI
            * 0.1;
        assert!(((e - mu * mu * 1e-3 / 2.0) / e).abs() < 1e-14);
        // linear in CE power
        let mut doubled = config.clone();
        doubled.ce_powers[0] *= 2.0;
        let e2 = energy_per_bit_multistatic(&doubled, l0, l0, 0, 0).unwrap();
        assert!(((e2 / e) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn monostatic_energy_prefactor_and_roundtrip() {
        let config = table_config(1);
        let gain = 1e-6;
        let e_ray = energy_per_bit_monostatic(&config, gain, NakagamiM::new(1.0).unwrap(), 0).unwrap();
        let e_inf = energy_per_bit_monostatic(&config, gain, NakagamiM::NoFading, 0).unwrap();
        // (1+m)/(2m) is 1 at m = 1 and 1/2 in the no-fading limit
        assert!(((e_ray / e_inf) - 2.0).abs() < 1e-12);
        // halving the gain quarters the energy (roundtrip loss)
        let e_half = energy_per_bit_monostatic(&config, gain / 2.0, NakagamiM::new(1.0).unwrap(), 0)
            .unwrap();
        assert!(((e_ray / e_half) - 4.0).abs() < 1e-12);
        assert!(energy_per_bit_monostatic(&config, 0.0, NakagamiM::NoFading, 0).is_err());
        assert!(energy_per_bit_multistatic(&config, 1e-3, 0.0, 0, 0).is_err());
    }

    #[test]
    fn snr_is_energy_over_noise() {
        let config = table_config(1);
        assert!((snr(config.noise_density, &config) - 1.0).abs() < 1e-15);
        let e = 100.0 * config.noise_density;
        assert!((10.0 * snr(e, &config).log10() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn multistatic_snr_varies_across_slots() {
        // two CEs at different distances from the tag give different per-slot SNR
        let mut config = table_config(1);
        config.ce_powers = vec![0.02, 0.02];
        let l0 = (config.wavelength / (4.0 * std::f64::consts::PI)).powi(2);
        let near = energy_per_bit_multistatic(&config, l0, l0 * 1e-2, 0, 0).unwrap();
        let far = energy_per_bit_multistatic(&config, l0 * 1e-4, l0 * 1e-2, 1, 0).unwrap();
        assert!(snr(near, &config) > snr(far, &config));
    }

    #[test]
    fn orthogonality_of_reference_plan() {
        // F_sp = 10 kHz, T = 1 ms: all tone separations are multiples of 500 Hz
        let a = FrequencyAssignment::identity(8, 0.1e6, 0.01e6, 1e-3).unwrap();
        let report = check_orthogonality(&a, 1e-3, OrthogonalityMode::Coherent);
        assert!(report.satisfied, "{:?}", report.violations);
        let report = check_orthogonality(&a, 1e-3, OrthogonalityMode::Noncoherent);
        assert!(report.satisfied);
    }

    #[test]
    fn orthogonality_single_tag_vacuous() {
        let a = FrequencyAssignment::identity(1, 0.1e6, 0.01e6, 1e-3).unwrap();
        assert!(check_orthogonality(&a, 1e-3, OrthogonalityMode::Coherent).satisfied);
    }

    #[test]
    fn orthogonality_violation_is_reported() {
        // F_sp = 10.3 kHz breaks the integer-multiple condition
        let a = FrequencyAssignment::identity(3, 0.1e6, 10.3e3, 1e-3).unwrap();
        let report = check_orthogonality(&a, 1e-3, OrthogonalityMode::Coherent);
        assert!(!report.satisfied);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, OrthogonalityViolation::NonIntegerSpacing { .. })));
    }

    #[test]
    fn rho_reference_value_and_symmetry() {
        // adjacent channels, T = 1 ms, F_sp = 10 kHz → 25/(2π·10⁻³·4·10⁴)²
        let a = FrequencyAssignment::identity(4, 0.1e6, 0.01e6, 1e-3).unwrap();
        let rho = rho_coefficients(&a).unwrap();
        let expect = 25.0 / (std::f64::consts::TAU * 1e-3 * 4.0 * 1e4).powi(2);
        assert!(((rho.get(0, 1).unwrap() - expect) / expect).abs() < 1e-12);
        assert!((expect - 3.9579e-4).abs() < 1e-7);
        for n in 0..4 {
            for j in 0..4 {
                if n != j {
                    assert_eq!(rho.get(n, j).unwrap(), rho.get(j, n).unwrap());
                    assert!(rho.get(n, j).unwrap() > 0.0);
                }
            }
        }
        assert!(rho.get(2, 2).is_err());
    }

    #[test]
    fn rho_follows_the_permutation_distance_closed_form() {
        // ρ for |Δc| = k is 25/[2πT(5k-1)F_sp]²; |Δc| = 2 is (9/4)² weaker than adjacent
        let a = FrequencyAssignment::identity(5, 0.1e6, 0.01e6, 1e-3).unwrap();
        let rho = rho_coefficients(&a).unwrap();
        let ratio = rho.get(0, 1).unwrap() / rho.get(0, 2).unwrap();
        assert!((ratio - (9.0f64 / 4.0).powi(2)).abs() < 1e-9);
        for k in 1..4usize {
            let expect = 25.0
                / (std::f64::consts::TAU * 1e-3 * (5.0 * k as f64 - 1.0) * 1e4).powi(2);
            let got = rho.get(0, k).unwrap();
            assert!(((got - expect) / expect).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn synthesize_noiseless_and_prefactor() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let phases = TagPhases::new(0.0, 0.0);
        let rx = synthesize_rx(
            0,
            &phases,
            1.0,
            0.0,
            4.0,
            EnergyScaling::Multistatic,
            0.0,
            0,
            0,
            &mut rng,
        );
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((rx.vector[0] - Complex64::new(2.0 * h, 0.0)).norm() < 1e-12);
        assert!((rx.vector[1] - Complex64::new(2.0 * h, 0.0)).norm() < 1e-12);
        assert_eq!(rx.vector[2], Complex64::new(0.0, 0.0));
        // monostatic at m = 1 scales the signal by √(1/2) relative to multistatic
        let rx_m = synthesize_rx(
            0,
            &phases,
            1.0,
            0.0,
            4.0,
            EnergyScaling::Monostatic(NakagamiM::new(1.0).unwrap()),
            0.0,
            0,
            0,
            &mut rng,
        );
        let ratio = rx_m.vector[0].re / rx.vector[0].re;
        assert!((ratio - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn noise_only_covariance() {
        // sample covariance of w over 10⁵ draws is N0 I₄ within 2%
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n0 = 3.0;
        let phases = TagPhases::new(0.3, 1.1);
        let n = 100_000;
        let mut power = [0.0f64; 4];
        let mut cross = Complex64::new(0.0, 0.0);
        for _ in 0..n {
            let rx = synthesize_rx(
                0,
                &phases,
                1.0,
                0.0,
                0.0,
                EnergyScaling::Multistatic,
                n0,
                0,
                0,
                &mut rng,
            );
            for (p, v) in power.iter_mut().zip(rx.vector.iter()) {
                *p += v.norm_sqr();
            }
            cross += rx.vector[0] * rx.vector[1].conj();
        }
        for p in power {
            let avg = p / n as f64;
            assert!((avg / n0 - 1.0).abs() < 0.02, "component power {avg}");
        }
        assert!((cross / n as f64).norm() < 0.02 * n0, "off-diagonal {cross}");
    }
}
