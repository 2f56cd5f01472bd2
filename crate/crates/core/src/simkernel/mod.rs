//! Seeded Monte-Carlo engine: BER curves, information and energy outage over
//! random grid topologies, and carrier-emitter placement search.
//!
//! Work is partitioned into deterministic units (shards of bits, individual
//! topologies, placement candidates), each owning a random stream derived
//! from `(seed, unit tags)`; partial results are merged in unit order, so
//! outputs are bit-identical for any worker-thread count.

mod ber;
mod energy;
mod placement;
mod outage;
pub mod stream;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::NakagamiM;
use crate::signal::SystemConfig;
use crate::topology::{Grid, Point};
use crate::{Error, Result};

pub use ber::{run_ber, AnalyticKind, BerPoint, Detector};
pub use energy::{run_energy_outage, EnergyMode, EnergyOutagePoint};
pub use outage::{
    per_slot_outage_monostatic_mc, per_slot_outage_multistatic_mc, run_info_outage,
    InfoOutagePoint,
};
pub use placement::{run_placement_search, PlacementMetric, PlacementSearch, RankedPlacement};

/// Which backscatter architecture a run simulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Architecture {
    Monostatic,
    Multistatic,
}

impl Architecture {
    pub fn label(&self) -> &'static str {
        match self {
            Architecture::Monostatic => "monostatic",
            Architecture::Multistatic => "multistatic",
        }
    }

    fn code(&self) -> u64 {
        match self {
            Architecture::Monostatic => 0,
            Architecture::Multistatic => 1,
        }
    }
}

/// BER sweeps run either directly over receive SNR (single-link studies) or
/// over transmit power with random tag placement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sweep {
    SnrDb(Vec<f64>),
    PowerDbm(Vec<f64>),
}

impl Sweep {
    pub fn values(&self) -> &[f64] {
        match self {
            Sweep::SnrDb(v) | Sweep::PowerDbm(v) => v,
        }
    }
}

/// How per-link Nakagami parameters are generated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FadingLaw {
    /// m = 1 on every link.
    Rayleigh,
    /// Fixed (m_ce_tag, m_tag_reader).
    Fixed { ce_tag: f64, tag_reader: f64 },
    /// κ ~ U[lo, hi) per link, mapped through m = (κ+1)²/(2κ+1).
    RicianKappaUniform { lo: f64, hi: f64 },
    /// m ~ U[lo, hi) per link.
    NakagamiUniform { lo: f64, hi: f64 },
}

impl FadingLaw {
    pub fn label(&self) -> &'static str {
        match self {
            FadingLaw::Rayleigh => "rayleigh",
            FadingLaw::Fixed { .. } => "nakagami-fixed",
            FadingLaw::RicianKappaUniform { .. } => "rician-uniform",
            FadingLaw::NakagamiUniform { .. } => "nakagami-uniform",
        }
    }

    /// The (m_ce_tag, m_tag_reader) pair when the law is deterministic.
    pub fn fixed_pair(&self) -> Option<(f64, f64)> {
        match *self {
            FadingLaw::Rayleigh => Some((1.0, 1.0)),
            FadingLaw::Fixed { ce_tag, tag_reader } => Some((ce_tag, tag_reader)),
            _ => None,
        }
    }

    /// Draw one link's m parameter.
    pub fn sample_m<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            FadingLaw::Rayleigh => 1.0,
            FadingLaw::Fixed { tag_reader, .. } => tag_reader,
            FadingLaw::RicianKappaUniform { lo, hi } => {
                let kappa = rng.random_range(lo..hi);
                (kappa + 1.0) * (kappa + 1.0) / (2.0 * kappa + 1.0)
            }
            FadingLaw::NakagamiUniform { lo, hi } => rng.random_range(lo..hi),
        }
    }

    /// Draw the m parameter of a CE→tag link (differs from `sample_m` only
    /// for the fixed law, which carries separate values per hop).
    pub fn sample_m_ce<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            FadingLaw::Fixed { ce_tag, .. } => ce_tag,
            _ => self.sample_m(rng),
        }
    }

    fn validate(&self) -> Result<()> {
        let check = |lo: f64, hi: f64, min: f64| -> Result<()> {
            if !(lo >= min) || !(hi > lo) {
                return Err(Error::config(format!(
                    "fading law bounds [{lo}, {hi}) invalid (minimum {min})"
                )));
            }
            Ok(())
        };
        match *self {
            FadingLaw::Rayleigh => Ok(()),
            FadingLaw::Fixed { ce_tag, tag_reader } => {
                if ce_tag >= 0.5 && tag_reader >= 0.5 {
                    Ok(())
                } else {
                    Err(Error::config("fixed fading m must be >= 0.5"))
                }
            }
            FadingLaw::RicianKappaUniform { lo, hi } => check(lo, hi, 0.0),
            FadingLaw::NakagamiUniform { lo, hi } => check(lo, hi, 0.5),
        }
    }
}

/// Per-link path-loss exponent law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PleLaw {
    Fixed(f64),
    Uniform { lo: f64, hi: f64 },
}

impl PleLaw {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            PleLaw::Fixed(v) => v,
            PleLaw::Uniform { lo, hi } => rng.random_range(lo..hi),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            PleLaw::Fixed(v) if v > 0.0 => Ok(()),
            PleLaw::Uniform { lo, hi } if lo > 0.0 && hi > lo => Ok(()),
            _ => Err(Error::config("path-loss exponent law must be positive")),
        }
    }
}

/// Noise, timing, tag, and subcarrier constants of a scenario (SI units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub noise_density: f64,
    pub bit_duration: f64,
    pub wavelength: f64,
    pub reflection_gap: f64,
    pub scattering_efficiency: f64,
    pub subcarrier_base: f64,
    pub subcarrier_spacing: f64,
}

impl SystemParams {
    /// Expand into a full [`SystemConfig`] with a single transmit power used
    /// for both the reader and every CE (the fair-comparison contract).
    pub fn config(&self, n_tags: usize, n_emitters: usize, tx_power: f64) -> Result<SystemConfig> {
        SystemConfig::uniform_tags(
            n_tags,
            self.noise_density,
            self.bit_duration,
            vec![tx_power; n_emitters.max(1)],
            tx_power,
            self.reflection_gap,
            self.scattering_efficiency,
            self.wavelength,
        )
    }
}

/// Full description of one Monte-Carlo experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub architecture: Architecture,
    /// Diversity slots L. Multistatic runs activate CE l in slot l, so this
    /// is also the emitter count.
    pub slots: usize,
    pub n_tags: usize,
    /// Grid for runs with random placement; `None` for fixed-SNR BER sweeps.
    pub grid: Option<Grid>,
    /// Override of the canonical (reader, emitters) anchor positions.
    pub anchors: Option<(Point, Vec<Point>)>,
    /// Tags closer than this to an anchor are rejected at sampling time
    /// (0 disables the rule and permits sub-reference-distance gains).
    pub min_tag_distance: f64,
    pub fading: FadingLaw,
    pub ple: PleLaw,
    pub sweep: Sweep,
    /// Transmit power for outage/energy runs [dBm].
    pub tx_power_dbm: f64,
    /// Bits per sweep point (BER) or draws per tag (energy Monte Carlo).
    pub trials: usize,
    /// Sampled topologies for outage/energy runs.
    pub topologies: usize,
    /// Fading/assignment draws per topology (information outage).
    pub draws_per_topology: usize,
    pub seed: u64,
    pub system: SystemParams,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::config("trials must be at least 1"));
        }
        if self.slots < 1 {
            return Err(Error::config("at least one slot is required"));
        }
        if self.sweep.values().is_empty() {
            return Err(Error::config("sweep must contain at least one point"));
        }
        self.fading.validate()?;
        self.ple.validate()?;
        if matches!(self.sweep, Sweep::PowerDbm(_)) && self.grid.is_none() && self.anchors.is_none()
        {
            return Err(Error::config(
                "power sweeps need a grid (tag positions are random)",
            ));
        }
        Ok(())
    }

    pub(crate) fn n_emitters(&self) -> usize {
        match self.architecture {
            Architecture::Monostatic => 0,
            Architecture::Multistatic => self.slots,
        }
    }

    pub fn tx_power_watts(&self) -> f64 {
        dbm_to_watts(self.tx_power_dbm)
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// A Monte-Carlo estimate with its 95% binomial confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateWithCI {
    pub mean: f64,
    pub half_width_95: f64,
    pub n_trials: u64,
    pub seed: u64,
}

impl EstimateWithCI {
    pub fn from_binomial(successes: u64, trials: u64, seed: u64) -> Self {
        let p = successes as f64 / trials as f64;
        let half = 1.96 * (p * (1.0 - p) / trials as f64).sqrt();
        EstimateWithCI {
            mean: p,
            half_width_95: half,
            n_trials: trials,
            seed,
        }
    }

    pub fn covers(&self, p: f64) -> bool {
        (self.mean - p).abs() <= self.half_width_95
    }
}

/// Expand the fading law into one [`FadingParams`] per tag: a tag→reader
/// parameter plus one CE→tag parameter per emitter.
pub(crate) fn sample_link_fading<R: Rng + ?Sized>(
    law: &FadingLaw,
    n_tags: usize,
    n_emitters: usize,
    rng: &mut R,
) -> Vec<crate::channel::FadingParams> {
    (0..n_tags)
        .map(|_| {
            let tag_reader = law.sample_m(rng);
            let ce_tag: Vec<f64> = (0..n_emitters).map(|_| law.sample_m_ce(rng)).collect();
            crate::channel::FadingParams::new(tag_reader, &ce_tag)
                .expect("fading laws only produce m >= 0.5")
        })
        .collect()
}

pub(crate) fn nakagami(m: f64) -> NakagamiM {
    NakagamiM::new(m).expect("fading laws only produce m >= 0.5")
}
