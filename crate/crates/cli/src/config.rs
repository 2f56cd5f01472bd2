//! TOML experiment configs and their resolution to SI scenario specs.
//!
//! Raw configs keep unit-suffixed strings; `Resolved*` structures carry SI
//! values only. Every preset pins the noise/tag constants and the scenario
//! parameters of the figure it reproduces.

use serde::{Deserialize, Serialize};

use scattersim_core::simkernel::{
    Architecture, FadingLaw, PleLaw, ScenarioSpec, Sweep, SystemParams,
};
use scattersim_core::topology::{Grid, Point};

use crate::units::{parse_quantity, Unit};
use crate::AppError;

pub const PRESETS: &[(&str, &str)] = &[
    ("fig4", include_str!("../presets/fig4.toml")),
    ("fig5", include_str!("../presets/fig5.toml")),
    ("fig6", include_str!("../presets/fig6.toml")),
    ("fig9", include_str!("../presets/fig9.toml")),
    ("fig10", include_str!("../presets/fig10.toml")),
    ("diversity", include_str!("../presets/diversity.toml")),
];

pub fn preset_toml(name: &str) -> Result<&'static str, AppError> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| {
            let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
            AppError::config(format!(
                "unknown preset `{name}`; available: {}",
                names.join(", ")
            ))
        })
}

// ---------------------------------------------------------------------------
// raw (deserialized) layer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub run: RawRun,
    pub system: RawSystem,
    pub subcarrier: Option<RawSubcarrier>,
    pub scenario: RawScenario,
    pub grid: Option<RawGrid>,
    pub sweep: Option<RawSweep>,
    pub outage: Option<RawOutage>,
    pub energy: Option<RawEnergy>,
    pub diversity: Option<RawDiversity>,
    pub place: Option<RawPlace>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRun {
    pub command: String,
    pub label: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSystem {
    pub noise_density: String,
    pub carrier_frequency: String,
    pub bit_duration: String,
    pub reflection_gap: f64,
    pub scattering_efficiency: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSubcarrier {
    pub base: String,
    pub spacing: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScenario {
    pub architectures: Vec<Architecture>,
    pub slots: usize,
    pub n_tags: usize,
    pub seed: u64,
    pub trials: usize,
    #[serde(default)]
    pub topologies: usize,
    #[serde(default)]
    pub draws_per_topology: usize,
    pub tx_power: Option<String>,
    pub fading: FadingLaw,
    pub path_loss_exponent: PleLaw,
    pub min_tag_distance: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrid {
    pub side: String,
    pub resolution: String,
    pub reader: Option<Point>,
    pub emitters: Option<Vec<Point>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSweep {
    pub kind: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOutage {
    pub theta_db: RawRange,
    pub fading_laws: Vec<FadingLaw>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEnergy {
    pub theta_h_dbm: RawRange,
    #[serde(default)]
    pub emit_mc: bool,
    #[serde(default = "default_mc_draws")]
    pub mc_draws: usize,
}

fn default_mc_draws() -> usize {
    100_000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDiversity {
    pub window_db: [f64; 2],
    #[serde(default = "default_fit_points")]
    pub points: usize,
}

fn default_fit_points() -> usize {
    21
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPlace {
    pub t_max: usize,
    #[serde(default)]
    pub exhaustive: bool,
    pub tag_rounds: usize,
    pub metric: RawPlaceMetric,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RawPlaceMetric {
    AvgEnergyOutage { theta_h: String },
    AvgInfoOutageBound { theta_db: f64 },
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl RawRange {
    pub fn expand(&self, field: &str) -> Result<Vec<f64>, AppError> {
        if !(self.step > 0.0) || self.stop < self.start {
            return Err(AppError::config(format!(
                "field `{field}`: range needs step > 0 and stop >= start"
            )));
        }
        let n = ((self.stop - self.start) / self.step).round() as usize + 1;
        Ok((0..n).map(|i| self.start + i as f64 * self.step).collect())
    }
}

// ---------------------------------------------------------------------------
// resolved (SI) layer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub command: String,
    pub label: String,
    pub architectures: Vec<Architecture>,
    pub system: SystemParams,
    pub slots: usize,
    pub n_tags: usize,
    pub seed: u64,
    pub trials: usize,
    pub topologies: usize,
    pub draws_per_topology: usize,
    pub tx_power_dbm: f64,
    pub fading: FadingLaw,
    pub ple: PleLaw,
    pub min_tag_distance: f64,
    pub grid: Option<Grid>,
    pub reader_override: Option<Point>,
    pub emitter_override: Option<Vec<Point>>,
    pub sweep: Option<Sweep>,
    pub outage: Option<ResolvedOutage>,
    pub energy: Option<ResolvedEnergy>,
    pub diversity: Option<ResolvedDiversity>,
    pub place: Option<ResolvedPlace>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedOutage {
    pub theta_db: Vec<f64>,
    pub fading_laws: Vec<FadingLaw>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedEnergy {
    pub theta_h_dbm: Vec<f64>,
    pub emit_mc: bool,
    pub mc_draws: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedDiversity {
    pub window_db: [f64; 2],
    pub points: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedPlace {
    pub t_max: usize,
    pub exhaustive: bool,
    pub tag_rounds: usize,
    pub metric_label: String,
    pub metric_theta_h_w: Option<f64>,
    pub metric_theta_db: Option<f64>,
}

pub fn parse_toml(text: &str) -> Result<RawConfig, AppError> {
    toml::from_str(text).map_err(|e| AppError::config(format!("config parse error: {e}")))
}

pub fn resolve(raw: &RawConfig) -> Result<ResolvedConfig, AppError> {
    let noise_density = parse_quantity(
        &raw.system.noise_density,
        Unit::PowerDensity,
        "system.noise_density",
    )?;
    let carrier = parse_quantity(
        &raw.system.carrier_frequency,
        Unit::Frequency,
        "system.carrier_frequency",
    )?;
    if !(carrier > 0.0) {
        return Err(AppError::config("system.carrier_frequency must be positive"));
    }
    let bit_duration = parse_quantity(&raw.system.bit_duration, Unit::Time, "system.bit_duration")?;
    let (subcarrier_base, subcarrier_spacing) = match &raw.subcarrier {
        Some(s) => (
            parse_quantity(&s.base, Unit::Frequency, "subcarrier.base")?,
            parse_quantity(&s.spacing, Unit::Frequency, "subcarrier.spacing")?,
        ),
        None => (0.1e6, 0.01e6),
    };
    let system = SystemParams {
        noise_density,
        bit_duration,
        wavelength: 3e8 / carrier,
        reflection_gap: raw.system.reflection_gap,
        scattering_efficiency: raw.system.scattering_efficiency,
        subcarrier_base,
        subcarrier_spacing,
    };

    let tx_power_dbm = match &raw.scenario.tx_power {
        Some(p) => {
            let watts = parse_quantity(p, Unit::Power, "scenario.tx_power")?;
            10.0 * watts.log10() + 30.0
        }
        None => 0.0,
    };
    let min_tag_distance = match &raw.scenario.min_tag_distance {
        Some(d) => parse_quantity(d, Unit::Length, "scenario.min_tag_distance")?,
        None => 1.0,
    };

    let grid = match &raw.grid {
        Some(g) => Some(
            Grid::new(
                parse_quantity(&g.side, Unit::Length, "grid.side")?,
                parse_quantity(&g.resolution, Unit::Length, "grid.resolution")?,
            )
            .map_err(AppError::from_core_config)?,
        ),
        None => None,
    };

    let sweep = match &raw.sweep {
        Some(s) => {
            let values = RawRange {
                start: s.start,
                stop: s.stop,
                step: s.step,
            }
            .expand("sweep")?;
            Some(match s.kind.as_str() {
                "snr_db" => Sweep::SnrDb(values),
                "power_dbm" => Sweep::PowerDbm(values),
                other => {
                    return Err(AppError::config(format!(
                        "sweep.kind must be `snr_db` or `power_dbm`, got `{other}`"
                    )))
                }
            })
        }
        None => None,
    };

    if raw.scenario.architectures.is_empty() {
        return Err(AppError::config("scenario.architectures must not be empty"));
    }

    let outage = match &raw.outage {
        Some(o) => {
            if o.fading_laws.is_empty() {
                return Err(AppError::config("outage.fading_laws must not be empty"));
            }
            Some(ResolvedOutage {
                theta_db: o.theta_db.expand("outage.theta_db")?,
                fading_laws: o.fading_laws.clone(),
            })
        }
        None => None,
    };
    let energy = match &raw.energy {
        Some(e) => Some(ResolvedEnergy {
            theta_h_dbm: e.theta_h_dbm.expand("energy.theta_h_dbm")?,
            emit_mc: e.emit_mc,
            mc_draws: e.mc_draws,
        }),
        None => None,
    };
    let diversity = raw.diversity.as_ref().map(|d| ResolvedDiversity {
        window_db: d.window_db,
        points: d.points,
    });
    let place = match &raw.place {
        Some(p) => Some(match &p.metric {
            RawPlaceMetric::AvgEnergyOutage { theta_h } => ResolvedPlace {
                t_max: p.t_max,
                exhaustive: p.exhaustive,
                tag_rounds: p.tag_rounds,
                metric_label: "avg_energy_outage".to_string(),
                metric_theta_h_w: Some(parse_quantity(
                    theta_h,
                    Unit::Power,
                    "place.metric.theta_h",
                )?),
                metric_theta_db: None,
            },
            RawPlaceMetric::AvgInfoOutageBound { theta_db } => ResolvedPlace {
                t_max: p.t_max,
                exhaustive: p.exhaustive,
                tag_rounds: p.tag_rounds,
                metric_label: "avg_info_outage_bound".to_string(),
                metric_theta_h_w: None,
                metric_theta_db: Some(*theta_db),
            },
        }),
        None => None,
    };

    Ok(ResolvedConfig {
        command: raw.run.command.clone(),
        label: raw.run.label.clone(),
        architectures: raw.scenario.architectures.clone(),
        system,
        slots: raw.scenario.slots,
        n_tags: raw.scenario.n_tags,
        seed: raw.scenario.seed,
        trials: raw.scenario.trials,
        topologies: raw.scenario.topologies,
        draws_per_topology: raw.scenario.draws_per_topology,
        tx_power_dbm,
        fading: raw.scenario.fading,
        ple: raw.scenario.path_loss_exponent,
        min_tag_distance,
        grid,
        reader_override: raw.grid.as_ref().and_then(|g| g.reader),
        emitter_override: raw.grid.as_ref().and_then(|g| g.emitters.clone()),
        sweep,
        outage,
        energy,
        diversity,
        place,
    })
}

impl ResolvedConfig {
    /// Scenario spec for one architecture, honoring the fair-comparison
    /// contract (same powers, noise, timing, and tag constants everywhere).
    pub fn scenario(&self, architecture: Architecture) -> ScenarioSpec {
        let anchors = match (&self.reader_override, &self.emitter_override) {
            (None, None) => None,
            (reader, emitters) => {
                let reader = reader.unwrap_or_else(|| {
                    let m = self.grid.map(|g| g.side).unwrap_or(0.0);
                    [m / 2.0, m / 2.0]
                });
                // a monostatic network has no emitters regardless of overrides
                let emitters = match architecture {
                    Architecture::Monostatic => Vec::new(),
                    Architecture::Multistatic => emitters.clone().unwrap_or_default(),
                };
                Some((reader, emitters))
            }
        };
        ScenarioSpec {
            architecture,
            slots: self.slots,
            n_tags: self.n_tags,
            grid: self.grid,
            anchors,
            min_tag_distance: self.min_tag_distance,
            fading: self.fading,
            ple: self.ple,
            sweep: self.sweep.clone().unwrap_or(Sweep::PowerDbm(vec![self.tx_power_dbm])),
            tx_power_dbm: self.tx_power_dbm,
            trials: self.trials,
            topologies: self.topologies,
            draws_per_topology: self.draws_per_topology,
            seed: self.seed,
            system: self.system,
        }
    }
}
