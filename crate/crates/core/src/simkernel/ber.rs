//! Link-level BER Monte Carlo.
//!
//! Each sweep point simulates independent bits through fading, synthesis,
//! and both detectors, in shards of a fixed size so the error counts merge
//! identically for any thread count. Analytic companion columns carry the
//! closed forms (exact where one exists, the Chernoff bound otherwise).

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stream::{derive_rng, domain};
use super::{Architecture, EstimateWithCI, ScenarioSpec, Sweep};
use crate::analytic::{ber_bound_monostatic, ber_bound_multistatic, ber_exact_rayleigh_monostatic};
use crate::channel::{path_loss_extrapolated, sample_link_power, sample_phase, PathLossParams};
use crate::detect::{detect_coherent, detect_noncoherent};
use crate::signal::{
    energy_per_bit_monostatic, energy_per_bit_multistatic, synthesize_rx, EnergyScaling, TagPhases,
};
use crate::topology::{admissible_points, canonical_anchors, distance, Layout, Point};
use crate::{Error, Result};

const SHARD_BITS: usize = 8192;
const ANALYTIC_DRAWS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Detector {
    Coherent,
    Noncoherent,
}

impl Detector {
    pub fn label(&self) -> &'static str {
        match self {
            Detector::Coherent => "coherent",
            Detector::Noncoherent => "noncoherent",
        }
    }
}

/// Whether the analytic column is the exact BER or an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnalyticKind {
    Exact,
    Bound,
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint {
    pub sweep_value: f64,
    pub architecture: Architecture,
    pub detector: Detector,
    pub estimate: EstimateWithCI,
    pub analytic: Option<f64>,
    pub analytic_kind: AnalyticKind,
}

/// One trial's sampled link state: fading parameters and receive energy.
struct TrialState {
    m_ce_tag: f64,
    m_tag_reader: f64,
    energy: f64,
}

/// Context shared by all trials of one sweep point.
struct PointContext<'a> {
    spec: &'a ScenarioSpec,
    /// Fixed receive SNR (linear) for SNR sweeps; `None` for power sweeps.
    fixed_snr: Option<f64>,
    /// Transmit power [W] for power sweeps.
    tx_power: f64,
    /// Candidate tag positions and anchors for power sweeps.
    placement: Option<(Point, Vec<Point>, Vec<Point>)>,
}

impl PointContext<'_> {
    fn sample_trial<R: Rng + ?Sized>(&self, rng: &mut R) -> TrialState {
        let spec = self.spec;
        let m_ce_tag = spec.fading.sample_m_ce(rng);
        let m_tag_reader = spec.fading.sample_m(rng);
        let energy = match self.fixed_snr {
            Some(snr) => snr * spec.system.noise_density,
            None => {
                let (reader, emitters, candidates) =
                    self.placement.as_ref().expect("power sweep has placement");
                let tag = candidates[rng.random_range(0..candidates.len())];
                let config = spec
                    .system
                    .config(1, spec.n_emitters(), self.tx_power)
                    .expect("validated system");
                let ple_tr = PathLossParams::new(spec.system.wavelength, spec.ple.sample(rng))
                    .expect("validated ple");
                let gain_tr =
                    path_loss_extrapolated(distance(tag, *reader), &ple_tr).expect("d > 0");
                match spec.architecture {
                    Architecture::Monostatic => energy_per_bit_monostatic(
                        &config,
                        gain_tr,
                        super::nakagami(m_tag_reader),
                        0,
                    )
                    .expect("positive gain"),
                    Architecture::Multistatic => {
                        let ple_ct =
                            PathLossParams::new(spec.system.wavelength, spec.ple.sample(rng))
                                .expect("validated ple");
                        let gain_ct =
                            path_loss_extrapolated(distance(tag, emitters[0]), &ple_ct)
                                .expect("d > 0");
                        energy_per_bit_multistatic(&config, gain_ct, gain_tr, 0, 0)
                            .expect("positive gains")
                    }
                }
            }
        };
        TrialState {
            m_ce_tag,
            m_tag_reader,
            energy,
        }
    }
}

/// Closed-form BER of one (state, detector) pair.
fn analytic_value(
    arch: Architecture,
    detector: Detector,
    state: &TrialState,
    snr: f64,
) -> Result<(f64, AnalyticKind)> {
    match (arch, detector) {
        (Architecture::Monostatic, Detector::Noncoherent) => {
            Ok((ber_bound_monostatic(state.m_tag_reader, snr)?, AnalyticKind::Exact))
        }
        (Architecture::Multistatic, Detector::Noncoherent) => Ok((
            ber_bound_multistatic(state.m_ce_tag, state.m_tag_reader, snr)?,
            AnalyticKind::Exact,
        )),
        (Architecture::Monostatic, Detector::Coherent) => {
            if (state.m_tag_reader - 1.0).abs() < 1e-12 {
                Ok((ber_exact_rayleigh_monostatic(snr)?, AnalyticKind::Exact))
            } else {
                Ok((ber_bound_monostatic(state.m_tag_reader, snr)?, AnalyticKind::Bound))
            }
        }
        (Architecture::Multistatic, Detector::Coherent) => Ok((
            ber_bound_multistatic(state.m_ce_tag, state.m_tag_reader, snr)?,
            AnalyticKind::Bound,
        )),
    }
}

/// Monte-Carlo BER over the spec's sweep for its architecture. Returns two
/// rows (coherent, noncoherent) per sweep point.
pub fn run_ber(spec: &ScenarioSpec) -> Result<Vec<BerPoint>> {
    spec.validate()?;
    let n0 = spec.system.noise_density;
    let placement = match spec.sweep {
        Sweep::PowerDbm(_) => Some(build_placement(spec)?),
        Sweep::SnrDb(_) => None,
    };
    let mut out = Vec::new();
    for (p_idx, &sweep_value) in spec.sweep.values().iter().enumerate() {
        let ctx = PointContext {
            spec,
            fixed_snr: match spec.sweep {
                Sweep::SnrDb(_) => Some(super::db_to_linear(sweep_value)),
                Sweep::PowerDbm(_) => None,
            },
            tx_power: super::dbm_to_watts(sweep_value),
            placement: placement.clone(),
        };
        // noise disabled for a non-finite SNR point: both detectors are exact
        let noise_density = match ctx.fixed_snr {
            Some(snr) if !snr.is_finite() => 0.0,
            _ => n0,
        };
        let n_shards = spec.trials.div_ceil(SHARD_BITS);
        let shard_counts: Vec<(u64, u64, u64)> = (0..n_shards)
            .into_par_iter()
            .map(|shard| {
                let mut rng = derive_rng(
                    spec.seed,
                    &[
                        domain::BER,
                        spec.architecture.code(),
                        p_idx as u64,
                        shard as u64,
                    ],
                );
                let bits = SHARD_BITS.min(spec.trials - shard * SHARD_BITS);
                let mut err_coh = 0u64;
                let mut err_env = 0u64;
                for _ in 0..bits {
                    let state = ctx.sample_trial(&mut rng);
                    let energy = if noise_density == 0.0 {
                        1.0
                    } else {
                        state.energy
                    };
                    let amp = match spec.architecture {
                        Architecture::Monostatic => {
                            sample_link_power(super::nakagami(state.m_tag_reader), &mut rng)
                        }
                        Architecture::Multistatic => {
                            let y_ct =
                                sample_link_power(super::nakagami(state.m_ce_tag), &mut rng);
                            let y_tr =
                                sample_link_power(super::nakagami(state.m_tag_reader), &mut rng);
                            (y_ct * y_tr).sqrt()
                        }
                    };
                    let scaling = match spec.architecture {
                        Architecture::Monostatic => {
                            EnergyScaling::Monostatic(super::nakagami(state.m_tag_reader))
                        }
                        Architecture::Multistatic => EnergyScaling::Multistatic,
                    };
                    let phases = TagPhases::sample(&mut rng);
                    let phase = sample_phase(&mut rng);
                    let bit = u8::from(rng.random::<bool>());
                    let rx = synthesize_rx(
                        bit,
                        &phases,
                        amp,
                        phase,
                        energy,
                        scaling,
                        noise_density,
                        0,
                        0,
                        &mut rng,
                    );
                    let h = Complex64::from_polar(amp, -phase);
                    let eff = scaling.effective_energy(energy);
                    err_coh += u64::from(detect_coherent(&rx, h, eff, &phases) != bit);
                    err_env += u64::from(detect_noncoherent(&rx, &phases) != bit);
                }
                (err_coh, err_env, bits as u64)
            })
            .collect();
        let (mut err_coh, mut err_env, mut total) = (0u64, 0u64, 0u64);
        for (c, e, n) in shard_counts {
            err_coh += c;
            err_env += e;
            total += n;
        }

        let analytic = point_analytic(spec, &ctx, p_idx)?;
        for (detector, errors, (value, kind)) in [
            (Detector::Coherent, err_coh, analytic.0),
            (Detector::Noncoherent, err_env, analytic.1),
        ] {
            out.push(BerPoint {
                sweep_value,
                architecture: spec.architecture,
                detector,
                estimate: EstimateWithCI::from_binomial(errors, total, spec.seed),
                analytic: value,
                analytic_kind: kind,
            });
        }
    }
    Ok(out)
}

type AnalyticPair = ((Option<f64>, AnalyticKind), (Option<f64>, AnalyticKind));

/// Analytic companion values for one sweep point: a direct closed form when
/// the channel law is deterministic and the SNR is pinned; otherwise an
/// ensemble average of the closed form over a dedicated deterministic stream.
fn point_analytic(spec: &ScenarioSpec, ctx: &PointContext, p_idx: usize) -> Result<AnalyticPair> {
    if let (Some(snr), Some((m_ce, m_tr))) = (ctx.fixed_snr, spec.fading.fixed_pair()) {
        if !snr.is_finite() {
            return Ok(((None, AnalyticKind::None), (None, AnalyticKind::None)));
        }
        let state = TrialState {
            m_ce_tag: m_ce,
            m_tag_reader: m_tr,
            energy: 0.0,
        };
        let coh = analytic_value(spec.architecture, Detector::Coherent, &state, snr)?;
        let env = analytic_value(spec.architecture, Detector::Noncoherent, &state, snr)?;
        return Ok(((Some(coh.0), coh.1), (Some(env.0), env.1)));
    }
    let mut rng = derive_rng(
        spec.seed,
        &[domain::BER_ANALYTIC, spec.architecture.code(), p_idx as u64],
    );
    let draws = ANALYTIC_DRAWS.min(spec.trials.max(1));
    let mut sum_coh = 0.0;
    let mut sum_env = 0.0;
    let mut kind_coh = AnalyticKind::Exact;
    for _ in 0..draws {
        let state = ctx.sample_trial(&mut rng);
        let snr = match ctx.fixed_snr {
            Some(s) => s,
            None => state.energy / spec.system.noise_density,
        };
        let coh = analytic_value(spec.architecture, Detector::Coherent, &state, snr)?;
        let env = analytic_value(spec.architecture, Detector::Noncoherent, &state, snr)?;
        if coh.1 == AnalyticKind::Bound {
            kind_coh = AnalyticKind::Bound;
        }
        sum_coh += coh.0;
        sum_env += env.0;
    }
    Ok((
        (Some(sum_coh / draws as f64), kind_coh),
        (Some(sum_env / draws as f64), AnalyticKind::Exact),
    ))
}

fn build_placement(spec: &ScenarioSpec) -> Result<(Point, Vec<Point>, Vec<Point>)> {
    let grid = spec
        .grid
        .as_ref()
        .ok_or_else(|| Error::config("power sweep requires a grid"))?;
    let (reader, emitters) = match &spec.anchors {
        Some((r, e)) => (*r, e.clone()),
        None => {
            let layout = match spec.architecture {
                Architecture::Monostatic => Layout::Monostatic,
                Architecture::Multistatic => Layout::Multistatic {
                    emitters: spec.n_emitters(),
                },
            };
            canonical_anchors(grid, layout)?
        }
    };
    let candidates = admissible_points(grid, reader, &emitters, spec.min_tag_distance);
    if candidates.is_empty() {
        return Err(Error::config(
            "no admissible tag positions for the BER power sweep",
        ));
    }
    if spec.architecture == Architecture::Multistatic && emitters.is_empty() {
        return Err(Error::config("multistatic power sweep needs an emitter"));
    }
    Ok((reader, emitters, candidates))
}
