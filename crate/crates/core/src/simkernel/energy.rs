//! Energy-outage curves for passive tags over random grid topologies.
//!
//! The closed forms (regularized incomplete gamma products) are evaluated
//! per sampled topology and averaged; an optional pure Monte-Carlo mode
//! samples the Gamma-distributed harvested input powers instead and serves
//! as the independent oracle for the closed forms.

use rand::Rng;
use rayon::prelude::*;

use super::outage::sample_network;
use super::stream::{derive_rng, domain};
use super::{Architecture, ScenarioSpec};
use crate::analytic::{energy_outage_aggregates, energy_outage_monostatic, energy_outage_multistatic};
use crate::channel::sample_link_power;
use crate::{Error, Result};

/// Closed-form evaluation or Gamma-sampling Monte Carlo.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyMode {
    Analytic,
    MonteCarlo { draws: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyOutagePoint {
    pub theta_h_dbm: f64,
    pub architecture: Architecture,
    /// Topology-averaged mean outage across tags.
    pub avg: f64,
    /// Topology-averaged worst-case (max across tags) outage.
    pub max: f64,
}

struct TopologyCurves {
    avg: Vec<f64>,
    max: Vec<f64>,
}

fn analytic_curves(
    spec: &ScenarioSpec,
    net: &super::outage::SampledNetwork,
    thetas_w: &[f64],
) -> Result<TopologyCurves> {
    let power = spec.tx_power_watts();
    let mut avg = Vec::with_capacity(thetas_w.len());
    let mut max = Vec::with_capacity(thetas_w.len());
    for &theta in thetas_w {
        let per_tag: Vec<f64> = (0..spec.n_tags)
            .map(|tag| match spec.architecture {
                Architecture::Monostatic => energy_outage_monostatic(
                    theta,
                    power,
                    net.gains_tag_reader[tag],
                    net.fading[tag].tag_reader,
                    spec.slots,
                ),
                Architecture::Multistatic => {
                    let per_ce: Vec<(f64, f64, crate::channel::NakagamiM)> = (0..spec.slots)
                        .map(|slot| {
                            (
                                power,
                                net.gains_ce_tag[slot][tag],
                                net.fading[tag].ce_tag[slot],
                            )
                        })
                        .collect();
                    energy_outage_multistatic(theta, &per_ce)
                }
            })
            .collect::<Result<_>>()?;
        let (a, m) = energy_outage_aggregates(&per_tag)?;
        avg.push(a);
        max.push(m);
    }
    Ok(TopologyCurves { avg, max })
}

fn mc_curves<R: Rng + ?Sized>(
    spec: &ScenarioSpec,
    net: &super::outage::SampledNetwork,
    thetas_w: &[f64],
    draws: usize,
    rng: &mut R,
) -> Result<TopologyCurves> {
    let power = spec.tx_power_watts();
    let n_thetas = thetas_w.len();
    // per-tag empirical outage via the max-over-slots trick
    let mut per_tag = vec![vec![0.0f64; n_thetas]; spec.n_tags];
    for (tag, tag_curve) in per_tag.iter_mut().enumerate() {
        let mut diff = vec![0u64; n_thetas + 1];
        for _ in 0..draws {
            let mut strongest: f64 = f64::NEG_INFINITY;
            for slot in 0..spec.slots {
                let p_h = match spec.architecture {
                    Architecture::Monostatic => {
                        let y = sample_link_power(net.fading[tag].tag_reader, rng);
                        power * net.gains_tag_reader[tag] * y
                    }
                    Architecture::Multistatic => {
                        let y = sample_link_power(net.fading[tag].ce_tag[slot], rng);
                        power * net.gains_ce_tag[slot][tag] * y
                    }
                };
                strongest = strongest.max(p_h);
            }
            let idx = thetas_w.partition_point(|&t| t < strongest);
            diff[idx] += 1;
        }
        let mut running = 0u64;
        for (idx, curve) in tag_curve.iter_mut().enumerate() {
            running += diff[idx];
            *curve = running as f64 / draws as f64;
        }
    }
    let mut avg = Vec::with_capacity(n_thetas);
    let mut max = Vec::with_capacity(n_thetas);
    for t in 0..n_thetas {
        let column: Vec<f64> = per_tag.iter().map(|tag| tag[t]).collect();
        let (a, m) = energy_outage_aggregates(&column)?;
        avg.push(a);
        max.push(m);
    }
    Ok(TopologyCurves { avg, max })
}

/// Topology-averaged average and maximum energy outage versus the θ_h grid
/// (dBm, ascending).
pub fn run_energy_outage(
    spec: &ScenarioSpec,
    theta_h_dbm_grid: &[f64],
    mode: EnergyMode,
) -> Result<Vec<EnergyOutagePoint>> {
    spec.validate()?;
    if theta_h_dbm_grid.is_empty() {
        return Err(Error::config("theta_h grid must not be empty"));
    }
    if theta_h_dbm_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config("theta_h grid must be strictly increasing"));
    }
    if spec.topologies < 1 {
        return Err(Error::config("at least one topology is required"));
    }
    let thetas_w: Vec<f64> = theta_h_dbm_grid
        .iter()
        .map(|&dbm| super::dbm_to_watts(dbm))
        .collect();
    let config = spec
        .system
        .config(spec.n_tags, spec.n_emitters(), spec.tx_power_watts())?;

    let curves: Vec<Result<TopologyCurves>> = (0..spec.topologies)
        .into_par_iter()
        .map(|topo_idx| {
            let mut rng = derive_rng(
                spec.seed,
                &[
                    domain::ENERGY_OUTAGE,
                    spec.architecture.code(),
                    topo_idx as u64,
                ],
            );
            let net = sample_network(spec, &config, &mut rng)?;
            match mode {
                EnergyMode::Analytic => analytic_curves(spec, &net, &thetas_w),
                EnergyMode::MonteCarlo { draws } => {
                    mc_curves(spec, &net, &thetas_w, draws, &mut rng)
                }
            }
        })
        .collect();

    let mut avg = vec![0.0; thetas_w.len()];
    let mut max = vec![0.0; thetas_w.len()];
    for c in curves {
        let c = c?;
        for (acc, v) in avg.iter_mut().zip(c.avg) {
            *acc += v;
        }
        for (acc, v) in max.iter_mut().zip(c.max) {
            *acc += v;
        }
    }
    let count = spec.topologies as f64;
    Ok(theta_h_dbm_grid
        .iter()
        .enumerate()
        .map(|(i, &theta_h_dbm)| EnergyOutagePoint {
            theta_h_dbm,
            architecture: spec.architecture,
            avg: avg[i] / count,
            max: max[i] / count,
        })
        .collect())
}
