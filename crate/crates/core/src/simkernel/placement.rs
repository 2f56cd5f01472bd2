//! Carrier-emitter placement search.
//!
//! Candidate CE layouts (random or exhaustively enumerated) are scored by a
//! tag-topology-averaged metric; the returned ranking is ascending, so the
//! head is the layout a designer would install. Each candidate's score is a
//! pure function of (seed, candidate), which makes random and exhaustive
//! searches agree wherever they visit the same layout.

use rand::Rng;
use rayon::prelude::*;

use super::stream::{derive_rng, domain};
use super::{Architecture, ScenarioSpec};
use crate::analytic::{
    avg_sinr_multistatic, energy_outage_multistatic, outage_bound_multistatic,
};
use crate::channel::{path_loss_extrapolated, PathLossParams};
use crate::signal::{energy_per_bit_multistatic, rho_coefficients, FrequencyAssignment};
use crate::topology::{
    canonical_anchors, link_distances, sample_topology_with_anchors, Grid, Layout, Point,
};
use crate::{Error, Result};

const MAX_EXHAUSTIVE: usize = 200_000;

/// Tag-averaged score assigned to a CE layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlacementMetric {
    /// Closed-form average energy outage at a harvesting threshold.
    AvgEnergyOutage { theta_h_dbm: f64 },
    /// Average Rayleigh information-outage bound at an SINR threshold.
    AvgInfoOutageBound { theta_db: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacementSearch {
    /// Number of random candidate layouts (ignored when `exhaustive`).
    pub t_max: usize,
    /// Enumerate every possible layout instead of sampling.
    pub exhaustive: bool,
    pub metric: PlacementMetric,
    /// Tag placements averaged per candidate.
    pub tag_rounds: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedPlacement {
    pub emitters: Vec<Point>,
    pub metric: f64,
}

fn grid_index(grid: &Grid, p: Point) -> u64 {
    let k1 = (grid.cells + 1) as u64;
    let i = (p[0] / grid.resolution).round() as u64;
    let j = (p[1] / grid.resolution).round() as u64;
    i * k1 + j
}

/// Content hash of a candidate layout (order-insensitive).
fn candidate_key(grid: &Grid, emitters: &[Point]) -> u64 {
    let mut idx: Vec<u64> = emitters.iter().map(|&p| grid_index(grid, p)).collect();
    idx.sort_unstable();
    let mut key: u64 = 0x9D3F_EC5C_17B2_A801;
    for i in idx {
        key = key
            .rotate_left(19)
            .wrapping_mul(0xA24B_AED4_963E_E407)
            .wrapping_add(i);
    }
    key
}

fn evaluate_candidate(
    spec: &ScenarioSpec,
    search: &PlacementSearch,
    grid: &Grid,
    reader: Point,
    emitters: &[Point],
) -> Result<f64> {
    let key = candidate_key(grid, emitters);
    let config = spec
        .system
        .config(spec.n_tags, emitters.len(), spec.tx_power_watts())?;
    let power = spec.tx_power_watts();
    let mut total = 0.0;
    for round in 0..search.tag_rounds {
        let mut rng = derive_rng(spec.seed, &[domain::PLACEMENT, key, round as u64]);
        let topo = sample_topology_with_anchors(
            grid,
            spec.n_tags,
            reader,
            emitters.to_vec(),
            spec.min_tag_distance,
            &mut rng,
        )?;
        let distances = link_distances(&topo);
        let fading = super::sample_link_fading(&spec.fading, spec.n_tags, emitters.len(), &mut rng);
        let mut gains_ce_tag = Vec::with_capacity(emitters.len());
        for row in &distances.ce_tag {
            let mut gains = Vec::with_capacity(spec.n_tags);
            for &d in row {
                let ple = PathLossParams::new(spec.system.wavelength, spec.ple.sample(&mut rng))?;
                gains.push(path_loss_extrapolated(d, &ple)?);
            }
            gains_ce_tag.push(gains);
        }

        let round_metric = match search.metric {
            PlacementMetric::AvgEnergyOutage { theta_h_dbm } => {
                let theta = super::dbm_to_watts(theta_h_dbm);
                let mut sum = 0.0;
                for tag in 0..spec.n_tags {
                    let per_ce: Vec<(f64, f64, crate::channel::NakagamiM)> = (0..emitters.len())
                        .map(|l| (power, gains_ce_tag[l][tag], fading[tag].ce_tag[l]))
                        .collect();
                    sum += energy_outage_multistatic(theta, &per_ce)?;
                }
                sum / spec.n_tags as f64
            }
            PlacementMetric::AvgInfoOutageBound { theta_db } => {
                let theta = super::db_to_linear(theta_db);
                let mut gains_tag_reader = Vec::with_capacity(spec.n_tags);
                for &d in &distances.tag_reader {
                    let ple =
                        PathLossParams::new(spec.system.wavelength, spec.ple.sample(&mut rng))?;
                    gains_tag_reader.push(path_loss_extrapolated(d, &ple)?);
                }
                let assignment = FrequencyAssignment::random(
                    spec.n_tags,
                    spec.system.subcarrier_base,
                    spec.system.subcarrier_spacing,
                    spec.system.bit_duration,
                    &mut rng,
                )?;
                let rho = rho_coefficients(&assignment)?;
                let mut slot_energies = Vec::with_capacity(emitters.len());
                for l in 0..emitters.len() {
                    let row: Vec<f64> = (0..spec.n_tags)
                        .map(|tag| {
                            energy_per_bit_multistatic(
                                &config,
                                gains_ce_tag[l][tag],
                                gains_tag_reader[tag],
                                l,
                                tag,
                            )
                        })
                        .collect::<Result<_>>()?;
                    slot_energies.push(row);
                }
                let mut sum = 0.0;
                for tag in 0..spec.n_tags {
                    let mut product = 1.0;
                    for row in &slot_energies {
                        let s =
                            avg_sinr_multistatic(tag, row, &rho, spec.system.noise_density)?
                                .sinr();
                        product *= outage_bound_multistatic(theta, s)?;
                    }
                    sum += product;
                }
                sum / spec.n_tags as f64
            }
        };
        total += round_metric;
    }
    Ok(total / search.tag_rounds as f64)
}

/// Enumerate every `choose`-subset of `points` (lexicographic order).
fn all_combinations(points: &[Point], choose: usize) -> Vec<Vec<Point>> {
    let n = points.len();
    if choose > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..choose).collect();
    loop {
        out.push(idx.iter().map(|&i| points[i]).collect());
        // advance the combination counter
        let mut pos = choose;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if idx[pos] != pos + n - choose {
                break;
            }
        }
        idx[pos] += 1;
        for i in (pos + 1)..choose {
            idx[i] = idx[i - 1] + 1;
        }
    }
}

/// Search CE layouts for the one minimizing the chosen metric. Returns the
/// ranking in ascending metric order; ties keep discovery order.
pub fn run_placement_search(
    spec: &ScenarioSpec,
    search: &PlacementSearch,
) -> Result<Vec<RankedPlacement>> {
    spec.validate()?;
    if spec.architecture != Architecture::Multistatic {
        return Err(Error::config(
            "placement search positions carrier emitters; use the multistatic architecture",
        ));
    }
    if search.t_max < 1 && !search.exhaustive {
        return Err(Error::config("t_max must be at least 1"));
    }
    if search.tag_rounds < 1 {
        return Err(Error::config("tag_rounds must be at least 1"));
    }
    if matches!(search.metric, PlacementMetric::AvgInfoOutageBound { .. })
        && !matches!(spec.fading, super::FadingLaw::Rayleigh)
    {
        return Err(Error::config(
            "the information-outage bound metric holds only under Rayleigh fading",
        ));
    }
    let grid = spec
        .grid
        .as_ref()
        .ok_or_else(|| Error::config("placement search needs a grid"))?;
    let reader = match &spec.anchors {
        Some((r, _)) => *r,
        None => canonical_anchors(grid, Layout::Monostatic)?.0,
    };
    let free: Vec<Point> = grid
        .points()
        .into_iter()
        .filter(|&p| crate::topology::distance(p, reader) > 1e-12)
        .collect();
    if free.len() < spec.slots {
        return Err(Error::config("grid too small for the requested CE count"));
    }

    let candidates: Vec<Vec<Point>> = if search.exhaustive {
        let combos = all_combinations(&free, spec.slots);
        if combos.len() > MAX_EXHAUSTIVE {
            return Err(Error::config(format!(
                "exhaustive search over {} layouts is too large; use random sampling",
                combos.len()
            )));
        }
        combos
    } else {
        (0..search.t_max)
            .map(|i| {
                let mut rng = derive_rng(spec.seed, &[domain::PLACEMENT, 0xCA_5D, i as u64]);
                let mut idx: Vec<usize> = (0..free.len()).collect();
                for k in 0..spec.slots {
                    let j = rng.random_range(k..idx.len());
                    idx.swap(k, j);
                }
                idx[..spec.slots].iter().map(|&i| free[i]).collect()
            })
            .collect()
    };

    let scored: Vec<Result<f64>> = candidates
        .par_iter()
        .map(|c| evaluate_candidate(spec, search, grid, reader, c))
        .collect();
    let mut ranked: Vec<RankedPlacement> = candidates
        .into_iter()
        .zip(scored)
        .map(|(emitters, metric)| {
            metric.map(|metric| RankedPlacement { emitters, metric })
        })
        .collect::<Result<_>>()?;
    ranked.sort_by(|a, b| a.metric.total_cmp(&b.metric));
    Ok(ranked)
}
