//! Information-outage Monte Carlo over random grid topologies.
//!
//! For each sampled topology the run draws random subcarrier assignments and
//! fading realizations, evaluates the instantaneous per-slot SINR (keeping
//! the m/(m+1) factors of the monostatic form), and declares an outage for a
//! tag when its SINR stays below θ in all L slots. Under Rayleigh fading
//! the Jensen upper bounds are evaluated alongside from the average SINRs.

use rand::Rng;
use rayon::prelude::*;

use super::stream::{derive_rng, domain};
use super::{sample_link_fading, Architecture, EstimateWithCI, ScenarioSpec};
use crate::analytic::{
    avg_sinr_monostatic, avg_sinr_multistatic, outage_bound_monostatic, outage_bound_multistatic,
};
use crate::channel::{path_loss_extrapolated, sample_link_power, PathLossParams};
use crate::signal::{
    energy_per_bit_monostatic, energy_per_bit_multistatic, rho_coefficients, FrequencyAssignment,
    RhoMatrix, SystemConfig,
};
use crate::topology::{canonical_anchors, link_distances, sample_topology_with_anchors, Layout};
use crate::{Error, Result};

/// Bound averaging uses at most this many assignment draws per topology;
/// the bound is smooth in the assignment so this converges much faster than
/// the outage Monte Carlo itself.
const BOUND_DRAWS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct InfoOutagePoint {
    pub theta_db: f64,
    pub architecture: Architecture,
    pub fading: &'static str,
    pub mc: EstimateWithCI,
    /// Average Jensen upper bound (Rayleigh fading only).
    pub bound: Option<f64>,
}

/// One sampled network: per-tag fading parameters, path gains, and the
/// per-slot energies feeding the SINR expressions.
pub(crate) struct SampledNetwork {
    pub fading: Vec<crate::channel::FadingParams>,
    pub gains_tag_reader: Vec<f64>,
    /// Path gains indexed [emitter][tag].
    pub gains_ce_tag: Vec<Vec<f64>>,
    /// Monostatic per-tag energy (slot-independent).
    pub energies_mono: Vec<f64>,
    /// Multistatic per-(slot, tag) energy.
    pub energies_multi: Vec<Vec<f64>>,
}

pub(crate) fn sample_network<R: Rng + ?Sized>(
    spec: &ScenarioSpec,
    config: &SystemConfig,
    rng: &mut R,
) -> Result<SampledNetwork> {
    let grid = spec
        .grid
        .as_ref()
        .ok_or_else(|| Error::config("outage runs need a grid"))?;
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
    let topo = sample_topology_with_anchors(
        grid,
        spec.n_tags,
        reader,
        emitters,
        spec.min_tag_distance,
        rng,
    )?;
    let distances = link_distances(&topo);
    let n = spec.n_tags;
    let l_slots = topo.emitters.len();
    let fading = sample_link_fading(&spec.fading, n, l_slots, rng);

    let mut gains_tag_reader = Vec::with_capacity(n);
    for &d in &distances.tag_reader {
        let ple = PathLossParams::new(spec.system.wavelength, spec.ple.sample(rng))?;
        gains_tag_reader.push(path_loss_extrapolated(d, &ple)?);
    }
    let mut gains_ce_tag = Vec::with_capacity(l_slots);
    for row in &distances.ce_tag {
        let mut gains = Vec::with_capacity(n);
        for &d in row {
            let ple = PathLossParams::new(spec.system.wavelength, spec.ple.sample(rng))?;
            gains.push(path_loss_extrapolated(d, &ple)?);
        }
        gains_ce_tag.push(gains);
    }

    let mut energies_mono = Vec::new();
    let mut energies_multi = Vec::new();
    match spec.architecture {
        Architecture::Monostatic => {
            for (tag, params) in fading.iter().enumerate() {
                energies_mono.push(energy_per_bit_monostatic(
                    config,
                    gains_tag_reader[tag],
                    params.tag_reader,
                    tag,
                )?);
            }
        }
        Architecture::Multistatic => {
            for slot in 0..l_slots {
                let mut row = Vec::with_capacity(n);
                for tag in 0..n {
                    row.push(energy_per_bit_multistatic(
                        config,
                        gains_ce_tag[slot][tag],
                        gains_tag_reader[tag],
                        slot,
                        tag,
                    )?);
                }
                energies_multi.push(row);
            }
        }
    }
    Ok(SampledNetwork {
        fading,
        gains_tag_reader,
        gains_ce_tag,
        energies_mono,
        energies_multi,
    })
}

/// Instantaneous SINR of every tag in one slot, given each tag's
/// signal-numerator term w_n (channel power × its energy scaling):
/// SINR_n = w_n / (Σ_j ρ_{nj} w_j + N0).
fn sinr_row(w: &[f64], rho: &RhoMatrix, noise: f64) -> Vec<f64> {
    let n = w.len();
    (0..n)
        .map(|tag| {
            let mut interference = 0.0;
            for (j, &wj) in w.iter().enumerate() {
                interference += rho.at(tag, j) * wj; // diagonal stored as 0
            }
            w[tag] / (interference + noise)
        })
        .collect()
}

/// Monostatic signal terms w_n = g_n · m_n/(m_n+1) · E_n for one slot.
fn monostatic_terms<R: Rng + ?Sized>(net: &SampledNetwork, rng: &mut R) -> Vec<f64> {
    net.energies_mono
        .iter()
        .zip(net.fading.iter())
        .map(|(&e, params)| {
            let m = params.m_tag_reader();
            let y = sample_link_power(params.tag_reader, rng);
            (y * y) * (m / (m + 1.0)) * e
        })
        .collect()
}

/// Multistatic signal terms w_n = g_{l,n} · E_{l,n} for one slot.
fn multistatic_terms<R: Rng + ?Sized>(net: &SampledNetwork, slot: usize, rng: &mut R) -> Vec<f64> {
    net.energies_multi[slot]
        .iter()
        .zip(net.fading.iter())
        .map(|(&e, params)| {
            let y_ct = sample_link_power(params.ce_tag[slot], rng);
            let y_tr = sample_link_power(params.tag_reader, rng);
            y_ct * y_tr * e
        })
        .collect()}

/// Record `value ≤ θ` events into an ascending-θ difference array.
#[inline]
fn record_outage(diff: &mut [u64], thetas: &[f64], value: f64) {
    let idx = thetas.partition_point(|&t| t < value);
    diff[idx] += 1;
}

struct TopologyTally {
    outage_diff: Vec<u64>,
    tag_draws: u64,
    bound_sum: Vec<f64>,
    bound_draws: u64,
}

fn run_topology(
    spec: &ScenarioSpec,
    config: &SystemConfig,
    thetas: &[f64],
    topo_idx: usize,
) -> Result<TopologyTally> {
    let mut rng = derive_rng(
        spec.seed,
        &[
            domain::INFO_OUTAGE,
            spec.architecture.code(),
            topo_idx as u64,
        ],
    );
    let net = sample_network(spec, config, &mut rng)?;
    let n = spec.n_tags;
    let noise = spec.system.noise_density;
    let rayleigh = matches!(spec.fading, super::FadingLaw::Rayleigh);
    let mut outage_diff = vec![0u64; thetas.len() + 1];
    let mut bound_sum = vec![0.0; thetas.len()];
    let mut bound_draws = 0u64;

    for draw in 0..spec.draws_per_topology {
        let assignment = FrequencyAssignment::random(
            n,
            spec.system.subcarrier_base,
            spec.system.subcarrier_spacing,
            spec.system.bit_duration,
            &mut rng,
        )?;
        let rho = rho_coefficients(&assignment)?;

        // best slot per tag decides every θ at once
        let mut best = vec![f64::NEG_INFINITY; n];
        for slot in 0..spec.slots {
            let w = match spec.architecture {
                Architecture::Monostatic => monostatic_terms(&net, &mut rng),
                Architecture::Multistatic => multistatic_terms(&net, slot, &mut rng),
            };
            for (b, s) in best.iter_mut().zip(sinr_row(&w, &rho, noise)) {
                *b = b.max(s);
            }
        }
        for &s in &best {
            record_outage(&mut outage_diff, thetas, s);
        }

        if rayleigh && draw < BOUND_DRAWS {
            bound_draws += n as u64;
            for tag in 0..n {
                match spec.architecture {
                    Architecture::Monostatic => {
                        let s = avg_sinr_monostatic(tag, &net.energies_mono, &rho, noise)?.sinr();
                        for (acc, &theta) in bound_sum.iter_mut().zip(thetas) {
                            *acc +=
                                outage_bound_monostatic(theta, s)?.powi(spec.slots as i32);
                        }
                    }
                    Architecture::Multistatic => {
                        let per_slot_sinr: Vec<f64> = (0..spec.slots)
                            .map(|slot| {
                                avg_sinr_multistatic(
                                    tag,
                                    &net.energies_multi[slot],
                                    &rho,
                                    noise,
                                )
                                .map(|b| b.sinr())
                            })
                            .collect::<Result<_>>()?;
                        for (acc, &theta) in bound_sum.iter_mut().zip(thetas) {
                            let mut product = 1.0;
                            for &s in &per_slot_sinr {
                                product *= outage_bound_multistatic(theta, s)?;
                            }
                            *acc += product;
                        }
                    }
                }
            }
        }
    }
    Ok(TopologyTally {
        outage_diff,
        tag_draws: (spec.draws_per_topology * n) as u64,
        bound_sum,
        bound_draws,
    })
}

/// Topology-averaged L-slot information outage versus the θ grid (dB),
/// with the Rayleigh Jensen bound column where applicable.
pub fn run_info_outage(spec: &ScenarioSpec, theta_db_grid: &[f64]) -> Result<Vec<InfoOutagePoint>> {
    spec.validate()?;
    if theta_db_grid.is_empty() {
        return Err(Error::config("theta grid must not be empty"));
    }
    if theta_db_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config("theta grid must be strictly increasing"));
    }
    if spec.topologies < 1 || spec.draws_per_topology < 1 {
        return Err(Error::config(
            "outage runs need at least one topology and one draw",
        ));
    }
    let thetas: Vec<f64> = theta_db_grid.iter().map(|&db| super::db_to_linear(db)).collect();
    let config = spec
        .system
        .config(spec.n_tags, spec.n_emitters(), spec.tx_power_watts())?;

    let tallies: Vec<Result<TopologyTally>> = (0..spec.topologies)
        .into_par_iter()
        .map(|t| run_topology(spec, &config, &thetas, t))
        .collect();

    let mut outage_counts = vec![0u64; thetas.len()];
    let mut tag_draws = 0u64;
    let mut bound_sum = vec![0.0; thetas.len()];
    let mut bound_draws = 0u64;
    for tally in tallies {
        let tally = tally?;
        let mut running = 0u64;
        for (idx, acc) in outage_counts.iter_mut().enumerate() {
            running += tally.outage_diff[idx];
            *acc += running;
        }
        tag_draws += tally.tag_draws;
        for (acc, v) in bound_sum.iter_mut().zip(tally.bound_sum) {
            *acc += v;
        }
        bound_draws += tally.bound_draws;
    }

    let rayleigh = matches!(spec.fading, super::FadingLaw::Rayleigh);
    Ok(theta_db_grid
        .iter()
        .enumerate()
        .map(|(i, &theta_db)| InfoOutagePoint {
            theta_db,
            architecture: spec.architecture,
            fading: spec.fading.label(),
            mc: EstimateWithCI::from_binomial(outage_counts[i], tag_draws, spec.seed),
            bound: if rayleigh && bound_draws > 0 {
                Some(bound_sum[i] / bound_draws as f64)
            } else {
                None
            },
        })
        .collect())
}

/// Monte-Carlo estimate of the monostatic per-slot outage
/// P(SINR_{l,n} ≤ θ) for a fixed topology (energies) and assignment (ρ).
/// Returns estimates indexed `[theta][tag]`.
pub fn per_slot_outage_monostatic_mc<R: Rng + ?Sized>(
    energies: &[f64],
    m_tag_reader: &[f64],
    rho: &RhoMatrix,
    noise: f64,
    thetas: &[f64],
    draws: usize,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let n = energies.len();
    let mut diff = vec![vec![0u64; thetas.len() + 1]; n];
    for _ in 0..draws {
        let w: Vec<f64> = energies
            .iter()
            .zip(m_tag_reader.iter())
            .map(|(&e, &m)| {
                let y = sample_link_power(super::nakagami(m), rng);
                (y * y) * (m / (m + 1.0)) * e
            })
            .collect();
        for (tag, s) in sinr_row(&w, rho, noise).into_iter().enumerate() {
            record_outage(&mut diff[tag], thetas, s);
        }
    }
    prefix_estimates(&diff, thetas.len(), draws)
}

/// Multistatic per-slot outage estimates indexed `[slot][theta][tag]`.
#[allow(clippy::too_many_arguments)]
pub fn per_slot_outage_multistatic_mc<R: Rng + ?Sized>(
    slot_energies: &[Vec<f64>],
    m_ce_tag: &[Vec<f64>],
    m_tag_reader: &[f64],
    rho: &RhoMatrix,
    noise: f64,
    thetas: &[f64],
    draws: usize,
    rng: &mut R,
) -> Vec<Vec<Vec<f64>>> {
    let n = m_tag_reader.len();
    let slots = slot_energies.len();
    let mut diff = vec![vec![vec![0u64; thetas.len() + 1]; n]; slots];
    for _ in 0..draws {
        for slot in 0..slots {
            let w: Vec<f64> = (0..n)
                .map(|tag| {
                    let y_ct = sample_link_power(super::nakagami(m_ce_tag[slot][tag]), rng);
                    let y_tr = sample_link_power(super::nakagami(m_tag_reader[tag]), rng);
                    y_ct * y_tr * slot_energies[slot][tag]
                })
                .collect();
            for (tag, s) in sinr_row(&w, rho, noise).into_iter().enumerate() {
                record_outage(&mut diff[slot][tag], thetas, s);
            }
        }
    }
    diff.iter()
        .map(|per_tag| prefix_estimates(per_tag, thetas.len(), draws))
        .collect()
}

fn prefix_estimates(diff: &[Vec<u64>], n_thetas: usize, draws: usize) -> Vec<Vec<f64>> {
    let n = diff.len();
    let mut out = vec![vec![0.0; n]; n_thetas];
    for (tag, d) in diff.iter().enumerate() {
        let mut running = 0u64;
        for (idx, row) in out.iter_mut().enumerate() {
            running += d[idx];
            row[tag] = running as f64 / draws as f64;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::monostatic_power_cdf;
    use crate::simkernel::{FadingLaw, PleLaw, Sweep, SystemParams};
    use crate::topology::Grid;

    fn outage_spec(arch: Architecture, fading: FadingLaw, n_tags: usize) -> ScenarioSpec {
        ScenarioSpec {
            architecture: arch,
            slots: if arch == Architecture::Multistatic { 4 } else { 4 },
            n_tags,
            grid: Some(Grid::new(200.0, 5.0).unwrap()),
            anchors: None,
            min_tag_distance: 1.0,
            fading,
            ple: PleLaw::Uniform { lo: 2.0, hi: 2.5 },
            sweep: Sweep::PowerDbm(vec![28.0]),
            tx_power_dbm: 28.0,
            trials: 1,
            topologies: 8,
            draws_per_topology: 60,
            seed: 99,
            system: SystemParams {
                noise_density: 10f64.powf(-19.9),
                bit_duration: 1e-3,
                wavelength: 3e8 / 868e6,
                reflection_gap: 2.0,
                scattering_efficiency: 0.1,
                subcarrier_base: 0.1e6,
                subcarrier_spacing: 0.01e6,
            },
        }
    }

    #[test]
    fn sinr_row_matches_brute_force() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let n = 12;
        let assignment = FrequencyAssignment::random(n, 0.1e6, 0.01e6, 1e-3, &mut rng).unwrap();
        let rho = rho_coefficients(&assignment).unwrap();
        let w: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 1e-15).collect();
        let noise = 1.3e-17;
        let got = sinr_row(&w, &rho, noise);
        for tag in 0..n {
            let mut denom = noise;
            for j in 0..n {
                if j != tag {
                    denom += rho.get(tag, j).unwrap() * w[j];
                }
            }
            let expect = w[tag] / denom;
            assert!(((got[tag] - expect) / expect).abs() < 1e-12);
        }
    }

    #[test]
    fn single_tag_outage_matches_channel_cdf() {
        // no interference: P(outage in one slot) is the closed-form power CDF,
        // and the L-slot outage is its L-th power
        let mut spec = outage_spec(Architecture::Monostatic, FadingLaw::Rayleigh, 1);
        spec.topologies = 1;
        spec.draws_per_topology = 60_000;
        spec.slots = 2;
        let thetas = vec![-3.0, 0.0, 3.0];
        let points = run_info_outage(&spec, &thetas).unwrap();
        // reconstruct this topology's energy from the same stream
        let config = spec.system.config(1, 0, spec.tx_power_watts()).unwrap();
        let mut rng = derive_rng(spec.seed, &[domain::INFO_OUTAGE, 0, 0]);
        let net = sample_network(&spec, &config, &mut rng).unwrap();
        let e = net.energies_mono[0];
        let m = net.fading[0].m_tag_reader();
        for p in &points {
            let theta = crate::simkernel::db_to_linear(p.theta_db);
            let threshold = theta * spec.system.noise_density * (m + 1.0) / (m * e);
            let per_slot = monostatic_power_cdf(threshold, m).unwrap();
            let expect = per_slot.powi(spec.slots as i32);
            let sigma = (expect * (1.0 - expect) / p.mc.n_trials as f64)
                .sqrt()
                .max(1e-6);
            assert!(
                (p.mc.mean - expect).abs() < 4.0 * sigma,
                "theta {} dB: mc {} vs cdf {expect}",
                p.theta_db,
                p.mc.mean
            );
            // with no interference the Jensen bound is exact (Rayleigh)
            if m == 1.0 {
                assert!((p.bound.unwrap() - expect).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn tiny_theta_gives_no_outage() {
        let mut spec = outage_spec(Architecture::Multistatic, FadingLaw::Rayleigh, 3);
        spec.topologies = 2;
        spec.draws_per_topology = 50;
        let points = run_info_outage(&spec, &[-120.0]).unwrap();
        assert_eq!(points[0].mc.mean, 0.0);
    }

    #[test]
    fn bound_dominates_mc_for_rayleigh() {
        for arch in [Architecture::Monostatic, Architecture::Multistatic] {
            let spec = outage_spec(arch, FadingLaw::Rayleigh, 6);
            let thetas: Vec<f64> = (-15..=9).step_by(3).map(|v| v as f64).collect();
            let points = run_info_outage(&spec, &thetas).unwrap();
            for p in points {
                let slack = 3.0 * (p.mc.mean.max(1e-4) / p.mc.n_trials as f64).sqrt();
                assert!(
                    p.mc.mean <= p.bound.unwrap() + slack,
                    "{arch:?} theta {}: mc {} > bound {}",
                    p.theta_db,
                    p.mc.mean,
                    p.bound.unwrap()
                );
            }
        }
    }

    #[test]
    fn outage_monotone_in_theta() {
        let spec = outage_spec(Architecture::Multistatic, FadingLaw::NakagamiUniform { lo: 1.0, hi: 5.0 }, 5);
        let thetas: Vec<f64> = (-20..=20).step_by(4).map(|v| v as f64).collect();
        let points = run_info_outage(&spec, &thetas).unwrap();
        for w in points.windows(2) {
            assert!(w[1].mc.mean >= w[0].mc.mean);
            assert!(w[0].bound.is_none(), "no bound for Nakagami fading");
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let spec = outage_spec(Architecture::Multistatic, FadingLaw::Rayleigh, 4);
        let thetas = vec![-6.0, 0.0, 6.0];
        let a = run_info_outage(&spec, &thetas).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(2)
            .build()
            .unwrap();
        let b = pool.install(|| run_info_outage(&spec, &thetas).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn grid_validation() {
        let spec = outage_spec(Architecture::Monostatic, FadingLaw::Rayleigh, 2);
        assert!(run_info_outage(&spec, &[]).is_err());
        assert!(run_info_outage(&spec, &[0.0, 0.0]).is_err());
        assert!(run_info_outage(&spec, &[3.0, 0.0]).is_err());
    }
}
