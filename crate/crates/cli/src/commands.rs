//! Command implementations: dispatch simkernel/analytic runs and render the
//! CSV curves the figures are plotted from.

use scattersim_core::analytic::{
    ber_bound_multistatic, ber_exact_rayleigh_monostatic, diversity_order,
};
use scattersim_core::simkernel::{
    run_ber, run_energy_outage, run_info_outage, run_placement_search, AnalyticKind, Architecture,
    EnergyMode, PlacementMetric, PlacementSearch, ScenarioSpec, Sweep,
};

use crate::config::ResolvedConfig;
use crate::output::{fmt_num, Csv};
use crate::AppError;

pub struct RunOptions {
    pub analytic_only: bool,
}

/// Each command returns (file stem, CSV body) pairs plus per-run notes for
/// the manifest.
pub struct CommandOutput {
    pub files: Vec<(String, String)>,
    pub notes: Vec<String>,
}

fn scenario_notes(spec: &ScenarioSpec, notes: &mut Vec<String>) {
    if spec.grid.is_some() && spec.min_tag_distance == 0.0 {
        let note = "minimum tag distance disabled: path gains are power-law \
                    extrapolations below the 1 m reference distance"
            .to_string();
        if !notes.contains(&note) {
            notes.push(note);
        }
    }
}

pub fn cmd_ber(config: &ResolvedConfig, opts: &RunOptions) -> Result<CommandOutput, AppError> {
    let sweep = config
        .sweep
        .as_ref()
        .ok_or_else(|| AppError::config("ber runs need a [sweep] section"))?;
    let sweep_col = match sweep {
        Sweep::SnrDb(_) => "snr_db",
        Sweep::PowerDbm(_) => "ptx_dbm",
    };
    let mut csv = Csv::new(&[
        sweep_col,
        "architecture",
        "detector",
        "ber_mc",
        "ci95",
        "ber_analytic",
        "analytic_kind",
    ]);
    let mut notes = Vec::new();
    for &arch in &config.architectures {
        let mut spec = config.scenario(arch);
        if opts.analytic_only {
            spec.trials = 1;
        }
        scenario_notes(&spec, &mut notes);
        let points = run_ber(&spec)?;
        for p in points {
            let (mc, ci) = if opts.analytic_only {
                (String::new(), String::new())
            } else {
                (fmt_num(p.estimate.mean), fmt_num(p.estimate.half_width_95))
            };
            csv.row(&[
                fmt_num(p.sweep_value),
                p.architecture.label().to_string(),
                p.detector.label().to_string(),
                mc,
                ci,
                p.analytic.map(fmt_num).unwrap_or_default(),
                match p.analytic_kind {
                    AnalyticKind::Exact => "exact",
                    AnalyticKind::Bound => "bound",
                    AnalyticKind::None => "",
                }
                .to_string(),
            ]);
        }
    }
    Ok(CommandOutput {
        files: vec![(format!("{}_ber", config.label), csv.into_string())],
        notes,
    })
}

pub fn cmd_outage(config: &ResolvedConfig, opts: &RunOptions) -> Result<CommandOutput, AppError> {
    let outage = config
        .outage
        .as_ref()
        .ok_or_else(|| AppError::config("outage runs need an [outage] section"))?;
    if outage.theta_db.is_empty() {
        return Err(AppError::config("outage.theta_db expands to no points"));
    }
    let mut csv = Csv::new(&[
        "theta_db",
        "architecture",
        "fading",
        "outage_mc",
        "ci95",
        "outage_bound",
    ]);
    let mut notes = Vec::new();
    for &arch in &config.architectures {
        for &law in &outage.fading_laws {
            let mut spec = config.scenario(arch);
            spec.fading = law;
            if opts.analytic_only {
                // the Jensen bounds still average over random assignments
                spec.draws_per_topology = spec.draws_per_topology.min(64).max(1);
            }
            scenario_notes(&spec, &mut notes);
            let points = run_info_outage(&spec, &outage.theta_db)?;
            for p in &points {
                // Jensen check at emit time: the bound may never sit below
                // the Monte-Carlo estimate by more than sampling noise
                if let Some(bound) = p.bound {
                    let slack = 3.0
                        * (p.mc.mean.max(1e-6) * (1.0 - p.mc.mean).max(1e-6)
                            / p.mc.n_trials as f64)
                            .sqrt();
                    if p.mc.mean > bound + slack {
                        return Err(AppError::numeric(format!(
                            "Jensen bound violated at theta = {} dB ({} {}): mc {} > bound {}",
                            p.theta_db,
                            arch.label(),
                            p.fading,
                            p.mc.mean,
                            bound
                        )));
                    }
                }
                let (mc, ci) = if opts.analytic_only {
                    (String::new(), String::new())
                } else {
                    (fmt_num(p.mc.mean), fmt_num(p.mc.half_width_95))
                };
                csv.row(&[
                    fmt_num(p.theta_db),
                    p.architecture.label().to_string(),
                    p.fading.to_string(),
                    mc,
                    ci,
                    p.bound.map(fmt_num).unwrap_or_default(),
                ]);
            }
        }
    }
    Ok(CommandOutput {
        files: vec![(format!("{}_outage", config.label), csv.into_string())],
        notes,
    })
}

pub fn cmd_energy(config: &ResolvedConfig, opts: &RunOptions) -> Result<CommandOutput, AppError> {
    let energy = config
        .energy
        .as_ref()
        .ok_or_else(|| AppError::config("energy runs need an [energy] section"))?;
    let emit_mc = energy.emit_mc && !opts.analytic_only;
    let header: Vec<&str> = if emit_mc {
        vec![
            "theta_h_dbm",
            "architecture",
            "avg_outage",
            "max_outage",
            "avg_outage_mc",
            "max_outage_mc",
        ]
    } else {
        vec!["theta_h_dbm", "architecture", "avg_outage", "max_outage"]
    };
    let mut csv = Csv::new(&header);
    let mut notes = Vec::new();
    for &arch in &config.architectures {
        let spec = config.scenario(arch);
        scenario_notes(&spec, &mut notes);
        let analytic = run_energy_outage(&spec, &energy.theta_h_dbm, EnergyMode::Analytic)?;
        let mc = if emit_mc {
            Some(run_energy_outage(
                &spec,
                &energy.theta_h_dbm,
                EnergyMode::MonteCarlo {
                    draws: energy.mc_draws,
                },
            )?)
        } else {
            None
        };
        for (i, p) in analytic.iter().enumerate() {
            if p.max < p.avg - 1e-12 {
                return Err(AppError::numeric(format!(
                    "max outage below average at {} dBm",
                    p.theta_h_dbm
                )));
            }
            let mut row = vec![
                fmt_num(p.theta_h_dbm),
                p.architecture.label().to_string(),
                fmt_num(p.avg),
                fmt_num(p.max),
            ];
            if let Some(mc) = &mc {
                row.push(fmt_num(mc[i].avg));
                row.push(fmt_num(mc[i].max));
            }
            csv.row(&row);
        }
    }
    Ok(CommandOutput {
        files: vec![(format!("{}_energy", config.label), csv.into_string())],
        notes,
    })
}

pub fn cmd_diversity(config: &ResolvedConfig, _opts: &RunOptions) -> Result<CommandOutput, AppError> {
    let (window, points) = match &config.diversity {
        Some(d) => (d.window_db, d.points),
        None => ([50.0, 70.0], 21),
    };
    let mut csv = Csv::new(&[
        "architecture",
        "fading",
        "window_lo_db",
        "window_hi_db",
        "diversity_order",
    ]);
    let mono = diversity_order(ber_exact_rayleigh_monostatic, window[0], window[1], points)?;
    csv.row(&[
        "monostatic".to_string(),
        "rayleigh".to_string(),
        fmt_num(window[0]),
        fmt_num(window[1]),
        fmt_num(mono),
    ]);
    let multi = diversity_order(
        |snr| ber_bound_multistatic(1.0, 1.0, snr),
        window[0],
        window[1],
        points,
    )?;
    csv.row(&[
        "multistatic".to_string(),
        "rayleigh".to_string(),
        fmt_num(window[0]),
        fmt_num(window[1]),
        fmt_num(multi),
    ]);
    Ok(CommandOutput {
        files: vec![(format!("{}_diversity", config.label), csv.into_string())],
        notes: Vec::new(),
    })
}

pub fn cmd_place(config: &ResolvedConfig, _opts: &RunOptions) -> Result<CommandOutput, AppError> {
    let place = config
        .place
        .as_ref()
        .ok_or_else(|| AppError::config("place runs need a [place] section"))?;
    if !config.architectures.contains(&Architecture::Multistatic) {
        return Err(AppError::config(
            "placement search positions carrier emitters; include the multistatic architecture",
        ));
    }
    let spec = config.scenario(Architecture::Multistatic);
    let metric = if let Some(theta_h) = place.metric_theta_h_w {
        PlacementMetric::AvgEnergyOutage {
            theta_h_dbm: 10.0 * theta_h.log10() + 30.0,
        }
    } else {
        PlacementMetric::AvgInfoOutageBound {
            theta_db: place.metric_theta_db.unwrap_or(0.0),
        }
    };
    let search = PlacementSearch {
        t_max: place.t_max,
        exhaustive: place.exhaustive,
        metric,
        tag_rounds: place.tag_rounds,
    };
    let ranked = run_placement_search(&spec, &search)?;
    let mut csv = Csv::new(&["rank", "metric", "metric_kind", "emitters"]);
    let mut notes = Vec::new();
    scenario_notes(&spec, &mut notes);
    for (i, r) in ranked.iter().enumerate() {
        let emitters = r
            .emitters
            .iter()
            .map(|p| format!("{}:{}", fmt_num(p[0]), fmt_num(p[1])))
            .collect::<Vec<_>>()
            .join(";");
        csv.row(&[
            (i + 1).to_string(),
            fmt_num(r.metric),
            place.metric_label.clone(),
            emitters,
        ]);
    }
    Ok(CommandOutput {
        files: vec![(format!("{}_place", config.label), csv.into_string())],
        notes,
    })
}
