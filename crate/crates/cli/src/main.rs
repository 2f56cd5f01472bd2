//! Reproducible experiment runner for the backscatter link simulator.
//!
//! Every invocation consumes one TOML config (a named preset or a file),
//! writes CSV curves plus a JSON manifest recording the resolved scenario,
//! seed, and output digests. Identical (config, seed) pairs produce
//! byte-identical CSVs regardless of `--threads`.

mod commands;
mod config;
mod manifest;
mod output;
mod units;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use commands::{CommandOutput, RunOptions};
use manifest::{sha256_hex, write_atomic, OutputDigest, RunManifest};

#[derive(Debug)]
pub enum AppError {
    /// Malformed or inconsistent configuration (exit code 2).
    Config(String),
    /// Numerical failure in a kernel or an emit-time sanity check (exit 3).
    Numeric(String),
    /// Filesystem trouble (exit 1).
    Io(String),
}

impl AppError {
    pub fn config(msg: impl Into<String>) -> Self {
        AppError::Config(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        AppError::Numeric(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        AppError::Io(msg.into())
    }

    pub fn from_core_config(e: scattersim_core::Error) -> Self {
        AppError::Config(e.to_string())
    }

    fn exit_code(&self) -> ExitCode {
        match self {
            AppError::Config(_) => ExitCode::from(2),
            AppError::Numeric(_) => ExitCode::from(3),
            AppError::Io(_) => ExitCode::from(1),
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Config(m) => write!(f, "config error: {m}"),
            AppError::Numeric(m) => write!(f, "numeric failure: {m}"),
            AppError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<scattersim_core::Error> for AppError {
    fn from(e: scattersim_core::Error) -> Self {
        match e {
            scattersim_core::Error::Config(m) => AppError::Config(m),
            scattersim_core::Error::Domain(m) | scattersim_core::Error::Numerical(m) => {
                AppError::Numeric(m)
            }
        }
    }
}

#[derive(Parser)]
#[command(
    name = "scattersim",
    version,
    about = "Monostatic vs. multistatic backscatter network simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// BER versus SNR or transmit power (coherent + noncoherent)
    Ber(RunArgs),
    /// Average information outage versus SINR threshold, with Rayleigh bounds
    Outage(RunArgs),
    /// Average/maximum energy outage versus harvesting threshold
    Energy(RunArgs),
    /// Diversity-order estimates from the analytic BER curves
    Diversity(RunArgs),
    /// Carrier-emitter placement search
    Place(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to a TOML config (alternative to --preset)
    config: Option<PathBuf>,
    /// Built-in scenario: fig4, fig5, fig6, fig9, or fig10
    #[arg(long)]
    preset: Option<String>,
    /// Override the config's random seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's Monte-Carlo trial count
    #[arg(long)]
    trials: Option<usize>,
    /// Worker threads (shard count is fixed; results do not depend on this)
    #[arg(long)]
    threads: Option<usize>,
    /// Skip Monte-Carlo columns where the command supports it
    #[arg(long)]
    analytic_only: bool,
    /// Output directory for CSVs and the manifest
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Ber(_) => "ber",
            Command::Outage(_) => "outage",
            Command::Energy(_) => "energy",
            Command::Diversity(_) => "diversity",
            Command::Place(_) => "place",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::Ber(a)
            | Command::Outage(a)
            | Command::Energy(a)
            | Command::Diversity(a)
            | Command::Place(a) => a,
        }
    }
}

fn load_config_text(args: &RunArgs) -> Result<String, AppError> {
    match (&args.config, &args.preset) {
        (Some(_), Some(_)) => Err(AppError::config(
            "pass either a config path or --preset, not both",
        )),
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| AppError::config(format!("reading {}: {e}", path.display()))),
        (None, Some(name)) => Ok(config::preset_toml(name)?.to_string()),
        (None, None) => Err(AppError::config(
            "a config path or --preset is required (try --preset fig4)",
        )),
    }
}

fn run(command: &Command) -> Result<(), AppError> {
    let args = command.args();
    let started = Instant::now();
    let config_text = load_config_text(args)?;
    let raw = config::parse_toml(&config_text)?;
    let mut resolved = config::resolve(&raw)?;
    if resolved.command != command.name() {
        return Err(AppError::config(format!(
            "this config describes a `{}` run; invoke `scattersim {}` with it",
            resolved.command, resolved.command
        )));
    }
    if let Some(seed) = args.seed {
        resolved.seed = seed;
    }
    if let Some(trials) = args.trials {
        resolved.trials = trials;
    }

    let opts = RunOptions {
        analytic_only: args.analytic_only,
    };
    let runner = || -> Result<CommandOutput, AppError> {
        match command {
            Command::Ber(_) => commands::cmd_ber(&resolved, &opts),
            Command::Outage(_) => commands::cmd_outage(&resolved, &opts),
            Command::Energy(_) => commands::cmd_energy(&resolved, &opts),
            Command::Diversity(_) => commands::cmd_diversity(&resolved, &opts),
            Command::Place(_) => commands::cmd_place(&resolved, &opts),
        }
    };
    let result = match args.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| AppError::io(format!("building thread pool: {e}")))?;
            pool.install(runner)
        }
        None => runner(),
    }?;

    let mut digests = Vec::new();
    for (stem, body) in &result.files {
        let path = args.out.join(format!("{stem}.csv"));
        write_atomic(&path, body.as_bytes())?;
        digests.push(OutputDigest {
            file: path
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default(),
            sha256: sha256_hex(body.as_bytes()),
            bytes: body.len() as u64,
        });
        println!("wrote {}", path.display());
    }

    let manifest = RunManifest {
        command: command.name().to_string(),
        label: resolved.label.clone(),
        argv: std::env::args().collect(),
        seed: resolved.seed,
        threads: args.threads,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_s: started.elapsed().as_secs_f64(),
        config_toml: config_text,
        config_resolved: serde_json::to_value(&resolved)
            .map_err(|e| AppError::io(format!("serializing config: {e}")))?,
        outputs: digests,
        notes: result.notes,
    };
    let manifest_path = args.out.join(format!("{}_manifest.json", resolved.label));
    manifest.write(&manifest_path)?;
    println!("wrote {}", manifest_path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("scattersim: {e}");
            e.exit_code()
        }
    }
}
