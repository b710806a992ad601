use std::path::PathBuf;

use clap::{Parser, Subcommand};
use lenspoint::commands::{self, acquire, estimator_sweep, outage_sweep, policy, validate};

/// Coarse-pointing simulator for RF-lens-assisted FSO links.
#[derive(Parser)]
#[command(name = "lenspoint", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimator accuracy versus distance and chain count (CSV + SVG).
    EstimatorSweep {
        /// Scenario config file (TOML).
        config: PathBuf,
        /// Output directory (defaults to the config's run.output_dir).
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Override the trial count.
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Outage probability versus beam divergence, plus the distance sweep.
    OutageSweep {
        config: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Comma-separated distances in meters for the distance sweep.
        #[arg(long, value_delimiter = ',')]
        distance: Option<Vec<f64>>,
        /// Fading model: lognormal, gammagamma, or both.
        #[arg(long)]
        fading_model: Option<String>,
        /// Pointing accuracy source: proposed, gps, or a value in radians.
        #[arg(long)]
        sigma_est: Option<String>,
        /// Evaluation method: quadrature (default) or montecarlo.
        #[arg(long)]
        method: Option<String>,
        /// Monte Carlo trials when --method montecarlo.
        #[arg(long)]
        mc_trials: Option<u64>,
    },
    /// Mean acquisition times, tail curves, and the recommended policy.
    Policy {
        config: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Coherence time override, e.g. `1ms`, `200ms`, `0.25s`.
        #[arg(long)]
        t0: Option<String>,
        /// Rotation time override, same format as --t0.
        #[arg(long)]
        trot: Option<String>,
        #[arg(long)]
        sigma_est: Option<String>,
        #[arg(long)]
        fading_model: Option<String>,
    },
    /// End-to-end acquisition event simulation (histogram CSV).
    Acquire {
        config: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        sigma_est: Option<String>,
        /// Policy: reestimate (default) or single.
        #[arg(long)]
        policy: Option<String>,
    },
    /// Parse and validate a scenario config, echoing derived quantities.
    ValidateConfig { config: PathBuf },
}

fn parse_sigma(s: Option<String>) -> anyhow::Result<Option<commands::SigmaEstArg>> {
    s.map(|v| commands::SigmaEstArg::parse(&v)).transpose()
}

fn run() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::EstimatorSweep {
            config,
            out_dir,
            trials,
        } => estimator_sweep::run(&config, out_dir.as_deref(), trials),
        Command::OutageSweep {
            config,
            out_dir,
            distance,
            fading_model,
            sigma_est,
            method,
            mc_trials,
        } => outage_sweep::run(
            &config,
            out_dir.as_deref(),
            outage_sweep::Flags {
                distances: distance,
                fading_model,
                sigma_est: parse_sigma(sigma_est)?,
                method,
                mc_trials,
            },
        ),
        Command::Policy {
            config,
            out_dir,
            t0,
            trot,
            sigma_est,
            fading_model,
        } => policy::run(
            &config,
            out_dir.as_deref(),
            policy::Flags {
                t0,
                trot,
                sigma_est: parse_sigma(sigma_est)?,
                fading_model,
            },
        ),
        Command::Acquire {
            config,
            out_dir,
            sigma_est,
            policy,
        } => acquire::run(
            &config,
            out_dir.as_deref(),
            acquire::Flags {
                sigma_est: parse_sigma(sigma_est)?,
                policy,
            },
        ),
        Command::ValidateConfig { config } => validate::run(&config),
    }
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
