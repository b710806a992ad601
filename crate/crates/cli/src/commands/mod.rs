//! Subcommand implementations. Each command loads the scenario config, runs
//! the corresponding model pipeline, and writes CSV tables, SVG plots, and a
//! run manifest into the output directory.

pub mod acquire;
pub mod estimator_sweep;
pub mod outage_sweep;
pub mod policy;
pub mod validate;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use lenspoint_core::estimator::estimation_std_sweep;
use lenspoint_core::outage::SigmaEstSource;

use crate::config::ScenarioConfig;

/// Where the pointing-error std comes from, as given on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaEstArg {
    /// RF estimator accuracy from the estimator sweep at the link distance.
    Proposed,
    /// GPS-only accuracy, `gps_position_std / distance`.
    Gps,
    /// A fixed value in radians.
    Value(f64),
}

impl SigmaEstArg {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "proposed" => Ok(SigmaEstArg::Proposed),
            "gps" => Ok(SigmaEstArg::Gps),
            other => {
                let v: f64 = other.parse().with_context(|| {
                    format!("--sigma-est expects `proposed`, `gps`, or a value in radians, got `{other}`")
                })?;
                if v <= 0.0 {
                    bail!("--sigma-est value must be positive");
                }
                Ok(SigmaEstArg::Value(v))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            SigmaEstArg::Proposed => "proposed".to_string(),
            SigmaEstArg::Gps => "gps".to_string(),
            SigmaEstArg::Value(v) => format!("fixed{v}"),
        }
    }
}

/// Proposed-estimator accuracy table over the given distances, produced by
/// the Monte Carlo estimator sweep at the configured chain count.
pub fn proposed_sigma_table(cfg: &ScenarioConfig, distances: &[f64]) -> Result<Vec<(f64, f64)>> {
    let rows = estimation_std_sweep(
        &cfg.lens_array()?,
        &cfg.rf_budget()?,
        cfg.prior.gps_position_std_m,
        distances,
        &[cfg.rf.chain_count],
        cfg.estimator_sweep.trials,
        cfg.run.seed,
    )?;
    Ok(rows
        .iter()
        .map(|r| (r.distance, r.std_proposed_rad))
        .collect())
}

/// Resolve a sigma-est argument into a core source.
pub fn sigma_source(
    cfg: &ScenarioConfig,
    arg: SigmaEstArg,
    distances: &[f64],
) -> Result<SigmaEstSource> {
    Ok(match arg {
        SigmaEstArg::Value(v) => SigmaEstSource::Fixed(v),
        SigmaEstArg::Gps => SigmaEstSource::GpsPrior {
            position_std: cfg.prior.gps_position_std_m,
        },
        SigmaEstArg::Proposed => SigmaEstSource::Table(proposed_sigma_table(cfg, distances)?),
    })
}

/// Parse a duration like `1ms`, `200ms`, `0.5s`, `250us`, or bare seconds.
pub fn parse_duration(s: &str) -> Result<f64> {
    let (num, scale) = if let Some(v) = s.strip_suffix("ms") {
        (v, 1e-3)
    } else if let Some(v) = s.strip_suffix("us") {
        (v, 1e-6)
    } else if let Some(v) = s.strip_suffix('s') {
        (v, 1.0)
    } else {
        (s, 1.0)
    };
    let v: f64 = num
        .trim()
        .parse()
        .with_context(|| format!("cannot parse duration `{s}`"))?;
    if !(v >= 0.0) {
        bail!("duration must be non-negative: `{s}`");
    }
    Ok(v * scale)
}

/// Load config, resolve the output directory, and make sure it exists.
pub fn prepare(config_path: &Path, out_dir: Option<&Path>) -> Result<(ScenarioConfig, PathBuf)> {
    let cfg = ScenarioConfig::load(config_path)?;
    let out = out_dir
        .map(|p| p.to_path_buf())
        .unwrap_or_else(|| PathBuf::from(&cfg.run.output_dir));
    std::fs::create_dir_all(&out)
        .with_context(|| format!("creating output directory {}", out.display()))?;
    Ok((cfg, out))
}
