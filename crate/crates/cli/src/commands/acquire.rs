//! `acquire`: end-to-end acquisition event simulation, producing the
//! distribution of acquisition times.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Result};
use lenspoint_core::policy::{
    coherence_time, simulate_algorithm1, AcquisitionScenario, PolicyKind,
};
use serde::Serialize;

use crate::manifest::RunManifest;
use crate::svg::LinePlot;
use crate::table::{fmt_f64, Table};

#[derive(Debug, Clone)]
pub struct Flags {
    pub sigma_est: Option<super::SigmaEstArg>,
    pub policy: Option<String>,
}

#[derive(Debug, Serialize)]
struct Summary {
    policy: String,
    sigma_est: String,
    sigma_est_rad: f64,
    t0_s: f64,
    t_rot_s: f64,
    trials: u64,
    censored: u64,
    mean_time_s: f64,
    mean_attempts: f64,
    first_attempt_failure_fraction: f64,
}

pub fn run(config_path: &Path, out_dir: Option<&Path>, flags: Flags) -> Result<()> {
    let (cfg, out) = super::prepare(config_path, out_dir)?;
    let mut manifest = RunManifest::new("acquire", config_path, &cfg)?;
    let policy = match flags.policy.as_deref().unwrap_or("reestimate") {
        "reestimate" => PolicyKind::ReEstimate,
        "single" => PolicyKind::SingleEstimate,
        other => bail!("unknown policy `{other}` (expected `reestimate` or `single`)"),
    };
    let d = cfg.optical.link_distance_m;
    let sigma_arg = flags.sigma_est.unwrap_or(super::SigmaEstArg::Proposed);
    let sigma_est = super::sigma_source(&cfg, sigma_arg, &[d])?.resolve(d)?;
    let t0 = coherence_time(&cfg.coherence()?);
    let scenario = AcquisitionScenario {
        array: cfg.lens_array()?,
        rf: cfg.rf_budget()?,
        chain_count: cfg.rf.chain_count,
        gps_position_std: cfg.prior.gps_position_std_m,
        channel: cfg.channel_at(
            d,
            sigma_est,
            cfg.optical.beam_divergence_rad,
            cfg.fading_choice()?,
            cfg.optical.visibility_m,
        )?,
        coherence_time: t0,
        rotate_time: cfg.policy.rotate_time_s,
        max_attempts: cfg.policy_run.max_attempts,
    };
    let trials = cfg.policy_run.acquire_trials;
    let outcomes = simulate_algorithm1(&scenario, policy, trials, cfg.run.seed)?;

    // Acquisition times are lattice-valued (a fixed cost per attempt), so the
    // histogram is exact when keyed by the attempt count.
    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
    let mut censored = 0u64;
    let mut time_sum = 0.0;
    let mut attempts_sum = 0u64;
    let mut first_failures = 0u64;
    for o in &outcomes {
        if o.censored {
            censored += 1;
        } else {
            *histogram.entry(o.attempts).or_insert(0) += 1;
            time_sum += o.time;
        }
        attempts_sum += o.attempts;
        if o.attempts > 1 {
            first_failures += 1;
        }
    }
    let uncensored = trials - censored;

    let mut table = Table::new(&["t_seconds", "attempts", "count", "fraction"]);
    for (&attempts, &count) in &histogram {
        let time = match policy {
            PolicyKind::ReEstimate => attempts as f64 * (t0 + scenario.rotate_time),
            PolicyKind::SingleEstimate => scenario.rotate_time + attempts as f64 * t0,
        };
        table.push_row(vec![
            fmt_f64(time),
            attempts.to_string(),
            count.to_string(),
            fmt_f64(count as f64 / trials as f64),
        ]);
    }
    let csv_path = manifest.record(&out.join("acquire_histogram.csv"));
    table.write(&csv_path)?;

    let plot = LinePlot {
        title: "Acquisition time distribution".into(),
        x_label: "t_acq (s)".into(),
        y_label: "fraction of trials".into(),
        log_x: false,
        log_y: true,
        series: Vec::new(),
    };
    let svg_path = manifest.record(&out.join("acquire_histogram.svg"));
    crate::svg::write_plot(&csv_path, &svg_path, "t_seconds", "fraction", None, plot)?;

    let summary = Summary {
        policy: match policy {
            PolicyKind::ReEstimate => "reestimate".into(),
            PolicyKind::SingleEstimate => "single".into(),
        },
        sigma_est: sigma_arg.label(),
        sigma_est_rad: sigma_est,
        t0_s: t0,
        t_rot_s: scenario.rotate_time,
        trials,
        censored,
        mean_time_s: if uncensored > 0 {
            time_sum / uncensored as f64
        } else {
            f64::NAN
        },
        mean_attempts: attempts_sum as f64 / trials as f64,
        first_attempt_failure_fraction: first_failures as f64 / trials as f64,
    };
    let summary_path = manifest.record(&out.join("summary_acquire.json"));
    std::fs::write(&summary_path, serde_json::to_string_pretty(&summary)?)?;
    let manifest_path = manifest.write(&out)?;
    for p in &manifest.outputs {
        println!("wrote {p}");
    }
    println!("wrote {}", manifest_path.display());
    Ok(())
}
