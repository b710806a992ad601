//! `policy`: coherence time, mean acquisition time for both policies, tail
//! curves `P[t_acq > t]`, and the recommended policy.

use std::path::Path;

use anyhow::Result;
use lenspoint_core::outage::{outage_probability, OutageMethod};
use lenspoint_core::policy::{
    acquisition_tail, coherence_time, mean_time_re, mean_time_single, recommend_policy,
    reestimate_tail, PolicyKind, SingleEstimateMean,
};
use serde::Serialize;

use crate::manifest::RunManifest;
use crate::svg::LinePlot;
use crate::table::{fmt_f64, Table};

#[derive(Debug, Clone)]
pub struct Flags {
    pub t0: Option<String>,
    pub trot: Option<String>,
    pub sigma_est: Option<super::SigmaEstArg>,
    pub fading_model: Option<String>,
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind")]
enum SingleMeanSummary {
    #[serde(rename = "finite")]
    Finite {
        mean_s: f64,
        stderr_s: f64,
        flagged_fraction: f64,
    },
    #[serde(rename = "divergent")]
    Divergent { flagged_fraction: f64 },
}

#[derive(Debug, Serialize)]
struct Summary {
    coherence_time_s: f64,
    t0_s: f64,
    t_rot_s: f64,
    link_distance_m: f64,
    fading_model: String,
    sigma_est: String,
    sigma_est_rad: f64,
    outage_probability: f64,
    mean_time_reestimate_s: f64,
    mean_time_single: SingleMeanSummary,
    recommended_policy: String,
}

pub fn run(config_path: &Path, out_dir: Option<&Path>, flags: Flags) -> Result<()> {
    let (cfg, out) = super::prepare(config_path, out_dir)?;
    let mut manifest = RunManifest::new("policy", config_path, &cfg)?;
    let d = cfg.optical.link_distance_m;
    let coherence = coherence_time(&cfg.coherence()?);
    let t0 = match &flags.t0 {
        Some(s) => super::parse_duration(s)?,
        None => coherence,
    };
    let t_rot = match &flags.trot {
        Some(s) => super::parse_duration(s)?,
        None => cfg.policy.rotate_time_s,
    };
    let model = match &flags.fading_model {
        Some(s) => crate::config::FadingChoice::parse(s)?,
        None => cfg.fading_choice()?,
    };
    let sigma_arg = flags.sigma_est.unwrap_or(super::SigmaEstArg::Proposed);
    let sigma_est = super::sigma_source(&cfg, sigma_arg, &[d])?.resolve(d)?;
    let channel = cfg.channel_at(
        d,
        sigma_est,
        cfg.optical.beam_divergence_rad,
        model,
        cfg.optical.visibility_m,
    )?;

    let p_out = outage_probability(
        &channel,
        &OutageMethod::Quadrature {
            rel_tol: cfg.outage_sweep.rel_tol,
        },
    )?
    .probability;
    let t_re = mean_time_re(p_out, t0, t_rot)?;
    let single = mean_time_single(
        &channel,
        t0,
        t_rot,
        cfg.policy_run.mean_trials,
        cfg.run.seed,
    )?;
    let recommended = recommend_policy(t_re, &single);

    // Tail grids aligned to attempt boundaries of the re-estimation cycle.
    let attempts = cfg.policy_run.tail_attempts;
    let t_grid: Vec<f64> = (0..=attempts).map(|j| j as f64 * (t0 + t_rot)).collect();
    let re_tail = acquisition_tail(
        &channel,
        PolicyKind::ReEstimate,
        t0,
        t_rot,
        &t_grid,
        cfg.policy_run.tail_trials,
        cfg.run.seed,
    )?;
    let single_tail = acquisition_tail(
        &channel,
        PolicyKind::SingleEstimate,
        t0,
        t_rot,
        &t_grid,
        cfg.policy_run.tail_trials,
        cfg.run.seed,
    )?;

    let mut table = Table::new(&["policy", "t_seconds", "p_not_connected", "stderr"]);
    for p in &re_tail {
        table.push_row(vec![
            "reestimate".into(),
            fmt_f64(p.time),
            fmt_f64(p.probability),
            fmt_f64(p.stderr),
        ]);
    }
    for p in &single_tail {
        table.push_row(vec![
            "single".into(),
            fmt_f64(p.time),
            fmt_f64(p.probability),
            fmt_f64(p.stderr),
        ]);
    }
    for &t in &t_grid {
        table.push_row(vec![
            "reestimate_closed_form".into(),
            fmt_f64(t),
            fmt_f64(reestimate_tail(p_out, t0, t_rot, t)),
            fmt_f64(0.0),
        ]);
    }
    let csv_path = manifest.record(&out.join("policy_tails.csv"));
    table.write(&csv_path)?;

    let plot = LinePlot {
        title: format!("Link not yet connected at time t (t0 = {t0} s, t_rot = {t_rot} s)"),
        x_label: "t (s)".into(),
        y_label: "P[t_acq > t]".into(),
        log_x: false,
        log_y: true,
        series: Vec::new(),
    };
    let svg_path = manifest.record(&out.join("policy_tails.svg"));
    crate::svg::write_plot(
        &csv_path,
        &svg_path,
        "t_seconds",
        "p_not_connected",
        Some("policy"),
        plot,
    )?;

    let summary = Summary {
        coherence_time_s: coherence,
        t0_s: t0,
        t_rot_s: t_rot,
        link_distance_m: d,
        fading_model: model.name().to_string(),
        sigma_est: sigma_arg.label(),
        sigma_est_rad: sigma_est,
        outage_probability: p_out,
        mean_time_reestimate_s: t_re,
        mean_time_single: match single {
            SingleEstimateMean::Finite {
                mean,
                stderr,
                flagged_fraction,
            } => SingleMeanSummary::Finite {
                mean_s: mean,
                stderr_s: stderr,
                flagged_fraction,
            },
            SingleEstimateMean::Divergent { flagged_fraction } => {
                SingleMeanSummary::Divergent { flagged_fraction }
            }
        },
        recommended_policy: match recommended {
            PolicyKind::ReEstimate => "reestimate".to_string(),
            PolicyKind::SingleEstimate => "single".to_string(),
        },
    };
    let summary_path = manifest.record(&out.join("summary_policy.json"));
    std::fs::write(&summary_path, serde_json::to_string_pretty(&summary)?)?;
    let manifest_path = manifest.write(&out)?;
    for p in &manifest.outputs {
        println!("wrote {p}");
    }
    println!("wrote {}", manifest_path.display());
    println!(
        "t0 = {t0} s, t_rot = {t_rot} s, P_out = {p_out:.6}, recommended policy: {}",
        summary.recommended_policy
    );
    Ok(())
}
