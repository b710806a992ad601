//! `outage-sweep`: outage probability versus beam divergence at the
//! configured link distance, and the minimum-outage reduction over distance
//! under harsh-weather visibility.

use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use lenspoint_core::outage::{distance_sweep, divergence_sweep, OutageMethod, SigmaEstSource};
use serde::Serialize;

use crate::config::{FadingChoice, ScenarioConfig};
use crate::manifest::RunManifest;
use crate::svg::{LinePlot, Series};
use crate::table::{fmt_f64, Table};

#[derive(Debug, Clone)]
pub struct Flags {
    pub distances: Option<Vec<f64>>,
    pub fading_model: Option<String>,
    pub sigma_est: Option<super::SigmaEstArg>,
    pub method: Option<String>,
    pub mc_trials: Option<u64>,
}

#[derive(Debug, Serialize)]
struct CurveSummary {
    model: String,
    sigma_est: String,
    sigma_est_rad: f64,
    argmin_divergence_rad: f64,
    min_outage: f64,
}

#[derive(Debug, Serialize)]
struct DistanceSummary {
    model: String,
    distance_m: f64,
    min_outage_proposed: f64,
    argmin_theta_proposed_rad: f64,
    min_outage_gps: f64,
    argmin_theta_gps_rad: f64,
    reduction_factor: f64,
}

#[derive(Debug, Serialize)]
struct Summary {
    link_distance_m: f64,
    visibility_m: f64,
    harsh_visibility_m: f64,
    method: String,
    curves: Vec<CurveSummary>,
    distance_sweep: Vec<DistanceSummary>,
}

fn resolve_models(cfg: &ScenarioConfig, flag: &Option<String>) -> Result<Vec<FadingChoice>> {
    match flag.as_deref() {
        None => Ok(vec![cfg.fading_choice()?]),
        Some("both") => Ok(vec![FadingChoice::LogNormal, FadingChoice::GammaGamma]),
        Some(s) => Ok(vec![FadingChoice::parse(s)?]),
    }
}

fn resolve_method(cfg: &ScenarioConfig, flags: &Flags) -> Result<(OutageMethod, String)> {
    match flags.method.as_deref().unwrap_or("quadrature") {
        "quadrature" => Ok((
            OutageMethod::Quadrature {
                rel_tol: cfg.outage_sweep.rel_tol,
            },
            "quadrature".to_string(),
        )),
        "montecarlo" => Ok((
            OutageMethod::MonteCarlo {
                trials: flags.mc_trials.unwrap_or(cfg.outage_sweep.mc_trials),
                seed: cfg.run.seed,
            },
            "montecarlo".to_string(),
        )),
        other => bail!("unknown method `{other}` (expected `quadrature` or `montecarlo`)"),
    }
}

pub fn run(config_path: &Path, out_dir: Option<&Path>, flags: Flags) -> Result<()> {
    let (cfg, out) = super::prepare(config_path, out_dir)?;
    let mut manifest = RunManifest::new("outage-sweep", config_path, &cfg)?;
    let models = resolve_models(&cfg, &flags.fading_model)?;
    let (method, method_name) = resolve_method(&cfg, &flags)?;
    let d0 = cfg.optical.link_distance_m;
    let sweep_distances = flags
        .distances
        .clone()
        .unwrap_or_else(|| cfg.outage_sweep.distances_m.clone());
    let theta_grid = cfg.theta_grid();

    // Pointing-accuracy sources evaluated at the curve distance and at every
    // sweep distance.
    let mut all_distances = vec![d0];
    all_distances.extend_from_slice(&sweep_distances);
    all_distances.sort_by(|a, b| a.partial_cmp(b).unwrap());
    all_distances.dedup();
    let sources: Vec<(String, SigmaEstSource)> = match flags.sigma_est {
        Some(arg) => vec![(arg.label(), super::sigma_source(&cfg, arg, &all_distances)?)],
        None => vec![
            (
                "proposed".to_string(),
                super::sigma_source(&cfg, super::SigmaEstArg::Proposed, &all_distances)?,
            ),
            (
                "gps".to_string(),
                super::sigma_source(&cfg, super::SigmaEstArg::Gps, &all_distances)?,
            ),
        ],
    };

    let mut summary = Summary {
        link_distance_m: d0,
        visibility_m: cfg.optical.visibility_m,
        harsh_visibility_m: cfg.outage_sweep.harsh_visibility_m,
        method: method_name.clone(),
        curves: Vec::new(),
        distance_sweep: Vec::new(),
    };
    let mut curve_paths: Vec<(String, PathBuf)> = Vec::new();

    for model in &models {
        for (source_name, source) in &sources {
            let sigma_est = source.resolve(d0)?;
            let channel = cfg.channel_at(
                d0,
                sigma_est,
                theta_grid[0],
                *model,
                cfg.optical.visibility_m,
            )?;
            let curve = divergence_sweep(&channel, &theta_grid, &method)?;
            let mut table = Table::new(&["theta_div_rad", "p_out", "stderr", "method"]);
            for i in 0..curve.divergence_grid.len() {
                table.push_row(vec![
                    fmt_f64(curve.divergence_grid[i]),
                    fmt_f64(curve.outage[i]),
                    fmt_f64(curve.uncertainty[i]),
                    method_name.clone(),
                ]);
            }
            let name = format!("outage_curve_{}_{}.csv", model.name(), source_name);
            let path = manifest.record(&out.join(&name));
            table.write(&path)?;
            curve_paths.push((format!("{} / {}", model.name(), source_name), path));
            summary.curves.push(CurveSummary {
                model: model.name().to_string(),
                sigma_est: source_name.clone(),
                sigma_est_rad: sigma_est,
                argmin_divergence_rad: curve.argmin_divergence,
                min_outage: curve.min_outage,
            });
        }

        // Distance sweep under harsh-weather visibility, proposed vs GPS.
        if sources.len() == 2 {
            let harsh_template = cfg.channel_at(
                d0,
                1e-4,
                theta_grid[0],
                *model,
                cfg.outage_sweep.harsh_visibility_m,
            )?;
            let rows = distance_sweep(
                &harsh_template,
                &theta_grid,
                &sweep_distances,
                &method,
                &sources[0].1,
                &sources[1].1,
            )?;
            let mut table = Table::new(&[
                "distance_m",
                "min_outage_proposed",
                "argmin_theta_proposed_rad",
                "min_outage_gps",
                "argmin_theta_gps_rad",
                "reduction_factor",
            ]);
            for r in &rows {
                table.push_row(vec![
                    fmt_f64(r.distance),
                    fmt_f64(r.min_outage_proposed),
                    fmt_f64(r.argmin_divergence_proposed),
                    fmt_f64(r.min_outage_gps),
                    fmt_f64(r.argmin_divergence_gps),
                    fmt_f64(r.reduction_factor),
                ]);
                summary.distance_sweep.push(DistanceSummary {
                    model: model.name().to_string(),
                    distance_m: r.distance,
                    min_outage_proposed: r.min_outage_proposed,
                    argmin_theta_proposed_rad: r.argmin_divergence_proposed,
                    min_outage_gps: r.min_outage_gps,
                    argmin_theta_gps_rad: r.argmin_divergence_gps,
                    reduction_factor: r.reduction_factor,
                });
            }
            let path = manifest.record(&out.join(format!("distance_sweep_{}.csv", model.name())));
            table.write(&path)?;
        }
    }

    // Combined divergence plot from the written curve CSVs.
    let mut plot = LinePlot {
        title: format!("Outage probability vs beam divergence at {d0} m"),
        x_label: "beam divergence (rad)".into(),
        y_label: "outage probability".into(),
        log_x: true,
        log_y: true,
        series: Vec::new(),
    };
    for (label, path) in &curve_paths {
        let t = Table::read(path)?;
        let xs = t.numeric_column("theta_div_rad")?;
        let ys = t.numeric_column("p_out")?;
        plot.series.push(Series {
            name: label.clone(),
            points: xs.into_iter().zip(ys).collect(),
        });
    }
    let svg_path = manifest.record(&out.join("outage_curves.svg"));
    std::fs::write(&svg_path, plot.render()?)?;

    let summary_path = manifest.record(&out.join("summary_outage-sweep.json"));
    std::fs::write(&summary_path, serde_json::to_string_pretty(&summary)?)?;
    let manifest_path = manifest.write(&out)?;
    for p in &manifest.outputs {
        println!("wrote {p}");
    }
    println!("wrote {}", manifest_path.display());
    Ok(())
}
