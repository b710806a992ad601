//! `estimator-sweep`: estimation accuracy versus distance and chain count.

use std::path::Path;

use anyhow::Result;
use lenspoint_core::estimator::estimation_std_sweep;

use crate::manifest::RunManifest;
use crate::svg::{LinePlot, Series};
use crate::table::{fmt_f64, Table};

pub fn run(config_path: &Path, out_dir: Option<&Path>, trials: Option<u64>) -> Result<()> {
    let (cfg, out) = super::prepare(config_path, out_dir)?;
    let trials = trials.unwrap_or(cfg.estimator_sweep.trials);
    let rows = estimation_std_sweep(
        &cfg.lens_array()?,
        &cfg.rf_budget()?,
        cfg.prior.gps_position_std_m,
        &cfg.estimator_sweep.distances_m,
        &cfg.estimator_sweep.chain_counts,
        trials,
        cfg.run.seed,
    )?;

    let mut table = Table::new(&[
        "distance_m",
        "chain_count",
        "std_proposed_rad",
        "std_proposed_m",
        "std_gps_m",
        "trials",
    ]);
    for r in &rows {
        table.push_row(vec![
            fmt_f64(r.distance),
            r.chain_count.to_string(),
            fmt_f64(r.std_proposed_rad),
            fmt_f64(r.std_proposed_m),
            fmt_f64(r.std_gps_m),
            r.trials.to_string(),
        ]);
    }
    let mut manifest = RunManifest::new("estimator-sweep", config_path, &cfg)?;
    let csv_path = manifest.record(&out.join("estimator_sweep.csv"));
    table.write(&csv_path)?;

    // Plot built from the CSV just written: one series per chain count from
    // the proposed column, plus the GPS-only baseline.
    let back = Table::read(&csv_path)?;
    let di = back.column_index("distance_m")?;
    let ci = back.column_index("chain_count")?;
    let pi = back.column_index("std_proposed_m")?;
    let gi = back.column_index("std_gps_m")?;
    let mut plot = LinePlot {
        title: "Estimator accuracy vs distance".into(),
        x_label: "link distance (m)".into(),
        y_label: "position error std (m)".into(),
        log_x: true,
        log_y: true,
        series: Vec::new(),
    };
    let mut chains: Vec<String> = Vec::new();
    for r in &back.rows {
        if !chains.contains(&r[ci]) {
            chains.push(r[ci].clone());
        }
    }
    for chain in &chains {
        let points = back
            .rows
            .iter()
            .filter(|r| &r[ci] == chain)
            .filter_map(|r| match (r[di].parse(), r[pi].parse()) {
                (Ok(x), Ok(y)) => Some((x, y)),
                _ => None,
            })
            .collect();
        plot.series.push(Series {
            name: format!("proposed, k={chain}"),
            points,
        });
    }
    if let Some(first_chain) = chains.first() {
        let points = back
            .rows
            .iter()
            .filter(|r| &r[ci] == first_chain)
            .filter_map(|r| match (r[di].parse(), r[gi].parse()) {
                (Ok(x), Ok(y)) => Some((x, y)),
                _ => None,
            })
            .collect();
        plot.series.push(Series {
            name: "GPS only".into(),
            points,
        });
    }
    let svg_path = manifest.record(&out.join("estimator_sweep.svg"));
    std::fs::write(&svg_path, plot.render()?)?;

    let manifest_path = manifest.write(&out)?;
    println!("wrote {}", csv_path.display());
    println!("wrote {}", svg_path.display());
    println!("wrote {}", manifest_path.display());
    Ok(())
}
