//! `validate-config`: parse and validate a scenario file, then echo the
//! derived physical quantities.

use std::path::Path;

use anyhow::Result;
use lenspoint_core::optical_channel::{attenuation_gain, kim_attenuation_coeff};
use lenspoint_core::policy::coherence_time;

use crate::config::ScenarioConfig;

pub fn run(config_path: &Path) -> Result<()> {
    let cfg = ScenarioConfig::load(config_path)?;
    let d = cfg.optical.link_distance_m;
    let sigma = kim_attenuation_coeff(cfg.optical.visibility_m, cfg.optical.wavelength_m)?;
    let channel = cfg.channel_at(
        d,
        1e-4,
        cfg.optical.beam_divergence_rad,
        cfg.fading_choice()?,
        cfg.optical.visibility_m,
    )?;
    let t0 = coherence_time(&cfg.coherence()?);
    println!("config OK: {}", config_path.display());
    println!("  fading model           : {}", cfg.optical.fading);
    println!("  link distance          : {d} m");
    println!("  Kim attenuation coeff  : {sigma:.6e} 1/m");
    println!(
        "  attenuation gain h_l   : {:.6}",
        attenuation_gain(&channel.attenuation)
    );
    println!(
        "  GPS prior angle std    : {:.6e} rad",
        cfg.prior.gps_position_std_m / d
    );
    println!(
        "  beamwidth at receiver  : {:.3} m (theta_div = {} rad)",
        channel.pointing.beamwidth(),
        cfg.optical.beam_divergence_rad
    );
    println!(
        "  on-axis pointing gain  : {:.6e}",
        channel.pointing.center_gain()
    );
    println!("  coherence time t0      : {t0:.6e} s");
    println!(
        "  rotate time t_rot      : {:.6e} s",
        cfg.policy.rotate_time_s
    );
    Ok(())
}
