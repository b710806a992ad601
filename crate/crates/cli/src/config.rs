//! Scenario configuration: a single TOML file with nested sections mirroring
//! the model types. Parsing is strict — unknown keys are rejected and every
//! field is required — because a silently ignored or defaulted physics
//! parameter is the easiest way to produce a wrong figure.

use std::path::Path;

use lenspoint_core::estimator::RfBudget;
use lenspoint_core::lens_array::{ArrayShape, LensArrayConfig};
use lenspoint_core::optical_channel::{
    AttenuationParams, FadingParams, LinkBudget, PointingParams,
};
use lenspoint_core::outage::ChannelModel;
use lenspoint_core::policy::CoherenceParams;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config parse error in {path}: {source}")]
    Parse {
        path: String,
        source: Box<toml::de::Error>,
    },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub array: ArraySection,
    pub rf: RfSection,
    pub prior: PriorSection,
    pub optical: OpticalSection,
    pub policy: PolicySection,
    pub estimator_sweep: EstimatorSweepSection,
    pub outage_sweep: OutageSweepSection,
    pub policy_run: PolicyRunSection,
    pub run: RunSection,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ArraySection {
    pub n_antennas: usize,
    pub lens_diameter_m: f64,
    pub antenna_spacing_m: f64,
    pub wavelength_m: f64,
    pub focal_length_m: f64,
    /// "arc" or "linear".
    pub shape: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RfSection {
    pub reference_gain: f64,
    pub reference_distance_m: f64,
    pub noise_std: f64,
    pub chain_count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PriorSection {
    pub gps_position_std_m: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OpticalSection {
    pub wavelength_m: f64,
    pub visibility_m: f64,
    /// "lognormal" or "gammagamma".
    pub fading: String,
    pub log_amp_std: f64,
    pub alpha: f64,
    pub beta: f64,
    pub receiver_radius_m: f64,
    pub jitter_std_rad: f64,
    pub link_distance_m: f64,
    pub tx_power_w: f64,
    pub threshold_power_w: f64,
    pub responsivity: f64,
    pub beam_divergence_rad: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PolicySection {
    pub structure_constant: f64,
    pub transverse_wind_mps: f64,
    pub rotate_time_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EstimatorSweepSection {
    pub distances_m: Vec<f64>,
    pub chain_counts: Vec<usize>,
    pub trials: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutageSweepSection {
    pub theta_min_rad: f64,
    pub theta_max_rad: f64,
    pub theta_points: usize,
    pub rel_tol: f64,
    pub mc_trials: u64,
    pub distances_m: Vec<f64>,
    /// Visibility used for the multi-distance sweep (harsh-weather figure).
    pub harsh_visibility_m: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PolicyRunSection {
    pub mean_trials: u64,
    pub tail_trials: u64,
    pub tail_attempts: u64,
    pub acquire_trials: u64,
    pub max_attempts: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub seed: u64,
    pub output_dir: String,
}

/// Fading model selection, possibly overridden on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FadingChoice {
    LogNormal,
    GammaGamma,
}

impl FadingChoice {
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "lognormal" => Ok(FadingChoice::LogNormal),
            "gammagamma" => Ok(FadingChoice::GammaGamma),
            other => Err(ConfigError::Invalid(format!(
                "unknown fading model `{other}` (expected `lognormal` or `gammagamma`)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FadingChoice::LogNormal => "lognormal",
            FadingChoice::GammaGamma => "gammagamma",
        }
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let cfg: ScenarioConfig = toml::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.display().to_string(),
            source: Box::new(source),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Run every model constructor so invariant violations surface with the
    /// offending parameter name.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.lens_array()?;
        self.rf_budget()?;
        self.fading_params(self.fading_choice()?)?;
        self.channel_at(
            self.optical.link_distance_m,
            1e-4,
            self.optical.beam_divergence_rad,
            self.fading_choice()?,
            self.optical.visibility_m,
        )?;
        self.coherence()?;
        if self.prior.gps_position_std_m <= 0.0 {
            return Err(ConfigError::Invalid(
                "prior.gps_position_std_m must be strictly positive".into(),
            ));
        }
        if self.outage_sweep.theta_min_rad >= self.outage_sweep.theta_max_rad
            || self.outage_sweep.theta_points < 2
        {
            return Err(ConfigError::Invalid(
                "outage_sweep theta grid must have theta_min < theta_max and >= 2 points".into(),
            ));
        }
        if self.policy.rotate_time_s < 0.0 {
            return Err(ConfigError::Invalid(
                "policy.rotate_time_s must be non-negative".into(),
            ));
        }
        Ok(())
    }

    pub fn fading_choice(&self) -> Result<FadingChoice, ConfigError> {
        FadingChoice::parse(&self.optical.fading)
    }

    pub fn lens_array(&self) -> Result<LensArrayConfig, ConfigError> {
        let shape = match self.array.shape.as_str() {
            "arc" => ArrayShape::Arc,
            "linear" => ArrayShape::Linear,
            other => {
                return Err(ConfigError::Invalid(format!(
                    "unknown array shape `{other}` (expected `arc` or `linear`)"
                )))
            }
        };
        LensArrayConfig::new(
            self.array.n_antennas,
            self.array.lens_diameter_m,
            self.array.antenna_spacing_m,
            self.array.wavelength_m,
            self.array.focal_length_m,
            shape,
        )
        .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn rf_budget(&self) -> Result<RfBudget, ConfigError> {
        RfBudget::new(
            self.rf.reference_gain,
            self.rf.reference_distance_m,
            self.rf.noise_std,
        )
        .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn fading_params(&self, choice: FadingChoice) -> Result<FadingParams, ConfigError> {
        let p = match choice {
            FadingChoice::LogNormal => FadingParams::LogNormal {
                log_amp_std: self.optical.log_amp_std,
            },
            FadingChoice::GammaGamma => FadingParams::GammaGamma {
                alpha: self.optical.alpha,
                beta: self.optical.beta,
            },
        };
        p.validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(p)
    }

    /// Assemble the optical channel at the given distance, estimation-error
    /// std, and beam divergence.
    pub fn channel_at(
        &self,
        distance: f64,
        estimation_std: f64,
        beam_divergence: f64,
        fading: FadingChoice,
        visibility: f64,
    ) -> Result<ChannelModel, ConfigError> {
        let attenuation =
            AttenuationParams::from_visibility(visibility, self.optical.wavelength_m, distance)
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let pointing = PointingParams::new(
            beam_divergence,
            distance,
            self.optical.jitter_std_rad,
            estimation_std,
            self.optical.receiver_radius_m,
        )
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let budget = LinkBudget::new(
            self.optical.tx_power_w,
            self.optical.threshold_power_w,
            self.optical.responsivity,
        )
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        ChannelModel::new(attenuation, self.fading_params(fading)?, pointing, budget)
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    /// Coherence parameters for the configured optical link.
    pub fn coherence(&self) -> Result<CoherenceParams, ConfigError> {
        CoherenceParams::from_wavelength(
            self.optical.wavelength_m,
            self.policy.structure_constant,
            self.optical.link_distance_m,
            self.policy.transverse_wind_mps,
        )
        .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    /// Log-spaced beam-divergence grid for the outage sweeps.
    pub fn theta_grid(&self) -> Vec<f64> {
        let s = &self.outage_sweep;
        let n = s.theta_points;
        (0..n)
            .map(|i| {
                let frac = i as f64 / (n - 1) as f64;
                s.theta_min_rad * (s.theta_max_rad / s.theta_min_rad).powf(frac)
            })
            .collect()
    }

    /// Assumptions that are configuration rather than physics inputs, echoed
    /// in every run manifest.
    pub fn assumptions(&self) -> Vec<String> {
        vec![
            format!(
                "receiver_radius_m = {} is an assumed aperture; not a measured value",
                self.optical.receiver_radius_m
            ),
            format!(
                "optical wavelength_m = {} assumed for the Kim visibility model",
                self.optical.wavelength_m
            ),
            format!(
                "RF budget (reference_gain = {}, reference_distance_m = {}, noise_std = {}) is a configured link model",
                self.rf.reference_gain, self.rf.reference_distance_m, self.rf.noise_std
            ),
            "lens geometry (n_antennas, lens_diameter_m, antenna_spacing_m, focal_length_m) is configuration"
                .to_string(),
        ]
    }
}
