//! Coarse-pointing outage probability.
//!
//! Outage is the event that the received beacon power falls below the
//! detection threshold, averaged over beam displacement and fading:
//! `P_out = E_r[ P(h_a < c(r)) ]` with `c(r)` the threshold fading level at
//! displacement `r`. Both a Monte Carlo estimator and a certified nested
//! quadrature are provided; deep-tail work (outage below ~1e-6) belongs to
//! the quadrature route.

use alloc::vec::Vec;
#[allow(unused_imports)] // needed by the no_std build; test builds see std inherent methods
use num_traits::Float;

use crate::optical_channel::{
    attenuation_gain, displacement_sample, fading_cdf, fading_sample, fading_survivor,
    pointing_gain, received_power, AttenuationParams, FadingParams, LinkBudget, PointingParams,
};
use crate::{quad, stream, Error, Result};

/// Inner tolerance for fading CDF evaluations inside quadrature.
const CDF_TOL: f64 = 1e-10;

/// Full channel description for one beacon link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    pub attenuation: AttenuationParams,
    pub fading: FadingParams,
    pub pointing: PointingParams,
    pub budget: LinkBudget,
}

impl ChannelModel {
    pub fn new(
        attenuation: AttenuationParams,
        fading: FadingParams,
        pointing: PointingParams,
        budget: LinkBudget,
    ) -> Result<Self> {
        fading.validate()?;
        if (attenuation.link_distance - pointing.link_distance).abs()
            > 1e-9 * attenuation.link_distance
        {
            return Err(Error::InvalidParameter {
                name: "link_distance",
                reason: "attenuation and pointing distances must agree",
            });
        }
        Ok(Self {
            attenuation,
            fading,
            pointing,
            budget,
        })
    }

    /// Fading level below which the link is in outage at displacement `r`:
    /// `c(r) = P_th / (h_l h_p(r) R P_T)`. Returns `inf` once the pointing
    /// gain underflows.
    pub fn threshold_ratio(&self, r: f64) -> f64 {
        let h_l = attenuation_gain(&self.attenuation);
        let h_p = pointing_gain(&self.pointing, r);
        let denom = h_l * h_p * self.budget.responsivity * self.budget.tx_power;
        if denom <= 0.0 {
            f64::INFINITY
        } else {
            self.budget.threshold_power / denom
        }
    }

    /// Replace the beam divergence, keeping everything else.
    pub fn with_divergence(&self, beam_divergence: f64) -> Result<Self> {
        let p = self.pointing;
        Ok(Self {
            pointing: PointingParams::new(
                beam_divergence,
                p.link_distance,
                p.jitter_std,
                p.estimation_std,
                p.receiver_radius,
            )?,
            ..*self
        })
    }

    /// Move the whole channel to a new link distance with a new estimation
    /// error; the attenuation coefficient is retained.
    pub fn at_distance(&self, link_distance: f64, estimation_std: f64) -> Result<Self> {
        let p = self.pointing;
        Ok(Self {
            attenuation: AttenuationParams::new(self.attenuation.attenuation_coeff, link_distance)?,
            pointing: PointingParams::new(
                p.beam_divergence,
                link_distance,
                p.jitter_std,
                estimation_std,
                p.receiver_radius,
            )?,
            ..*self
        })
    }
}

/// Conditional outage probability `F(r) = P[h_a < c(r)]`.
pub fn conditional_outage(channel: &ChannelModel, r: f64) -> f64 {
    fading_cdf(&channel.fading, channel.threshold_ratio(r), CDF_TOL)
}

/// Conditional success probability `1 - F(r)`, computed through the fading
/// survivor so it stays accurate when `F(r)` is close to 1.
pub fn conditional_success(channel: &ChannelModel, r: f64) -> f64 {
    fading_survivor(&channel.fading, channel.threshold_ratio(r), CDF_TOL)
}

/// How to evaluate the outage integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OutageMethod {
    MonteCarlo { trials: u64, seed: u64 },
    Quadrature { rel_tol: f64 },
}

/// Outage estimate with its uncertainty: the binomial standard error for
/// Monte Carlo, or the certified quadrature-plus-truncation bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub probability: f64,
    pub uncertainty: f64,
}

/// Outage probability of the channel by the requested method.
pub fn outage_probability(channel: &ChannelModel, method: &OutageMethod) -> Result<OutageEstimate> {
    match *method {
        OutageMethod::MonteCarlo { trials, seed } => {
            if trials < 1 {
                return Err(Error::InvalidParameter {
                    name: "trials",
                    reason: "must be at least 1",
                });
            }
            Ok(outage_monte_carlo(channel, trials, seed))
        }
        OutageMethod::Quadrature { rel_tol } => {
            if !(rel_tol > 0.0 && rel_tol < 1.0) {
                return Err(Error::InvalidParameter {
                    name: "rel_tol",
                    reason: "must lie in (0, 1)",
                });
            }
            Ok(outage_quadrature(channel, rel_tol))
        }
    }
}

fn outage_monte_carlo(channel: &ChannelModel, trials: u64, seed: u64) -> OutageEstimate {
    let mut rng = stream::substream(seed, &[0x0u64]);
    let h_l = attenuation_gain(&channel.attenuation);
    let mut failures = 0u64;
    for _ in 0..trials {
        let r = displacement_sample(&channel.pointing, &mut rng);
        let h_a = fading_sample(&channel.fading, &mut rng);
        let h_p = pointing_gain(&channel.pointing, r);
        if received_power(&channel.budget, h_l, h_a, h_p) < channel.budget.threshold_power {
            failures += 1;
        }
    }
    let p = failures as f64 / trials as f64;
    OutageEstimate {
        probability: p,
        uncertainty: (p * (1.0 - p) / trials as f64).sqrt(),
    }
}

fn outage_quadrature(channel: &ChannelModel, rel_tol: f64) -> OutageEstimate {
    let sigma_d = channel.pointing.displacement_std();
    let integrand = |r: f64| {
        let f = conditional_outage(channel, r);
        r / (sigma_d * sigma_d) * (-r * r / (2.0 * sigma_d * sigma_d)).exp() * f
    };
    // Rayleigh tail inversion for the initial truncation radius, then extend
    // until the neglected mass (bounded by F <= 1) is small relative to the
    // running estimate.
    let mut r_max = sigma_d * (2.0 * (10.0 / rel_tol).ln()).sqrt();
    let mut result = quad::integrate(&integrand, 0.0, r_max, rel_tol / 2.0, f64::MIN_POSITIVE);
    let mut value = result.value.max(0.0);
    let mut quad_err = result.error;
    let mut tail_bound = (-r_max * r_max / (2.0 * sigma_d * sigma_d)).exp();
    for _ in 0..8 {
        if tail_bound <= rel_tol * value.max(f64::MIN_POSITIVE) / 10.0 || r_max > 40.0 * sigma_d {
            break;
        }
        let target = (rel_tol * value.max(1e-280) / 10.0).max(1e-290);
        let r_next = (sigma_d * (2.0 * (1.0 / target).ln()).sqrt()).min(41.0 * sigma_d);
        result = quad::integrate(&integrand, r_max, r_next, rel_tol / 2.0, f64::MIN_POSITIVE);
        value = (value + result.value).max(0.0);
        quad_err += result.error;
        r_max = r_next;
        tail_bound = (-r_max * r_max / (2.0 * sigma_d * sigma_d)).exp();
    }
    OutageEstimate {
        probability: value.clamp(0.0, 1.0),
        uncertainty: quad_err + tail_bound,
    }
}

/// Outage versus beam divergence, with the minimizing angle.
#[derive(Debug, Clone, PartialEq)]
pub struct OutageCurve {
    pub divergence_grid: Vec<f64>,
    pub outage: Vec<f64>,
    pub uncertainty: Vec<f64>,
    pub argmin_divergence: f64,
    pub min_outage: f64,
}

/// Evaluate the outage at every divergence in `grid` (increasing), rebuilding
/// the on-axis gain per point. Monte Carlo points get independent substreams
/// derived from the grid index.
pub fn divergence_sweep(
    channel: &ChannelModel,
    grid: &[f64],
    method: &OutageMethod,
) -> Result<OutageCurve> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "must be nonempty",
        });
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "must be strictly increasing",
        });
    }
    let mut outage = Vec::with_capacity(grid.len());
    let mut uncertainty = Vec::with_capacity(grid.len());
    for (i, &theta) in grid.iter().enumerate() {
        let ch = channel.with_divergence(theta)?;
        let point_method = match *method {
            OutageMethod::MonteCarlo { trials, seed } => OutageMethod::MonteCarlo {
                trials,
                seed: stream::derive_seed(seed, &[i as u64]),
            },
            q => q,
        };
        let est = outage_probability(&ch, &point_method)?;
        outage.push(est.probability);
        uncertainty.push(est.uncertainty);
    }
    let argmin = (0..grid.len())
        .min_by(|&a, &b| outage[a].partial_cmp(&outage[b]).unwrap())
        .unwrap();
    Ok(OutageCurve {
        divergence_grid: grid.to_vec(),
        outage: outage.clone(),
        uncertainty,
        argmin_divergence: grid[argmin],
        min_outage: outage[argmin],
    })
}

/// Where the pointing-error std used by the outage model comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum SigmaEstSource {
    /// A fixed angular std in radians.
    Fixed(f64),
    /// GPS-only pointing: `position_std / distance`.
    GpsPrior { position_std: f64 },
    /// Lookup keyed by distance, e.g. produced by the estimator sweep.
    Table(Vec<(f64, f64)>),
}

impl SigmaEstSource {
    /// Estimation-error std at the given link distance. Table lookups take
    /// the nearest distance entry.
    pub fn resolve(&self, distance: f64) -> Result<f64> {
        match self {
            SigmaEstSource::Fixed(v) => Ok(*v),
            SigmaEstSource::GpsPrior { position_std } => Ok(position_std / distance),
            SigmaEstSource::Table(rows) => rows
                .iter()
                .min_by(|a, b| {
                    (a.0 - distance)
                        .abs()
                        .partial_cmp(&(b.0 - distance).abs())
                        .unwrap()
                })
                .map(|r| r.1)
                .ok_or(Error::InvalidParameter {
                    name: "sigma_est_table",
                    reason: "empty lookup table",
                }),
        }
    }
}

/// One distance in the distance sweep: best outage for the proposed and
/// GPS-only pointing accuracies, and their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceSweepRow {
    pub distance: f64,
    pub min_outage_proposed: f64,
    pub argmin_divergence_proposed: f64,
    pub min_outage_gps: f64,
    pub argmin_divergence_gps: f64,
    pub reduction_factor: f64,
}

/// Per-distance divergence sweeps for both pointing-accuracy sources.
pub fn distance_sweep(
    template: &ChannelModel,
    theta_grid: &[f64],
    distances: &[f64],
    method: &OutageMethod,
    proposed: &SigmaEstSource,
    gps: &SigmaEstSource,
) -> Result<Vec<DistanceSweepRow>> {
    if distances.is_empty() || distances.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter {
            name: "distances",
            reason: "must be nonempty and strictly increasing",
        });
    }
    let mut rows = Vec::with_capacity(distances.len());
    for &d in distances {
        let ch_p = template.at_distance(d, proposed.resolve(d)?)?;
        let ch_g = template.at_distance(d, gps.resolve(d)?)?;
        let curve_p = divergence_sweep(&ch_p, theta_grid, method)?;
        let curve_g = divergence_sweep(&ch_g, theta_grid, method)?;
        rows.push(DistanceSweepRow {
            distance: d,
            min_outage_proposed: curve_p.min_outage,
            argmin_divergence_proposed: curve_p.argmin_divergence,
            min_outage_gps: curve_g.min_outage,
            argmin_divergence_gps: curve_g.argmin_divergence,
            reduction_factor: curve_g.min_outage / curve_p.min_outage,
        });
    }
    Ok(rows)
}
