//! Acquisition-time analysis of the coarse-pointing loop.
//!
//! Two policies govern what happens after a failed beacon attempt: re-point
//! from a fresh estimate (each attempt costs the coherence time plus the
//! rotation time) or keep the first pointing and wait out the fading (one
//! rotation, then one coherence interval per attempt with the displacement
//! frozen). Mean acquisition times, tail distributions `P[t_acq > t]`, and a
//! full event simulation of the acquisition loop are provided.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // needed by the no_std build; test builds see std inherent methods
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::estimator::{map_estimate, GpsPrior, RfBudget};
use crate::lens_array::{select_antennas, simulate_observation, LensArrayConfig, SignalParams};
use crate::optical_channel::SurvivorTable;
use crate::optical_channel::{
    attenuation_gain, displacement_sample, fading_sample, pointing_gain, received_power,
};
use crate::outage::ChannelModel;
use crate::{stream, Error, Result};

/// Samples with conditional success below this are flagged as effectively
/// never acquiring.
pub const FLAG_EPSILON: f64 = 1e-12;
/// Flagged-sample mass above which the single-estimation mean is reported
/// divergent instead of as a number.
pub const FLAG_MASS_CAP: f64 = 1e-6;

/// Atmospheric coherence inputs. `optical_wavenumber` is `2 pi / lambda` of
/// the optical carrier; this `k` and the `path_length` belong to the optical
/// link, not to the RF array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceParams {
    pub optical_wavenumber: f64,
    /// Refractive-index structure constant, m^(-2/3).
    pub structure_constant: f64,
    pub path_length: f64,
    /// Wind speed transverse to the link, m/s.
    pub transverse_wind: f64,
}

impl CoherenceParams {
    pub fn new(
        optical_wavenumber: f64,
        structure_constant: f64,
        path_length: f64,
        transverse_wind: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("optical_wavenumber", optical_wavenumber),
            ("structure_constant", structure_constant),
            ("path_length", path_length),
            ("transverse_wind", transverse_wind),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be finite and strictly positive",
                });
            }
        }
        Ok(Self {
            optical_wavenumber,
            structure_constant,
            path_length,
            transverse_wind,
        })
    }

    pub fn from_wavelength(
        wavelength: f64,
        structure_constant: f64,
        path_length: f64,
        transverse_wind: f64,
    ) -> Result<Self> {
        Self::new(
            2.0 * PI / wavelength,
            structure_constant,
            path_length,
            transverse_wind,
        )
    }
}

/// Channel coherence time `t_0 = rho_0 / v_perp` with the atmospheric
/// correlation length `rho_0 = (1 / (2.91 k^2 Cn^2 L))^(3/5)`.
pub fn coherence_time(p: &CoherenceParams) -> f64 {
    let k2 = p.optical_wavenumber * p.optical_wavenumber;
    let rho = (1.0 / (2.91 * k2 * p.structure_constant * p.path_length)).powf(3.0 / 5.0);
    rho / p.transverse_wind
}

/// Mean acquisition time of the re-estimation policy,
/// `(t_0 + t_rot) / (1 - P_out)`.
pub fn mean_time_re(p_out: f64, t0: f64, t_rot: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p_out) {
        return Err(Error::NeverAcquires);
    }
    Ok((t0 + t_rot) / (1.0 - p_out))
}

/// Monte Carlo estimate of the single-estimation mean, or a divergence
/// report when too much displacement mass is effectively unacquirable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingleEstimateMean {
    Finite {
        mean: f64,
        stderr: f64,
        flagged_fraction: f64,
    },
    Divergent {
        flagged_fraction: f64,
    },
}

/// Monte Carlo mean of the single-estimation acquisition time,
/// `E_r[t_0 / (1 - F(r))] + t_rot`.
///
/// Samples with `1 - F(r) <= FLAG_EPSILON` are flagged; if their fraction
/// exceeds [`FLAG_MASS_CAP`] the expectation is reported divergent.
pub fn mean_time_single(
    channel: &ChannelModel,
    t0: f64,
    t_rot: f64,
    trials: u64,
    seed: u64,
) -> Result<SingleEstimateMean> {
    if trials < 1 {
        return Err(Error::InvalidParameter {
            name: "trials",
            reason: "must be at least 1",
        });
    }
    let mut rng = stream::substream(seed, &[0x51]);
    let displacements: Vec<f64> = (0..trials)
        .map(|_| displacement_sample(&channel.pointing, &mut rng))
        .collect();
    // Tabulate the survivor over the sampled threshold-ratio range; direct
    // quadrature per sample would dominate the runtime at these trial counts.
    let (c_min, c_max) = displacements
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |acc, &r| {
            let c = channel.threshold_ratio(r);
            if c.is_finite() {
                (acc.0.min(c), acc.1.max(c))
            } else {
                acc
            }
        });
    let table = SurvivorTable::new(&channel.fading, c_min.min(c_max), c_max.max(c_min), 800);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut flagged = 0u64;
    for &r in &displacements {
        let c = channel.threshold_ratio(r);
        let success = if c.is_finite() { table.eval(c) } else { 0.0 };
        if success <= FLAG_EPSILON {
            flagged += 1;
        }
        let value = t0 / success.max(f64::MIN_POSITIVE);
        sum += value;
        sum_sq += value * value;
    }
    let n = trials as f64;
    let flagged_fraction = flagged as f64 / n;
    if flagged_fraction > FLAG_MASS_CAP {
        return Ok(SingleEstimateMean::Divergent { flagged_fraction });
    }
    let mean = sum / n;
    let var = ((sum_sq - sum * sum / n) / (n - 1.0).max(1.0)).max(0.0);
    Ok(SingleEstimateMean::Finite {
        mean: mean + t_rot,
        stderr: (var / n).sqrt(),
        flagged_fraction,
    })
}

/// Acquisition policy after a failed beacon attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    /// Redo the estimate and re-point every attempt.
    ReEstimate,
    /// Keep the first pointing and wait for the channel to fluctuate.
    SingleEstimate,
}

/// Recommended policy: the smaller mean wins, with a divergent
/// single-estimation mean treated as infinite.
pub fn recommend_policy(mean_re: f64, single: &SingleEstimateMean) -> PolicyKind {
    match single {
        SingleEstimateMean::Divergent { .. } => PolicyKind::ReEstimate,
        SingleEstimateMean::Finite { mean, .. } => {
            if *mean < mean_re {
                PolicyKind::SingleEstimate
            } else {
                PolicyKind::ReEstimate
            }
        }
    }
}

/// Closed-form re-estimation tail:
/// `P[t_acq > t] = P_out^floor(t / (t0 + t_rot))`.
pub fn reestimate_tail(p_out: f64, t0: f64, t_rot: f64, t: f64) -> f64 {
    if t < 0.0 {
        return 1.0;
    }
    let attempts = (t / (t0 + t_rot)).floor();
    p_out.powf(attempts)
}

/// One point of a simulated tail curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailPoint {
    pub time: f64,
    pub probability: f64,
    pub stderr: f64,
}

/// Simulate `P[t_acq > t]` on `t_grid` for the given policy.
///
/// Re-estimation redraws the displacement every attempt; single-estimation
/// freezes it after the first. Fading is redrawn every coherence interval.
/// Trials that outlast the grid contribute to every tail point, so the curve
/// is exact on the grid without simulating beyond it.
pub fn acquisition_tail(
    channel: &ChannelModel,
    policy: PolicyKind,
    t0: f64,
    t_rot: f64,
    t_grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<Vec<TailPoint>> {
    if t_grid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "t_grid",
            reason: "must be nonempty",
        });
    }
    if trials < 1 {
        return Err(Error::InvalidParameter {
            name: "trials",
            reason: "must be at least 1",
        });
    }
    let t_max = t_grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let h_l = attenuation_gain(&channel.attenuation);
    let policy_tag = match policy {
        PolicyKind::ReEstimate => 0xacu64,
        PolicyKind::SingleEstimate => 0xadu64,
    };
    let max_attempts: u64 = match policy {
        PolicyKind::ReEstimate => (t_max / (t0 + t_rot)).floor() as u64 + 1,
        PolicyKind::SingleEstimate => ((t_max - t_rot).max(0.0) / t0).floor() as u64 + 1,
    };
    let mut exceed = alloc::vec![0u64; t_grid.len()];
    for trial in 0..trials {
        let mut rng = stream::substream(seed, &[policy_tag, trial]);
        let mut frozen_r = None;
        let mut t_acq = f64::INFINITY;
        for attempt in 1..=max_attempts {
            let r = match policy {
                PolicyKind::ReEstimate => displacement_sample(&channel.pointing, &mut rng),
                PolicyKind::SingleEstimate => *frozen_r
                    .get_or_insert_with(|| displacement_sample(&channel.pointing, &mut rng)),
            };
            let h_a = fading_sample(&channel.fading, &mut rng);
            let h_p = pointing_gain(&channel.pointing, r);
            let p_r = received_power(&channel.budget, h_l, h_a, h_p);
            if p_r >= channel.budget.threshold_power {
                t_acq = match policy {
                    PolicyKind::ReEstimate => attempt as f64 * (t0 + t_rot),
                    PolicyKind::SingleEstimate => t_rot + attempt as f64 * t0,
                };
                break;
            }
        }
        for (i, &t) in t_grid.iter().enumerate() {
            if t_acq > t {
                exceed[i] += 1;
            }
        }
    }
    Ok(t_grid
        .iter()
        .zip(&exceed)
        .map(|(&time, &count)| {
            let p = count as f64 / trials as f64;
            TailPoint {
                time,
                probability: p,
                stderr: (p * (1.0 - p) / trials as f64).sqrt(),
            }
        })
        .collect())
}

/// Everything the end-to-end acquisition simulation needs: the RF estimation
/// chain plus the optical channel at a fixed beam divergence.
#[derive(Debug, Clone)]
pub struct AcquisitionScenario {
    pub array: LensArrayConfig,
    pub rf: RfBudget,
    pub chain_count: usize,
    /// GPS position error std in meters.
    pub gps_position_std: f64,
    pub channel: ChannelModel,
    pub coherence_time: f64,
    pub rotate_time: f64,
    /// Attempt cap per trial; trials that hit it are reported censored.
    pub max_attempts: u64,
}

/// Result of one simulated acquisition trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcquisitionOutcome {
    /// Total elapsed time; for censored trials, the time spent before giving up.
    pub time: f64,
    pub attempts: u64,
    pub censored: bool,
}

/// Simulate the full coarse-pointing loop: per attempt, take a fresh GPS fix,
/// estimate the arrival angle per axis from a synthetic RF snapshot, point
/// with mechanical jitter on top of the estimation error, and test the
/// received beacon power against the threshold with fresh fading each
/// coherence interval.
///
/// The UAV is static per trial. Under the single-estimation policy the
/// estimate, jitter, and hence beam displacement are frozen after the first
/// attempt; re-estimation redraws all of them (including the GPS fix) every
/// attempt.
pub fn simulate_algorithm1(
    scenario: &AcquisitionScenario,
    policy: PolicyKind,
    trials: u64,
    seed: u64,
) -> Result<Vec<AcquisitionOutcome>> {
    if trials < 1 || scenario.max_attempts < 1 {
        return Err(Error::InvalidParameter {
            name: "trials/max_attempts",
            reason: "must be at least 1",
        });
    }
    let channel = &scenario.channel;
    let distance = channel.pointing.link_distance;
    let gps_angle_std = scenario.gps_position_std / distance;
    let gain = scenario.rf.gain_at(distance);
    let h_l = attenuation_gain(&channel.attenuation);
    let t0 = scenario.coherence_time;
    let t_rot = scenario.rotate_time;
    let policy_tag = match policy {
        PolicyKind::ReEstimate => 0xa1u64,
        PolicyKind::SingleEstimate => 0xa2u64,
    };

    let point_once = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<f64> {
        // One independent estimation per transverse axis; the dimension
        // extension of the array is mechanical, so each axis behaves as the
        // 1-D estimator.
        let mut angular_sq = 0.0;
        for _ in 0..2 {
            let gps_err = gps_angle_std * standard_normal(rng);
            let reading = gps_err.clamp(-1.4, 1.4);
            let selection = select_antennas(&scenario.array, reading, scenario.chain_count)?;
            let prior = GpsPrior::new(reading, gps_angle_std)?;
            let phase = rng.gen::<f64>() * 2.0 * PI;
            let signal = SignalParams::new(gain, phase, scenario.rf.noise_std, 0.0)?;
            let obs = simulate_observation(&scenario.array, &signal, selection, prior, rng)?;
            let est = map_estimate(&scenario.array, &obs)?;
            let jitter = channel.pointing.jitter_std * standard_normal(rng);
            let axis_err = est.angle + jitter; // true angle is 0
            angular_sq += axis_err * axis_err;
        }
        Ok(distance * angular_sq.sqrt())
    };

    let mut outcomes = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let mut rng = stream::substream(seed, &[policy_tag, trial]);
        let mut frozen_r: Option<f64> = None;
        let mut elapsed = 0.0;
        let mut result = None;
        for attempt in 1..=scenario.max_attempts {
            let r = match policy {
                PolicyKind::ReEstimate => point_once(&mut rng)?,
                PolicyKind::SingleEstimate => match frozen_r {
                    Some(r) => r,
                    None => {
                        let r = point_once(&mut rng)?;
                        frozen_r = Some(r);
                        r
                    }
                },
            };
            elapsed += match policy {
                PolicyKind::ReEstimate => t0 + t_rot,
                PolicyKind::SingleEstimate => {
                    if attempt == 1 {
                        t_rot + t0
                    } else {
                        t0
                    }
                }
            };
            let h_a = fading_sample(&channel.fading, &mut rng);
            let h_p = pointing_gain(&channel.pointing, r);
            if received_power(&channel.budget, h_l, h_a, h_p) >= channel.budget.threshold_power {
                result = Some(AcquisitionOutcome {
                    time: elapsed,
                    attempts: attempt,
                    censored: false,
                });
                break;
            }
        }
        outcomes.push(result.unwrap_or(AcquisitionOutcome {
            time: elapsed,
            attempts: scenario.max_attempts,
            censored: true,
        }));
    }
    Ok(outcomes)
}

#[inline]
fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optical_channel::{AttenuationParams, FadingParams, LinkBudget, PointingParams};
    use crate::outage::{outage_probability, OutageMethod};
    use approx::assert_relative_eq;

    fn channel(theta: f64, sigma_est: f64, fading: FadingParams) -> ChannelModel {
        ChannelModel::new(
            AttenuationParams::from_visibility(10_000.0, 1.55e-6, 2000.0).unwrap(),
            fading,
            PointingParams::new(theta, 2000.0, 3e-3, sigma_est, 0.10).unwrap(),
            LinkBudget::new(1.0, 1e-6, 0.5).unwrap(),
        )
        .unwrap()
    }

    const GG: FadingParams = FadingParams::GammaGamma {
        alpha: 8.05,
        beta: 1.03,
    };

    #[test]
    fn coherence_time_reference_value() {
        // Independently evaluated: 1550 nm, Cn2 = 1e-14, L = 2 km, v = 5 m/s.
        let p = CoherenceParams::from_wavelength(1.55e-6, 1e-14, 2000.0, 5.0).unwrap();
        assert_relative_eq!(
            coherence_time(&p),
            3.255805111413039e-3,
            max_relative = 1e-12
        );
        // Inverse proportionality to wind and the -3/5 power law in Cn2.
        let double_wind = CoherenceParams::from_wavelength(1.55e-6, 1e-14, 2000.0, 10.0).unwrap();
        assert_relative_eq!(
            coherence_time(&double_wind),
            coherence_time(&p) / 2.0,
            max_relative = 1e-14
        );
        let stronger = CoherenceParams::from_wavelength(1.55e-6, 2e-14, 2000.0, 5.0).unwrap();
        assert_relative_eq!(
            coherence_time(&stronger) / coherence_time(&p),
            2.0f64.powf(-0.6),
            max_relative = 1e-13
        );
    }

    #[test]
    fn mean_time_re_formula() {
        assert_relative_eq!(mean_time_re(0.0, 1e-3, 20e-3).unwrap(), 21e-3);
        assert_relative_eq!(mean_time_re(0.5, 1e-3, 20e-3).unwrap(), 42e-3);
        assert!(mean_time_re(1.0, 1e-3, 20e-3).is_err());
        // Geometric tail-sum cross-check: sum_m m p^(m-1) (1-p) (t0+trot).
        let p = 0.3;
        let mut acc = 0.0;
        for m in 1..200 {
            acc += m as f64 * p.powi(m - 1) * (1.0 - p) * 21e-3;
        }
        assert_relative_eq!(
            mean_time_re(p, 1e-3, 20e-3).unwrap(),
            acc,
            max_relative = 1e-10
        );
    }

    #[test]
    fn single_mean_matches_re_when_displacement_degenerate() {
        // Nearly constant F(r): Jensen's inequality is tight.
        let ch = channel(20e-3, 1e-9, GG);
        let ch = ChannelModel {
            pointing: PointingParams::new(20e-3, 2000.0, 1e-9, 1e-9, 0.10).unwrap(),
            ..ch
        };
        let p_out = outage_probability(&ch, &OutageMethod::Quadrature { rel_tol: 1e-8 })
            .unwrap()
            .probability;
        let re = mean_time_re(p_out, 1e-3, 0.0).unwrap();
        match mean_time_single(&ch, 1e-3, 0.0, 20_000, 3).unwrap() {
            SingleEstimateMean::Finite { mean, stderr, .. } => {
                assert!((mean - re).abs() < 1e-6 + 4.0 * stderr, "{mean} vs {re}");
            }
            SingleEstimateMean::Divergent { .. } => panic!("unexpected divergence"),
        }
    }

    #[test]
    fn jensen_ordering_with_zero_rotation() {
        // T_re <= T_single for t_rot = 0 across a spread of channels.
        let mut failures = 0;
        for (i, &(theta, sig_est)) in [
            (15e-3, 1e-4),
            (18e-3, 5e-4),
            (22e-3, 1e-3),
            (26e-3, 2e-3),
            (30e-3, 5e-4),
        ]
        .iter()
        .enumerate()
        {
            let ch = channel(theta, sig_est, GG);
            let p_out = outage_probability(&ch, &OutageMethod::Quadrature { rel_tol: 1e-8 })
                .unwrap()
                .probability;
            let re = mean_time_re(p_out, 2e-3, 0.0).unwrap();
            match mean_time_single(&ch, 2e-3, 0.0, 50_000, 100 + i as u64).unwrap() {
                SingleEstimateMean::Finite { mean, stderr, .. } => {
                    if re > mean + 3.0 * stderr {
                        failures += 1;
                    }
                }
                SingleEstimateMean::Divergent { .. } => {}
            }
        }
        assert_eq!(failures, 0);
    }

    #[test]
    fn reestimate_tail_closed_form_is_geometric() {
        let p = 0.2;
        let t0 = 1e-3;
        let trot = 20e-3;
        assert_eq!(reestimate_tail(p, t0, trot, 0.0), 1.0);
        assert_relative_eq!(reestimate_tail(p, t0, trot, 0.0215), p);
        assert_relative_eq!(reestimate_tail(p, t0, trot, 0.043), p * p);
        // log-linearity in the attempt count.
        let l1 = reestimate_tail(p, t0, trot, 3.0 * 0.021).ln();
        let l2 = reestimate_tail(p, t0, trot, 6.0 * 0.021).ln();
        assert_relative_eq!(l2 / l1, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn simulated_reestimate_tail_matches_closed_form() {
        let ch = channel(9e-3, 1.9e-4, GG);
        let p_out = outage_probability(&ch, &OutageMethod::Quadrature { rel_tol: 1e-8 })
            .unwrap()
            .probability;
        let t0 = 1e-3;
        let trot = 20e-3;
        let grid: Vec<f64> = (1..=6).map(|j| j as f64 * (t0 + trot)).collect();
        let tail =
            acquisition_tail(&ch, PolicyKind::ReEstimate, t0, trot, &grid, 100_000, 42).unwrap();
        for pt in &tail {
            let expect = reestimate_tail(p_out, t0, trot, pt.time);
            assert!(
                (pt.probability - expect).abs() <= 3.0 * pt.stderr.max(1e-5),
                "t = {}: simulated {} vs closed form {}",
                pt.time,
                pt.probability,
                expect
            );
        }
    }

    #[test]
    fn tails_start_at_one_and_decrease() {
        let ch = channel(9e-3, 1.9e-4, GG);
        for policy in [PolicyKind::ReEstimate, PolicyKind::SingleEstimate] {
            let grid = [0.0, 0.021, 0.042, 0.084, 0.168];
            let tail = acquisition_tail(&ch, policy, 1e-3, 20e-3, &grid, 20_000, 7).unwrap();
            assert_eq!(tail[0].probability, 1.0);
            for w in tail.windows(2) {
                assert!(w[1].probability <= w[0].probability + 1e-12);
            }
            assert!(tail.iter().all(|p| (0.0..=1.0).contains(&p.probability)));
        }
    }

    #[test]
    fn recommendation_prefers_finite_over_divergent() {
        let div = SingleEstimateMean::Divergent {
            flagged_fraction: 0.5,
        };
        assert_eq!(recommend_policy(1.0, &div), PolicyKind::ReEstimate);
        let fin = SingleEstimateMean::Finite {
            mean: 0.5,
            stderr: 0.0,
            flagged_fraction: 0.0,
        };
        assert_eq!(recommend_policy(1.0, &fin), PolicyKind::SingleEstimate);
        assert_eq!(recommend_policy(0.4, &fin), PolicyKind::ReEstimate);
    }

    #[test]
    fn divergence_cap_triggers_on_hopeless_channel() {
        // Pointing error enormous relative to the beam: most displacement
        // mass is unacquirable and the single-estimation mean is divergent.
        let ch = ChannelModel {
            pointing: PointingParams::new(1e-3, 2000.0, 20e-3, 1e-4, 0.10).unwrap(),
            ..channel(1e-3, 1e-4, FadingParams::LogNormal { log_amp_std: 0.3 })
        };
        match mean_time_single(&ch, 1e-3, 20e-3, 5000, 5).unwrap() {
            SingleEstimateMean::Divergent { flagged_fraction } => {
                assert!(flagged_fraction > 0.1);
            }
            SingleEstimateMean::Finite { .. } => panic!("expected divergence"),
        }
    }

    fn scenario(theta: f64) -> AcquisitionScenario {
        use crate::lens_array::ArrayShape;
        AcquisitionScenario {
            array: LensArrayConfig::new(17, 0.3, 0.019, 0.0107, 0.25, ArrayShape::Arc).unwrap(),
            rf: RfBudget::new(700.0, 1000.0, 1.0).unwrap(),
            chain_count: 4,
            gps_position_std: 5.0,
            channel: channel(theta, 1.9e-4, GG),
            coherence_time: 1e-3,
            rotate_time: 20e-3,
            max_attempts: 4000,
        }
    }

    #[test]
    fn algorithm_first_attempt_failure_matches_outage() {
        let sc = scenario(9e-3);
        let trials = 10_000;
        let outcomes = simulate_algorithm1(&sc, PolicyKind::ReEstimate, trials, 21).unwrap();
        let first_failures = outcomes.iter().filter(|o| o.attempts > 1).count() as f64;
        let p_hat = first_failures / trials as f64;
        let p_out = outage_probability(&sc.channel, &OutageMethod::Quadrature { rel_tol: 1e-8 })
            .unwrap()
            .probability;
        let stderr = (p_out * (1.0 - p_out) / trials as f64).sqrt();
        assert!(
            (p_hat - p_out).abs() < 4.0 * stderr,
            "first-attempt failure {p_hat} vs outage {p_out} (stderr {stderr})"
        );
    }

    #[test]
    fn algorithm_deterministic_success_when_channel_is_clean() {
        // No noise worth mentioning, no jitter, fading pinned at 1, wide beam:
        // acquisition always succeeds on the first attempt in t0 + trot.
        use crate::lens_array::ArrayShape;
        let ch = ChannelModel::new(
            AttenuationParams::new(0.0, 2000.0).unwrap(),
            FadingParams::LogNormal { log_amp_std: 1e-9 },
            PointingParams::new(30e-3, 2000.0, 1e-12, 1e-12, 0.10).unwrap(),
            LinkBudget::new(1.0, 1e-9, 0.5).unwrap(),
        )
        .unwrap();
        let sc = AcquisitionScenario {
            array: LensArrayConfig::new(17, 0.3, 0.019, 0.0107, 0.25, ArrayShape::Arc).unwrap(),
            rf: RfBudget::new(7000.0, 1000.0, 1e-6).unwrap(),
            chain_count: 17,
            gps_position_std: 5.0,
            channel: ch,
            coherence_time: 1e-3,
            rotate_time: 20e-3,
            max_attempts: 10,
        };
        for policy in [PolicyKind::ReEstimate, PolicyKind::SingleEstimate] {
            let outcomes = simulate_algorithm1(&sc, policy, 200, 3).unwrap();
            for o in &outcomes {
                assert!(!o.censored);
                assert_eq!(o.attempts, 1);
                assert_relative_eq!(o.time, 21e-3, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn algorithm_reestimate_mean_matches_formula() {
        let sc = scenario(9e-3);
        let trials = 10_000;
        let outcomes = simulate_algorithm1(&sc, PolicyKind::ReEstimate, trials, 8).unwrap();
        assert!(outcomes.iter().all(|o| !o.censored));
        let mean: f64 = outcomes.iter().map(|o| o.time).sum::<f64>() / trials as f64;
        let p_out = outage_probability(&sc.channel, &OutageMethod::Quadrature { rel_tol: 1e-8 })
            .unwrap()
            .probability;
        let expect = mean_time_re(p_out, sc.coherence_time, sc.rotate_time).unwrap();
        let std: f64 = {
            let var = outcomes
                .iter()
                .map(|o| (o.time - mean) * (o.time - mean))
                .sum::<f64>()
                / (trials - 1) as f64;
            (var / trials as f64).sqrt()
        };
        assert!(
            (mean - expect).abs() < 4.0 * std,
            "simulated mean {mean} vs formula {expect} (stderr {std})"
        );
    }
}
