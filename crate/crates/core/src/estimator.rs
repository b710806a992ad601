//! Closed-form MAP angle-of-arrival estimation against a GPS prior.
//!
//! The estimator linearizes the array response around the prior angle and
//! returns the stationary point of the resulting Gaussian posterior in closed
//! form. A grid-search oracle over the same posterior (linearized or exact)
//! backs it in tests, and a Monte Carlo sweep characterizes accuracy versus
//! link distance.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)] // needed by the no_std build; test builds see std inherent methods
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::lens_array::{
    amplitude_matrix, amplitude_matrix_derivative, select_antennas, simulate_observation,
    steering_vector, AntennaSelection, LensArrayConfig, SignalParams,
};
use crate::{stream, Error, Result};

/// GPS-derived prior on the angle of arrival.
///
/// `angle_std = f64::INFINITY` is the no-GPS ablation: the prior term drops
/// out of the MAP denominator and the estimator reduces to linearized ML.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpsPrior {
    pub mean_angle: f64,
    pub angle_std: f64,
}

impl GpsPrior {
    pub fn new(mean_angle: f64, angle_std: f64) -> Result<Self> {
        if !mean_angle.is_finite() || mean_angle.abs() >= PI / 2.0 {
            return Err(Error::InvalidParameter {
                name: "mean_angle",
                reason: "must be finite and inside (-pi/2, pi/2)",
            });
        }
        if !(angle_std > 0.0) {
            return Err(Error::InvalidParameter {
                name: "angle_std",
                reason: "must be strictly positive",
            });
        }
        Ok(Self {
            mean_angle,
            angle_std,
        })
    }
}

/// One received snapshot restricted to the selected antenna window, together
/// with everything the estimator is given: the known signal parameters and
/// the GPS prior.
#[derive(Debug, Clone, PartialEq)]
pub struct RfObservation {
    samples: Vec<Complex64>,
    selection: AntennaSelection,
    signal: SignalParams,
    prior: GpsPrior,
}

impl RfObservation {
    pub fn new(
        samples: Vec<Complex64>,
        selection: AntennaSelection,
        signal: SignalParams,
        prior: GpsPrior,
    ) -> Result<Self> {
        if samples.len() != selection.chain_count() {
            return Err(Error::InvalidParameter {
                name: "samples",
                reason: "length must equal the selection chain count",
            });
        }
        Ok(Self {
            samples,
            selection,
            signal,
            prior,
        })
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }
    pub fn selection(&self) -> AntennaSelection {
        self.selection
    }
    pub fn signal(&self) -> &SignalParams {
        &self.signal
    }
    pub fn prior(&self) -> GpsPrior {
        self.prior
    }
}

/// Output of [`map_estimate`]: `angle = prior_angle + correction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleEstimate {
    pub angle: f64,
    pub prior_angle: f64,
    pub correction: f64,
}

/// Numerator (complex, real up to round-off) and denominator of the
/// closed-form MAP correction. Exposed so tests can check the conjugate
/// symmetry of the numerator and the stationarity of the estimate.
pub fn map_correction_terms(
    cfg: &LensArrayConfig,
    obs: &RfObservation,
) -> Result<(Complex64, f64)> {
    let sel = obs.selection();
    let prior = obs.prior();
    let sig = obs.signal();
    let amp = sel.restrict(&amplitude_matrix(cfg, prior.mean_angle)?);
    let damp = sel.restrict(&amplitude_matrix_derivative(cfg, prior.mean_angle)?);
    let steer = sel.restrict(&steering_vector(cfg));
    let carrier = Complex64::new(sig.phase.cos(), sig.phase.sin());

    let mut y_da_s = Complex64::new(0.0, 0.0); // y^H A' s
    let mut s_da_y = Complex64::new(0.0, 0.0); // s^H A' y
    let mut s_a_da_s = 0.0; // s^H A A' s (real)
    let mut s_da2_s = 0.0; // s^H A'^2 s (real)
    for i in 0..steer.len() {
        let y_over_g = obs.samples()[i] / sig.gain;
        y_da_s += y_over_g.conj() * damp[i] * steer[i];
        s_da_y += steer[i].conj() * damp[i] * y_over_g;
        let s_norm2 = steer[i].norm_sqr();
        s_a_da_s += s_norm2 * amp[i] * damp[i];
        s_da2_s += s_norm2 * damp[i] * damp[i];
    }
    let numerator =
        carrier * y_da_s + carrier.conj() * s_da_y - Complex64::new(2.0 * s_a_da_s, 0.0);
    // Prior precision term vanishes for the no-GPS ablation (angle_std = inf).
    let prior_term =
        sig.noise_std * sig.noise_std / (sig.gain * sig.gain * prior.angle_std * prior.angle_std);
    let denominator = 2.0 * s_da2_s + prior_term;
    Ok((numerator, denominator))
}

/// Closed-form MAP estimate of the angle of arrival.
///
/// The correction is the stationary point of the posterior obtained from the
/// first-order response expansion around the prior angle; its numerator is a
/// conjugate pair plus a real term, so only the real part is kept.
pub fn map_estimate(cfg: &LensArrayConfig, obs: &RfObservation) -> Result<AngleEstimate> {
    let (numerator, denominator) = map_correction_terms(cfg, obs)?;
    if !(denominator > 0.0) || !denominator.is_finite() {
        return Err(Error::DegenerateDenominator);
    }
    let correction = numerator.re / denominator;
    let prior_angle = obs.prior().mean_angle;
    Ok(AngleEstimate {
        angle: prior_angle + correction,
        prior_angle,
        correction,
    })
}

/// Brute-force grid argmax of the log-posterior over
/// `prior ± grid_halfwidth`, with `grid_points` uniform samples.
///
/// With `linearized` set, the array response is replaced by its first-order
/// expansion around the prior angle, making this the independent oracle for
/// [`map_estimate`]; without it the exact response is used.
pub fn grid_search_oracle(
    cfg: &LensArrayConfig,
    obs: &RfObservation,
    grid_halfwidth: f64,
    grid_points: usize,
    linearized: bool,
) -> Result<f64> {
    if grid_points < 3 {
        return Err(Error::InvalidParameter {
            name: "grid_points",
            reason: "must be at least 3",
        });
    }
    let sig = obs.signal();
    if !(sig.noise_std > 0.0) {
        return Err(Error::InvalidParameter {
            name: "noise_std",
            reason: "grid oracle requires positive noise",
        });
    }
    let sel = obs.selection();
    let prior = obs.prior();
    let steer = sel.restrict(&steering_vector(cfg));
    let amp0 = sel.restrict(&amplitude_matrix(cfg, prior.mean_angle)?);
    let damp0 = sel.restrict(&amplitude_matrix_derivative(cfg, prior.mean_angle)?);
    let carrier = Complex64::new(sig.phase.cos(), sig.phase.sin());
    let inv_noise_var = 1.0 / (sig.noise_std * sig.noise_std);
    let prior_prec = if prior.angle_std.is_finite() {
        1.0 / (2.0 * prior.angle_std * prior.angle_std)
    } else {
        0.0
    };

    let mut best_phi = prior.mean_angle;
    let mut best_logp = f64::NEG_INFINITY;
    for j in 0..grid_points {
        let frac = j as f64 / (grid_points - 1) as f64;
        let phi = prior.mean_angle + grid_halfwidth * (2.0 * frac - 1.0);
        let amp_phi: Vec<f64> = if linearized {
            let dphi = phi - prior.mean_angle;
            amp0.iter().zip(&damp0).map(|(a, d)| a + d * dphi).collect()
        } else {
            if phi.abs() >= PI / 2.0 {
                continue;
            }
            sel.restrict(&amplitude_matrix(cfg, phi)?)
        };
        let mut resid = 0.0;
        for i in 0..steer.len() {
            let model = sig.gain * amp_phi[i] * steer[i] * carrier;
            resid += (obs.samples()[i] - model).norm_sqr();
        }
        let dphi = phi - prior.mean_angle;
        let logp = -resid * inv_noise_var - dphi * dphi * prior_prec;
        if logp > best_logp {
            best_logp = logp;
            best_phi = phi;
        }
    }
    Ok(best_phi)
}

/// Reference RF link budget: amplitude gain `reference_gain` at
/// `reference_distance`, free-space 1/D amplitude decay elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfBudget {
    pub reference_gain: f64,
    pub reference_distance: f64,
    pub noise_std: f64,
}

impl RfBudget {
    pub fn new(reference_gain: f64, reference_distance: f64, noise_std: f64) -> Result<Self> {
        for (name, v) in [
            ("reference_gain", reference_gain),
            ("reference_distance", reference_distance),
            ("noise_std", noise_std),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be finite and strictly positive",
                });
            }
        }
        Ok(Self {
            reference_gain,
            reference_distance,
            noise_std,
        })
    }

    /// Amplitude gain at link distance `d`.
    #[inline]
    pub fn gain_at(&self, d: f64) -> f64 {
        self.reference_gain * self.reference_distance / d
    }
}

/// One row of the accuracy sweep: sample standard deviations of the proposed
/// estimator and of the GPS-only baseline at a given distance and chain count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub distance: f64,
    pub chain_count: usize,
    pub std_proposed_rad: f64,
    pub std_proposed_m: f64,
    pub std_gps_rad: f64,
    pub std_gps_m: f64,
    pub trials: u64,
}

/// Monte Carlo sweep of estimation accuracy versus distance and chain count.
///
/// For each distance the prior spread is `gps_position_std / distance`, the
/// true angle is drawn from the prior, and the RF gain follows the budget's
/// 1/D decay. Per-trial RNG substreams are derived from
/// `(seed, distance index, chain index, trial)`, so results do not depend on
/// evaluation order.
pub fn estimation_std_sweep(
    cfg: &LensArrayConfig,
    rf: &RfBudget,
    gps_position_std: f64,
    distances: &[f64],
    chain_counts: &[usize],
    trials: u64,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    if !(gps_position_std > 0.0) {
        return Err(Error::InvalidParameter {
            name: "gps_position_std",
            reason: "must be strictly positive",
        });
    }
    if trials < 1 {
        return Err(Error::InvalidParameter {
            name: "trials",
            reason: "must be at least 1",
        });
    }
    let mut rows = Vec::with_capacity(distances.len() * chain_counts.len());
    for (di, &distance) in distances.iter().enumerate() {
        if !(distance > 0.0) {
            return Err(Error::InvalidParameter {
                name: "distances",
                reason: "must be strictly positive",
            });
        }
        let angle_std = gps_position_std / distance;
        let gain = rf.gain_at(distance);
        for (ci, &chain_count) in chain_counts.iter().enumerate() {
            let selection = select_antennas(cfg, 0.0, chain_count)?;
            let prior = GpsPrior::new(0.0, angle_std)?;
            let mut sum_sq_p = 0.0;
            let mut sum_p = 0.0;
            let mut sum_sq_g = 0.0;
            let mut sum_g = 0.0;
            for trial in 0..trials {
                let mut rng = stream::substream(seed, &[di as u64, ci as u64, trial]);
                let true_angle = angle_std * sample_standard_normal(&mut rng);
                let phase = rng.gen::<f64>() * 2.0 * PI;
                let signal = SignalParams::new(gain, phase, rf.noise_std, true_angle)?;
                let obs = simulate_observation(cfg, &signal, selection, prior, &mut rng)?;
                let est = map_estimate(cfg, &obs)?;
                let err_p = est.angle - true_angle;
                let err_g = prior.mean_angle - true_angle;
                sum_p += err_p;
                sum_sq_p += err_p * err_p;
                sum_g += err_g;
                sum_sq_g += err_g * err_g;
            }
            let n = trials as f64;
            let var_p = (sum_sq_p - sum_p * sum_p / n) / (n - 1.0).max(1.0);
            let var_g = (sum_sq_g - sum_g * sum_g / n) / (n - 1.0).max(1.0);
            let std_p = var_p.max(0.0).sqrt();
            let std_g = var_g.max(0.0).sqrt();
            rows.push(SweepRow {
                distance,
                chain_count,
                std_proposed_rad: std_p,
                std_proposed_m: std_p * distance,
                std_gps_rad: std_g,
                std_gps_m: std_g * distance,
                trials,
            });
        }
    }
    Ok(rows)
}

#[inline]
fn sample_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}
