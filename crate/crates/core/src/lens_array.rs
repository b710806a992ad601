//! RF lens antenna array model.
//!
//! A lens in front of the element row concentrates an incident plane wave
//! near one focal spot, so the per-antenna amplitude follows a sinc profile
//! in the element index. Antenna indices are centered: `n` runs from
//! `-(N-1)/2` to `(N-1)/2` in unit steps, which makes them half-integers for
//! even `N`. Internally selections are carried as 0-based element offsets.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)] // needed by the no_std build; test builds see std inherent methods
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::estimator::{GpsPrior, RfObservation};
use crate::{Error, Result};

/// Physical layout of the antenna row behind the lens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrayShape {
    /// Straight row: element distance to the lens center grows off axis,
    /// `z = sqrt(d^2 n^2 + f^2)`.
    Linear,
    /// Circular arc at the focal distance: `z = f` for every element.
    Arc,
}

/// Geometry and RF parameters of the lens antenna array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensArrayConfig {
    pub n_antennas: usize,
    /// Lens diameter in meters.
    pub lens_diameter: f64,
    /// Element spacing in meters.
    pub antenna_spacing: f64,
    /// RF carrier wavelength in meters.
    pub wavelength: f64,
    /// Focal length in meters.
    pub focal_length: f64,
    pub shape: ArrayShape,
}

impl LensArrayConfig {
    pub fn new(
        n_antennas: usize,
        lens_diameter: f64,
        antenna_spacing: f64,
        wavelength: f64,
        focal_length: f64,
        shape: ArrayShape,
    ) -> Result<Self> {
        if n_antennas < 1 {
            return Err(Error::InvalidParameter {
                name: "n_antennas",
                reason: "must be at least 1",
            });
        }
        for (name, v) in [
            ("lens_diameter", lens_diameter),
            ("antenna_spacing", antenna_spacing),
            ("wavelength", wavelength),
            ("focal_length", focal_length),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be finite and strictly positive",
                });
            }
        }
        Ok(Self {
            n_antennas,
            lens_diameter,
            antenna_spacing,
            wavelength,
            focal_length,
            shape,
        })
    }

    /// Centered index value of element `i` (0-based offset).
    #[inline]
    pub fn antenna_index(&self, i: usize) -> f64 {
        i as f64 - (self.n_antennas as f64 - 1.0) / 2.0
    }

    /// Lens-center-to-element distance for centered index `n`.
    #[inline]
    pub fn element_distance(&self, n: f64) -> f64 {
        match self.shape {
            ArrayShape::Arc => self.focal_length,
            ArrayShape::Linear => {
                let dn = self.antenna_spacing * n;
                (dn * dn + self.focal_length * self.focal_length).sqrt()
            }
        }
    }
}

/// Known transmit-side parameters of one RF snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalParams {
    /// Real amplitude gain `g`.
    pub gain: f64,
    /// Carrier phase `b` in radians.
    pub phase: f64,
    /// Noise standard deviation per complex sample (real and imaginary parts
    /// each carry `noise_std / sqrt(2)`).
    pub noise_std: f64,
    /// True angle of arrival in radians.
    pub aoa: f64,
}

impl SignalParams {
    pub fn new(gain: f64, phase: f64, noise_std: f64, aoa: f64) -> Result<Self> {
        if !(gain > 0.0) || !gain.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gain",
                reason: "must be finite and strictly positive",
            });
        }
        if !(noise_std >= 0.0) || !noise_std.is_finite() {
            return Err(Error::InvalidParameter {
                name: "noise_std",
                reason: "must be finite and non-negative",
            });
        }
        if !phase.is_finite() {
            return Err(Error::NonFinite("signal phase"));
        }
        check_aoa(aoa)?;
        Ok(Self {
            gain,
            phase,
            noise_std,
            aoa,
        })
    }
}

/// Contiguous window of selected antennas, as 0-based element offsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AntennaSelection {
    lo: usize,
    hi: usize,
}

impl AntennaSelection {
    pub fn new(lo: usize, hi: usize, n_antennas: usize) -> Result<Self> {
        if lo > hi || hi >= n_antennas {
            return Err(Error::InvalidParameter {
                name: "selection",
                reason: "window must satisfy lo <= hi < n_antennas",
            });
        }
        Ok(Self { lo, hi })
    }

    /// Lowest selected element offset.
    #[inline]
    pub fn lo_index(&self) -> usize {
        self.lo
    }

    /// Highest selected element offset.
    #[inline]
    pub fn hi_index(&self) -> usize {
        self.hi
    }

    /// Number of connected RF chains `k = hi - lo + 1`.
    #[inline]
    pub fn chain_count(&self) -> usize {
        self.hi - self.lo + 1
    }

    /// Slice a full-array vector down to the selected window.
    pub fn restrict<T: Copy>(&self, full: &[T]) -> Vec<T> {
        full[self.lo..=self.hi].to_vec()
    }
}

fn check_aoa(aoa: f64) -> Result<()> {
    if !aoa.is_finite() {
        return Err(Error::NonFinite("angle of arrival"));
    }
    if aoa <= -PI / 2.0 || aoa >= PI / 2.0 {
        return Err(Error::InvalidParameter {
            name: "aoa",
            reason: "must lie in the open interval (-pi/2, pi/2)",
        });
    }
    Ok(())
}

/// Unnormalized sinc, `sin(x)/x` with `sinc(0) = 1`.
#[inline]
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `(sin x - x cos x) / x^2`, the derivative kernel of the sinc profile.
/// Series near zero keeps full precision where the direct form cancels.
#[inline]
fn sinc_deriv_kernel(x: f64) -> f64 {
    if x.abs() < 0.5 {
        let x2 = x * x;
        x * (1.0 / 3.0 + x2 * (-1.0 / 30.0 + x2 * (1.0 / 840.0 - x2 / 45_360.0)))
    } else {
        (x.sin() - x * x.cos()) / (x * x)
    }
}

/// Diagonal of the amplitude matrix at angle of arrival `aoa`.
///
/// Entry for centered index `n` is `(L/sqrt(z)) * sinc[(L/lambda)(dn/z - sin aoa)]`.
pub fn amplitude_matrix(cfg: &LensArrayConfig, aoa: f64) -> Result<Vec<f64>> {
    check_aoa(aoa)?;
    let sin_aoa = aoa.sin();
    Ok((0..cfg.n_antennas)
        .map(|i| {
            let n = cfg.antenna_index(i);
            let z = cfg.element_distance(n);
            let arg =
                (cfg.lens_diameter / cfg.wavelength) * (cfg.antenna_spacing * n / z - sin_aoa);
            cfg.lens_diameter / z.sqrt() * sinc(arg)
        })
        .collect())
}

/// Diagonal of the analytic derivative of [`amplitude_matrix`] with respect
/// to the angle of arrival.
pub fn amplitude_matrix_derivative(cfg: &LensArrayConfig, aoa: f64) -> Result<Vec<f64>> {
    check_aoa(aoa)?;
    let sin_aoa = aoa.sin();
    let cos_aoa = aoa.cos();
    let l = cfg.lens_diameter;
    Ok((0..cfg.n_antennas)
        .map(|i| {
            let n = cfg.antenna_index(i);
            let z = cfg.element_distance(n);
            let arg = (l / cfg.wavelength) * (cfg.antenna_spacing * n / z - sin_aoa);
            l * l * cos_aoa / (cfg.wavelength * z.sqrt()) * sinc_deriv_kernel(arg)
        })
        .collect())
}

/// Phase vector of the incident unit-power signal across the array.
///
/// All elements have unit modulus; for an arc array they are identical.
pub fn steering_vector(cfg: &LensArrayConfig) -> Vec<Complex64> {
    (0..cfg.n_antennas)
        .map(|i| {
            let n = cfg.antenna_index(i);
            let z = match cfg.shape {
                ArrayShape::Arc => cfg.focal_length,
                ArrayShape::Linear => {
                    let dn = cfg.antenna_spacing * n;
                    (dn * dn + cfg.focal_length * cfg.focal_length).sqrt()
                }
            };
            let phase = -2.0 * PI * z / cfg.wavelength;
            Complex64::new(phase.cos(), phase.sin())
        })
        .collect()
}

/// Select the `chain_count` antennas nearest the focal spot predicted by the
/// GPS prior angle.
///
/// The window bounds follow the index formulas with round-half-away-from-zero
/// and `z = f`; tie expansions are trimmed on the side farther from the focal
/// spot and the window is clamped into the array preserving its width.
pub fn select_antennas(
    cfg: &LensArrayConfig,
    aoa_prior: f64,
    chain_count: usize,
) -> Result<AntennaSelection> {
    check_aoa(aoa_prior)?;
    let n = cfg.n_antennas;
    if chain_count < 1 || chain_count > n {
        return Err(Error::ChainCountOutOfRange {
            requested: chain_count,
            available: n,
        });
    }
    // Focal spot in index units, using z = f.
    let x = cfg.focal_length / cfg.antenna_spacing * aoa_prior.sin();
    let (inner, outer) = if n % 2 == 0 { (0.5, 0.0) } else { (0.0, 0.5) };
    let half_k = chain_count as f64 / 2.0;
    let u = (x - half_k + inner).round() + outer;
    let v = (x + half_k + inner).round() + outer;

    // Lattice indices inside [u, v]; offset converts centered index -> element offset.
    let offset = (n as f64 - 1.0) / 2.0;
    let mut lo = ((u + offset) - 1e-9).ceil() as i64;
    let mut hi = ((v + offset) + 1e-9).floor() as i64;

    // Half-integer ties can widen the window by one; drop the far side.
    while (hi - lo + 1) as usize > chain_count {
        let d_lo = (lo as f64 - offset - x).abs();
        let d_hi = (hi as f64 - offset - x).abs();
        if d_hi >= d_lo {
            hi -= 1;
        } else {
            lo += 1;
        }
    }
    // Defensive: the formulas always yield at least k lattice points, but an
    // extension rule keeps the contract total.
    while ((hi - lo + 1) as usize) < chain_count {
        let d_lo = ((lo - 1) as f64 - offset - x).abs();
        let d_hi = ((hi + 1) as f64 - offset - x).abs();
        if d_hi <= d_lo {
            hi += 1;
        } else {
            lo -= 1;
        }
    }
    // Clamp into the physical array, preserving the width.
    if lo < 0 {
        hi -= lo;
        lo = 0;
    }
    if hi > n as i64 - 1 {
        lo -= hi - (n as i64 - 1);
        hi = n as i64 - 1;
    }
    AntennaSelection::new(lo as usize, hi as usize, n)
}

/// Synthesize one received snapshot `y = g A(phi) s e^{jb} + n` over the
/// selected window, with circularly-symmetric complex Gaussian noise.
pub fn simulate_observation<R: Rng + ?Sized>(
    cfg: &LensArrayConfig,
    signal: &SignalParams,
    selection: AntennaSelection,
    prior: GpsPrior,
    rng: &mut R,
) -> Result<RfObservation> {
    if selection.hi_index() >= cfg.n_antennas {
        return Err(Error::InvalidParameter {
            name: "selection",
            reason: "window exceeds the configured array",
        });
    }
    let amp = amplitude_matrix(cfg, signal.aoa)?;
    let steer = steering_vector(cfg);
    let carrier = Complex64::new(signal.phase.cos(), signal.phase.sin());
    let per_part = signal.noise_std / core::f64::consts::SQRT_2;
    let samples = (selection.lo_index()..=selection.hi_index())
        .map(|i| {
            let clean = signal.gain * amp[i] * steer[i] * carrier;
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            clean + Complex64::new(per_part * re, per_part * im)
        })
        .collect();
    RfObservation::new(samples, selection, *signal, prior)
}
