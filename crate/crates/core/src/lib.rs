//! Core models for RF-lens-assisted free-space-optical link acquisition.
//!
//! The crate covers the full coarse-pointing chain for a ground station that
//! tracks an aerial terminal with an RF lens antenna array and then points an
//! optical beacon at it:
//!
//! - [`lens_array`] — lens antenna array geometry, amplitude response,
//!   steering vector, antenna selection, and synthetic RF snapshots
//! - [`estimator`] — closed-form MAP angle-of-arrival estimation against a
//!   GPS prior, grid-search oracles, and accuracy sweeps versus distance
//! - [`optical_channel`] — Beer-Lambert attenuation, log-normal and
//!   gamma-gamma fading, Rayleigh beam displacement, and Gaussian pointing
//!   loss
//! - [`outage`] — outage probability of the beacon link by Monte Carlo and
//!   by nested quadrature, with beam-divergence and distance sweeps
//! - [`policy`] — channel coherence time, re-estimation versus
//!   single-estimation acquisition policies, tail distributions of the
//!   acquisition time, and an end-to-end acquisition event simulation
//!
//! The crate is `no_std` (with `alloc`); all math goes through `libm` and
//! all randomness through caller-supplied RNGs, so results are reproducible
//! from explicit seeds. IO, file formats, and the CLI live in the companion
//! `lenspoint` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;

pub mod estimator;
pub mod lens_array;
pub mod optical_channel;
pub mod outage;
pub mod policy;
pub mod quad;
pub mod special;
pub mod stream;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
