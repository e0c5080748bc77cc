//! Performance analysis for underlay cognitive decode-and-forward relaying
//! with MIMO-RF access links and a free-space optical backhaul.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`] – incomplete gamma, Bessel J0 and Meijer G evaluation
//!   (residue series and Mellin–Barnes contour backends).
//! * [`quad`] – adaptive Gauss–Kronrod quadrature used as an independent oracle.
//! * [`channels`] – Jakes correlation, AR(1) MIMO evolution and the FSO SNR law.
//! * [`linkstats`] – power control and the SU-TX → relay SNR distribution.
//! * [`perf`] – end-to-end outage and bit-error probabilities with their floors.
//! * [`mcsim`] – frame-level Monte Carlo estimators.
//! * [`scenarios`] – figure presets built from the reference parameter set.

pub mod channels;
pub mod error;
pub mod linkstats;
pub mod mcsim;
pub mod perf;
pub mod quad;
pub mod scenarios;
pub mod specfun;
pub(crate) mod sum;

pub use error::{Error, Result};

/// Convert decibels to a linear ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear ratio to decibels.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Metres per second in one mile per hour.
pub const MPS_PER_MPH: f64 = 0.44704;
