//! scatterkit — diffuse-scattering simulation and parameterization toolkit.
//!
//! The crate simulates single-bounce scattering from a rough rectangular wall
//! with two families of models — empirical Effective Roughness (ER) lobes and
//! the physical Beckmann–Kirchhoff (BK) series — inside a small ray tracer
//! that sweeps a receiver over measurement arcs, synthesizes band-limited
//! power-delay profiles at channel-sounder resolution, and produces angular
//! spectra of received power and RMS delay spread.
//!
//! On top of the simulator sit the processing and parameterization stages:
//!
//! * [`pdp`] — back-to-back calibration of sounder frequency responses,
//!   threshold/window filtering, total power and RMS delay spread.
//! * [`fitting`] — joint power/delay-spread SMAPE objective, exhaustive
//!   grid-search parameter fitting with simulation in the loop, angular
//!   generalization checks, and distillation of BK physics into cheap
//!   ER-form lookup tables (the ER-BK hybrid).
//!
//! Geometry lives in [`geometry`], the closed-form scattering math in
//! [`scattering`], and Gaussian rough-surface synthesis in [`surface`].
//! Scene/material/fit configuration files are parsed by [`config`]; CSV
//! schemas for spectra, PDPs, and frequency responses are in [`csvio`].
//!
//! All types are immutable after construction and all operations are pure,
//! so everything can be called concurrently; the ray tracer parallelizes
//! over receiver positions internally with a fixed reduction order, making
//! results independent of thread count.

pub mod config;
pub mod csvio;
pub mod error;
pub mod fitting;
pub mod geometry;
pub mod pdp;
pub mod raytracer;
pub mod scattering;
pub mod surface;

pub use error::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Free-space wave impedance η = 120π (ohms).
pub const ETA_FREE_SPACE: f64 = 120.0 * std::f64::consts::PI;

/// dBm value emitted for positions with exactly zero received power, so
/// spectra stay finite. Far below any physical noise floor.
pub const POWER_FLOOR_DBM: f64 = -400.0;

/// Convert a linear power in watts to dBm, flooring zero/negative input
/// at [`POWER_FLOOR_DBM`].
pub fn watts_to_dbm(p_watts: f64) -> f64 {
    if p_watts > 0.0 {
        10.0 * (p_watts * 1e3).log10()
    } else {
        POWER_FLOOR_DBM
    }
}

/// Convert dBm to linear power in watts.
pub fn dbm_to_watts(p_dbm: f64) -> f64 {
    10f64.powf(p_dbm / 10.0) * 1e-3
}

/// Convert dBm to linear power in milliwatts.
pub fn dbm_to_milliwatts(p_dbm: f64) -> f64 {
    10f64.powf(p_dbm / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dbm_round_trip() {
        assert!((watts_to_dbm(1e-3) - 0.0).abs() < 1e-12);
        assert!((dbm_to_watts(0.0) - 1e-3).abs() < 1e-18);
        assert!((watts_to_dbm(dbm_to_watts(-72.4)) - -72.4).abs() < 1e-9);
    }

    #[test]
    fn zero_power_floors() {
        assert_eq!(watts_to_dbm(0.0), POWER_FLOOR_DBM);
        assert_eq!(watts_to_dbm(-1.0), POWER_FLOOR_DBM);
    }
}
