//! Decibel algebra and the handful of physical constants the models share.
//!
//! Everything past this module works in linear units (watts, 1/km, Hz);
//! dB and dBm only appear where values enter or leave the engine.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 10·log10(e): converts a per-km loss in dB to the natural-log power
/// attenuation coefficient.
pub const DB_PER_NEPER_POWER: f64 = 4.342_944_819_032_518;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub planck_j_s: f64,
    pub light_speed_km_s: f64,
    pub reference_frequency_hz: f64,
    pub reference_wavelength_m: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            planck_j_s: 6.626_070_15e-34,
            light_speed_km_s: 299_792.458,
            reference_frequency_hz: 193.4e12,
            reference_wavelength_m: 1550e-9,
        }
    }
}

impl PhysicalConstants {
    /// Photon energy h·ν at the reference frequency, in joules.
    pub fn photon_energy_j(&self) -> f64 {
        self.planck_j_s * self.reference_frequency_hz
    }
}

fn finite(quantity: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::domain(quantity, x, "must be finite"))
    }
}

pub fn db_to_linear(x_db: f64) -> Result<f64> {
    finite("dB value", x_db).map(|x| 10f64.powf(x / 10.0))
}

pub fn linear_to_db(ratio: f64) -> Result<f64> {
    if ratio > 0.0 && ratio.is_finite() {
        Ok(10.0 * ratio.log10())
    } else {
        Err(Error::domain("linear ratio", ratio, "must be positive and finite"))
    }
}

pub fn dbm_to_watt(p_dbm: f64) -> Result<f64> {
    finite("dBm value", p_dbm).map(|p| 1e-3 * 10f64.powf(p / 10.0))
}

pub fn watt_to_dbm(w: f64) -> Result<f64> {
    if w > 0.0 && w.is_finite() {
        Ok(10.0 * (w * 1e3).log10())
    } else {
        Err(Error::domain("power in watts", w, "must be positive and finite"))
    }
}

/// dB/km loss to the linear power attenuation coefficient α in 1/km.
pub fn attenuation_db_to_per_km(a_db_per_km: f64) -> Result<f64> {
    if a_db_per_km >= 0.0 && a_db_per_km.is_finite() {
        Ok(a_db_per_km / DB_PER_NEPER_POWER)
    } else {
        Err(Error::domain("attenuation", a_db_per_km, "must be nonnegative"))
    }
}

/// Hyperbolic sinc, sinh(x)/x, with the removable singularity at 0 filled in.
pub fn sinhc(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain("sinhc argument", x, "must be nonnegative"));
    }
    if x < 1e-4 {
        let x2 = x * x;
        Ok(1.0 + x2 / 6.0 + x2 * x2 / 120.0)
    } else {
        Ok(x.sinh() / x)
    }
}
