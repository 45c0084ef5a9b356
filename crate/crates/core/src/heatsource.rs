//! Cylindrical-Gaussian volumetric heat source with energy-density- and
//! RHF-coupled effective parameters.
//!
//! The coupling coefficients are defined against the linear energy density
//! P/V held internally in J/m: `d = P1 (P/V) RHF^2`, `eta = max(P2 (P/V)
//! RHF^2, eta_floor)`, `r_b = P3 (P/V) RHF^2`. With RHF = 1 this reduces to
//! the uncoupled form. The intensity factor defaults to 1 and is exposed as
//! a config knob.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HeatSourceError {
    #[error("laser power and scan speed must be positive, got P={0}, V={1}")]
    NonPositiveInput(f64, f64),
}

/// Coupling coefficients between energy density and the effective source
/// parameters, with the absorptivity floor.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct HeatSourceCoefficients {
    /// Source depth coefficient: m per (J/m).
    pub p1: f64,
    /// Absorptivity coefficient: 1 per (J/m).
    pub p2: f64,
    /// Beam radius coefficient: m per (J/m).
    pub p3: f64,
    /// Intensity factor applied to the flux prefactor.
    pub intensity_factor: f64,
    /// Lower clamp on absorptivity.
    pub eta_floor: f64,
}

impl Default for HeatSourceCoefficients {
    fn default() -> Self {
        Self {
            p1: 4.0e-7,
            p2: 1.8e-3,
            p3: 2.2e-7,
            intensity_factor: 1.0,
            eta_floor: 0.28,
        }
    }
}

/// Fully resolved source state for one instant.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EffectiveSource {
    /// Absorptivity (floored).
    pub eta: f64,
    /// Beam radius (m).
    pub r_b: f64,
    /// Source depth (m).
    pub d: f64,
    /// Laser power (W).
    pub power: f64,
    /// Beam center (m).
    pub center: [f64; 3],
    /// Top of the heated cylinder (m).
    pub z_top: f64,
    /// Intensity factor.
    pub intensity_factor: f64,
}

impl HeatSourceCoefficients {
    /// Effective (d, eta, r_b) for laser power P (W), speed V (m/s), and the
    /// normalized residual heat factor at the current scan point.
    pub fn effective_params(
        &self,
        power: f64,
        speed: f64,
        rhf: f64,
    ) -> Result<(f64, f64, f64), HeatSourceError> {
        if !(power > 0.0) || !(speed > 0.0) {
            return Err(HeatSourceError::NonPositiveInput(power, speed));
        }
        let e = power / speed; // J/m
        let boost = rhf * rhf;
        let d = self.p1 * e * boost;
        let eta = (self.p2 * e * boost).max(self.eta_floor);
        let r_b = self.p3 * e * boost;
        Ok((d, eta, r_b))
    }

    /// Assemble a full source state at a beam position.
    pub fn source_at(
        &self,
        power: f64,
        speed: f64,
        rhf: f64,
        center: [f64; 3],
        z_top: f64,
    ) -> Result<EffectiveSource, HeatSourceError> {
        let (d, eta, r_b) = self.effective_params(power, speed, rhf)?;
        Ok(EffectiveSource {
            eta,
            r_b,
            d,
            power,
            center,
            z_top,
            intensity_factor: self.intensity_factor,
        })
    }
}

impl EffectiveSource {
    /// Construct directly from resolved parameters.
    pub fn new(eta: f64, r_b: f64, d: f64, power: f64, center: [f64; 3], z_top: f64) -> Self {
        Self { eta, r_b, d, power, center, z_top, intensity_factor: 1.0 }
    }
}

/// Volumetric power density (W/m^3) at a query point: Gaussian in the plane
/// transverse to the beam axis, uniform over a cylinder of depth `d` below
/// `z_top`, zero below the cylinder.
pub fn volumetric_flux(query: [f64; 3], src: &EffectiveSource) -> f64 {
    let dz = src.z_top - query[2];
    if dz > src.d || dz < 0.0 {
        return 0.0;
    }
    let xb = query[0] - src.center[0];
    let yb = query[1] - src.center[1];
    let r2 = xb * xb + yb * yb;
    let prefactor =
        src.intensity_factor * src.power * src.eta / (std::f64::consts::PI * src.r_b * src.r_b * src.d);
    prefactor * (-2.0 * r2 / (src.r_b * src.r_b)).exp()
}

/// Total power a source deposits into material: the plane integral of the
/// Gaussian is pi r_b^2 / 2, so the cylinder carries eps * Q * eta / 2.
pub fn nominal_deposited_power(src: &EffectiveSource) -> f64 {
    0.5 * src.intensity_factor * src.power * src.eta
}
