//! IN625 thermophysical properties, phase fraction, enthalpy, and
//! consolidation state.
//!
//! All property polynomials and process constants default to the IN625
//! values used throughout the toolkit. Fields keep the units of the source
//! data (`latent_heat` in kJ/kg, `stefan_boltzmann` in W/mm^2/K^4); the
//! operations below convert to SI where needed.
//!
//! Symbol housing: the emissivity here is the radiative surface emissivity
//! (the heat-source intensity factor lives in [`crate::heatsource`]);
//! `convection_coeff` is the surface convection coefficient in W/m^2/K
//! (its source table labels it W/m/K, which is not a heat transfer
//! coefficient unit; it is implemented per-area here).

use serde::{Deserialize, Serialize};

/// Which effective property to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Conductivity,
    SpecificHeat,
    Density,
}

/// Linear polynomial `a*T + b` with constant extrapolation outside
/// `[t_min, t_max]`, guarding against unphysical values at extreme T.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct LinearPoly {
    pub slope: f64,
    pub intercept: f64,
}

impl LinearPoly {
    pub fn new(slope: f64, intercept: f64) -> Self {
        Self { slope, intercept }
    }

    fn eval_clamped(&self, t: f64, t_min: f64, t_max: f64) -> f64 {
        let tc = t.clamp(t_min, t_max);
        self.slope * tc + self.intercept
    }

    /// Integral of the clamped polynomial from `a` to `b` (a <= b).
    fn integral_clamped(&self, a: f64, b: f64, t_min: f64, t_max: f64) -> f64 {
        debug_assert!(a <= b);
        let mut total = 0.0;
        // below-range segment: constant value at t_min
        let lo_end = b.min(t_min);
        if a < lo_end {
            total += (lo_end - a) * (self.slope * t_min + self.intercept);
        }
        // in-range segment
        let seg_a = a.max(t_min);
        let seg_b = b.min(t_max);
        if seg_a < seg_b {
            total += self.slope * 0.5 * (seg_b * seg_b - seg_a * seg_a)
                + self.intercept * (seg_b - seg_a);
        }
        // above-range segment: constant value at t_max
        let hi_start = a.max(t_max);
        if hi_start < b {
            total += (b - hi_start) * (self.slope * t_max + self.intercept);
        }
        total
    }
}

/// IN625 thermophysical constants and process parameters.
///
/// The default instance reproduces the bundled property table exactly;
/// individual values can be overridden through the `material` config block.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct MaterialProperties {
    /// Solid density (kg/m^3).
    pub rho_solid: f64,
    /// Liquid density (kg/m^3).
    pub rho_liquid: f64,
    /// Powder density (kg/m^3).
    pub rho_powder: f64,
    /// Solidus temperature (K).
    pub t_solidus: f64,
    /// Liquidus temperature (K).
    pub t_liquidus: f64,
    /// Solid specific heat polynomial (J/kg/K per K + constant).
    pub cp_solid_poly: LinearPoly,
    /// Powder specific heat polynomial (J/kg/K per K + constant).
    pub cp_powder_poly: LinearPoly,
    /// Liquid specific heat (J/kg/K).
    pub cp_liquid: f64,
    /// Solid thermal conductivity polynomial (W/m/K per K + constant).
    pub k_solid_poly: LinearPoly,
    /// Liquid thermal conductivity (W/m/K).
    pub k_liquid: f64,
    /// Powder thermal conductivity (W/m/K).
    pub k_powder: f64,
    /// Latent heat of fusion (kJ/kg).
    pub latent_heat: f64,
    /// Dynamic viscosity (Pa s).
    pub viscosity: f64,
    /// Thermal expansivity (1/K).
    pub thermal_expansivity: f64,
    /// Surface tension (N/m).
    pub surface_tension: f64,
    /// Marangoni coefficient d(gamma)/dT (N/m/K).
    pub marangoni_coeff: f64,
    /// Surface emissivity (dimensionless).
    pub emissivity: f64,
    /// Convection coefficient (W/m^2/K).
    pub convection_coeff: f64,
    /// Ambient temperature (K).
    pub t_ambient: f64,
    /// Reference temperature for enthalpy (K).
    pub t_reference: f64,
    /// Substrate preheat temperature (K).
    pub t_preheat: f64,
    /// Stefan-Boltzmann constant (W/mm^2/K^4), per the source table.
    pub stefan_boltzmann: f64,
    /// Primary dendrite spacing c (m).
    pub dendrite_spacing: f64,
    /// Darcy regularization constant B (dimensionless).
    pub darcy_epsilon: f64,
}

impl Default for MaterialProperties {
    fn default() -> Self {
        Self {
            rho_solid: 8440.0,
            rho_liquid: 7640.0,
            rho_powder: 4330.0,
            t_solidus: 1563.0,
            t_liquidus: 1623.0,
            cp_solid_poly: LinearPoly::new(0.2441, 338.39),
            cp_powder_poly: LinearPoly::new(0.2508, 357.70),
            cp_liquid: 709.25,
            k_solid_poly: LinearPoly::new(0.0163, 4.5847),
            k_liquid: 30.078,
            k_powder: 0.995,
            latent_heat: 290.0,
            viscosity: 7e-3,
            thermal_expansivity: 5e-5,
            surface_tension: 1.8,
            marangoni_coeff: -3.8e-4,
            emissivity: 0.4,
            convection_coeff: 10.0,
            t_ambient: 295.0,
            t_reference: 295.0,
            t_preheat: 353.0,
            stefan_boltzmann: 5.67e-14,
            dendrite_spacing: 1e-6,
            darcy_epsilon: 1e-6,
        }
    }
}

/// Lower clamp bound for the property polynomials (K).
const POLY_T_MIN: f64 = 295.0;

impl MaterialProperties {
    /// Validate the basic physical invariants.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.t_solidus < self.t_liquidus) {
            return Err(format!(
                "t_solidus ({}) must be below t_liquidus ({})",
                self.t_solidus, self.t_liquidus
            ));
        }
        for (name, v) in [
            ("rho_solid", self.rho_solid),
            ("rho_liquid", self.rho_liquid),
            ("rho_powder", self.rho_powder),
            ("latent_heat", self.latent_heat),
            ("viscosity", self.viscosity),
        ] {
            if !(v > 0.0) {
                return Err(format!("{name} must be strictly positive, got {v}"));
            }
        }
        Ok(())
    }

    /// Latent heat of fusion in J/kg.
    pub fn latent_heat_si(&self) -> f64 {
        self.latent_heat * 1e3
    }

    /// Stefan-Boltzmann constant in W/m^2/K^4.
    pub fn stefan_boltzmann_si(&self) -> f64 {
        self.stefan_boltzmann * 1e6
    }

    /// Liquid phase fraction, piecewise linear between solidus and liquidus.
    pub fn liquid_fraction(&self, t: f64) -> f64 {
        if t <= self.t_solidus {
            0.0
        } else if t >= self.t_liquidus {
            1.0
        } else {
            (t - self.t_solidus) / (self.t_liquidus - self.t_solidus)
        }
    }

    /// Consolidation state from the running peak temperature, clamped to [0, 1].
    pub fn consolidation_factor(&self, t_peak: f64) -> f64 {
        ((t_peak - self.t_solidus) / (self.t_liquidus - self.t_solidus)).clamp(0.0, 1.0)
    }

    /// Bulk (fully consolidated) property: solid/liquid blend by phase fraction.
    fn bulk_property(&self, t: f64, which: Property) -> f64 {
        let fl = self.liquid_fraction(t);
        match which {
            Property::Conductivity => {
                let ks = self.k_solid_poly.eval_clamped(t, POLY_T_MIN, self.t_liquidus);
                (1.0 - fl) * ks + fl * self.k_liquid
            }
            Property::SpecificHeat => {
                let cs = self.cp_solid_poly.eval_clamped(t, POLY_T_MIN, self.t_liquidus);
                (1.0 - fl) * cs + fl * self.cp_liquid
            }
            Property::Density => (1.0 - fl) * self.rho_solid + fl * self.rho_liquid,
        }
    }

    /// Powder-state property.
    fn powder_property(&self, t: f64, which: Property) -> f64 {
        match which {
            Property::Conductivity => self.k_powder,
            Property::SpecificHeat => {
                self.cp_powder_poly.eval_clamped(t, POLY_T_MIN, self.t_liquidus)
            }
            Property::Density => self.rho_powder,
        }
    }

    /// Effective property at consolidation state `alpha`: powder at 0, bulk at
    /// 1, linear blend between; above the liquidus the material is molten and
    /// the liquid value applies regardless of alpha.
    pub fn effective_property(&self, t: f64, alpha: f64, which: Property) -> f64 {
        debug_assert!((0.0..=1.0).contains(&alpha));
        if t >= self.t_liquidus {
            return match which {
                Property::Conductivity => self.k_liquid,
                Property::SpecificHeat => self.cp_liquid,
                Property::Density => self.rho_liquid,
            };
        }
        let bulk = self.bulk_property(t, which);
        if alpha >= 1.0 {
            return bulk;
        }
        let powder = self.powder_property(t, which);
        (1.0 - alpha) * powder + alpha * bulk
    }

    /// Sensible heat of the bulk path: integral of the bulk specific heat
    /// from `t_reference` to `t` (J/kg), in closed form.
    fn sensible_bulk(&self, t: f64) -> f64 {
        let (ts, tl) = (self.t_solidus, self.t_liquidus);
        let t0 = self.t_reference;
        debug_assert!(t0 <= ts);
        let mut h = 0.0;
        // solid segment
        let b = t.min(ts);
        if t0 < b {
            h += self.cp_solid_poly.integral_clamped(t0, b, POLY_T_MIN, tl);
        }
        // mushy segment: cp = (1 - fl) cp_s(T) + fl cp_l, fl linear in T
        let a = ts.max(t0);
        let b = t.min(tl);
        if a < b {
            h += self.mushy_sensible_integral(a, b);
        }
        // liquid segment
        let a = tl.max(t0);
        if a < t {
            h += self.cp_liquid * (t - a);
        }
        h
    }

    /// Closed-form integral of the mushy-zone bulk specific heat over [a, b],
    /// with a, b within [t_solidus, t_liquidus].
    fn mushy_sensible_integral(&self, a: f64, b: f64) -> f64 {
        let (ts, tl) = (self.t_solidus, self.t_liquidus);
        let dtf = tl - ts;
        // cp(T) = (1 - (T-ts)/dtf) * (s*T + c) + ((T-ts)/dtf) * cp_l
        // expand as quadratic q2*T^2 + q1*T + q0
        let s = self.cp_solid_poly.slope;
        let c = self.cp_solid_poly.intercept;
        let q2 = -s / dtf;
        let q1 = s - (c - self.cp_liquid) / dtf + s * ts / dtf;
        let q0 = c + (c - self.cp_liquid) * ts / dtf;
        let f = |t: f64| q2 * t * t * t / 3.0 + q1 * t * t / 2.0 + q0 * t;
        f(b) - f(a)
    }

    /// Sensible heat of the powder path (J/kg).
    fn sensible_powder(&self, t: f64) -> f64 {
        if t <= self.t_reference {
            return 0.0;
        }
        // powder polynomial up to the liquidus; molten powder is liquid
        let b = t.min(self.t_liquidus);
        let mut h = self
            .cp_powder_poly
            .integral_clamped(self.t_reference, b, POLY_T_MIN, self.t_liquidus);
        if t > self.t_liquidus {
            h += self.cp_liquid * (t - self.t_liquidus);
        }
        h
    }

    /// Specific enthalpy of the bulk material (J/kg): sensible heat from the
    /// reference temperature plus the latent heat weighted by phase fraction.
    pub fn enthalpy(&self, t: f64) -> f64 {
        self.enthalpy_at_state(t, 1.0)
    }

    /// Specific enthalpy at consolidation state `alpha` (J/kg).
    pub fn enthalpy_at_state(&self, t: f64, alpha: f64) -> f64 {
        let sensible = if alpha >= 1.0 {
            self.sensible_bulk(t)
        } else if alpha <= 0.0 {
            self.sensible_powder(t)
        } else {
            (1.0 - alpha) * self.sensible_powder(t) + alpha * self.sensible_bulk(t)
        };
        sensible + self.latent_heat_si() * self.liquid_fraction(t)
    }

    /// d(enthalpy)/dT at state `alpha`, used by the Newton inversion.
    fn enthalpy_slope(&self, t: f64, alpha: f64) -> f64 {
        let cp = self.effective_property(t, alpha, Property::SpecificHeat);
        let latent = if t > self.t_solidus && t < self.t_liquidus {
            self.latent_heat_si() / (self.t_liquidus - self.t_solidus)
        } else {
            0.0
        };
        cp + latent
    }

    /// Invert the enthalpy curve: recover T from a specific enthalpy at state
    /// `alpha`. Newton iteration from `t_guess` with a bisection fallback;
    /// the curve is strictly increasing so the root is unique.
    pub fn temperature_from_enthalpy(&self, h: f64, alpha: f64, t_guess: f64) -> f64 {
        if h <= 0.0 {
            // extend below the reference temperature with the reference-point slope
            let cp0 = self.effective_property(self.t_reference, alpha, Property::SpecificHeat);
            return self.t_reference + h / cp0;
        }
        let h_cap = self.enthalpy_at_state(6000.0, alpha);
        if h >= h_cap {
            return 6000.0 + (h - h_cap) / self.cp_liquid;
        }
        let mut t = t_guess.clamp(self.t_reference, 6000.0);
        let mut lo = self.t_reference;
        let mut hi = 6000.0;
        for _ in 0..60 {
            let f = self.enthalpy_at_state(t, alpha) - h;
            if f.abs() < 1e-9 * h.max(1.0) {
                break;
            }
            if f > 0.0 {
                hi = t.min(hi);
            } else {
                lo = t.max(lo);
            }
            let slope = self.enthalpy_slope(t, alpha);
            let mut t_new = t - f / slope;
            if !(t_new > lo && t_new < hi) {
                t_new = 0.5 * (lo + hi);
            }
            if (t_new - t).abs() < 1e-9 {
                t = t_new;
                break;
            }
            t = t_new;
        }
        t
    }
}
