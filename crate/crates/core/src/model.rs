//! Physical constants and the map from control parameters (bias field,
//! temperature, sphere radius) to subsystem frequencies and occupations.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Fundamental and material constants, SI units throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Gyromagnetic ratio magnitude |γ| (T⁻¹ s⁻¹).
    pub gamma_abs: f64,
    /// Vacuum permeability μ₀ (T m / A).
    pub mu0: f64,
    /// Bohr magneton μ_B (J / T).
    pub mu_b: f64,
    /// Electron Landé factor of the NV spin.
    pub g_e: f64,
    /// Reduced Planck constant (J s).
    pub hbar: f64,
    /// Boltzmann constant (J / K).
    pub k_b: f64,
    /// NV zero-field splitting D₀ (rad/s).
    pub d0: f64,
    /// Saturation magnetization of the sphere (A/m).
    pub m_s: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            gamma_abs: 1.76e11,
            mu0: 4.0 * PI * 1e-7,
            mu_b: 9.274_010_078_3e-24,
            g_e: 2.0028,
            hbar: 1.054_571_817e-34,
            k_b: 1.380_649e-23,
            d0: 2.0 * PI * 2.87e9,
            // YIG
            m_s: 1.4e5,
        }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("gamma_abs", self.gamma_abs),
            ("mu0", self.mu0),
            ("mu_b", self.mu_b),
            ("g_e", self.g_e),
            ("hbar", self.hbar),
            ("k_b", self.k_b),
            ("d0", self.d0),
            ("m_s", self.m_s),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(name, format!("must be finite and > 0, got {value}")));
            }
        }
        Ok(())
    }
}

/// Parameters of the full spin–magnon–photon model.
///
/// All frequencies and rates are angular (rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SystemParams {
    pub omega_c: f64,
    pub omega_k: f64,
    pub omega_nv: f64,
    /// Spin–magnon coupling.
    pub g: f64,
    /// Photon–magnon coupling.
    pub lambda: f64,
    /// Spin dephasing rate (multiplies `D[σ_z]`).
    pub gamma_s: f64,
    /// Kittel-mode decay rate.
    pub gamma_m: f64,
    /// Cavity decay rate.
    pub kappa: f64,
    /// Bath temperature (K).
    pub temperature: f64,
    /// Direct spin–photon coupling, used only by the no-magnon baseline.
    pub g_direct: f64,
}

impl SystemParams {
    /// Builds parameters from the spin frequency and the two detunings
    /// `Δ1 = ω_K − ω_NV`, `Δ2 = ω_C − ω_NV`. Couplings and rates start at zero.
    pub fn from_detunings(omega_nv: f64, delta1: f64, delta2: f64) -> Self {
        Self {
            omega_nv,
            omega_k: omega_nv + delta1,
            omega_c: omega_nv + delta2,
            ..Self::default()
        }
    }

    pub fn delta1(&self) -> f64 {
        self.omega_k - self.omega_nv
    }

    pub fn delta2(&self) -> f64 {
        self.omega_c - self.omega_nv
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega_c", self.omega_c),
            ("omega_k", self.omega_k),
            ("omega_nv", self.omega_nv),
            ("g", self.g),
            ("lambda", self.lambda),
            ("gamma_s", self.gamma_s),
            ("gamma_m", self.gamma_m),
            ("kappa", self.kappa),
            ("temperature", self.temperature),
            ("g_direct", self.g_direct),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::invalid(name, format!("must be finite and >= 0, got {value}")));
            }
        }
        Ok(())
    }
}

fn check_field(b_z: f64) -> Result<()> {
    if !(b_z.is_finite() && b_z >= 0.0) {
        return Err(Error::invalid("b_z", format!("control field must be >= 0 T, got {b_z}")));
    }
    Ok(())
}

/// NV sublevel frequencies `(ω_{+1}, ω_{−1}) = D₀ ± |γ| B_z`.
///
/// The qubit frequency is `ω_NV ≡ ω_{−1}`.
pub fn nv_level_frequencies(c: &PhysicalConstants, b_z: f64) -> Result<(f64, f64)> {
    check_field(b_z)?;
    let zeeman = c.gamma_abs * b_z;
    Ok((c.d0 + zeeman, c.d0 - zeeman))
}

/// Kittel-mode frequency `ω_K = |γ| B_z`.
pub fn kittel_frequency(c: &PhysicalConstants, b_z: f64) -> Result<f64> {
    check_field(b_z)?;
    Ok(c.gamma_abs * b_z)
}

/// Bias field at which the `|0⟩ ↔ |−1⟩` transition is resonant with the
/// Kittel mode: `D₀ − |γ|B = |γ|B`.
pub fn resonant_field(c: &PhysicalConstants) -> f64 {
    c.d0 / (2.0 * c.gamma_abs)
}

/// Bose–Einstein occupation `1 / (exp(ħω / k_B T) − 1)`; exactly zero at `T = 0`.
pub fn thermal_occupation(c: &PhysicalConstants, omega: f64, temperature: f64) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::invalid("omega", format!("must be > 0, got {omega}")));
    }
    if !(temperature.is_finite() && temperature >= 0.0) {
        return Err(Error::invalid("temperature", format!("must be >= 0 K, got {temperature}")));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = c.hbar * omega / (c.k_b * temperature);
    Ok(1.0 / x.exp_m1())
}

/// Volume of a sphere of the given radius.
pub fn sphere_volume(radius: f64) -> f64 {
    4.0 / 3.0 * PI * radius.powi(3)
}

/// Zero-point magnetization of the Kittel mode, `M_K = sqrt(ħ|γ|M_s / 2V)`.
pub fn zero_point_magnetization(c: &PhysicalConstants, radius: f64) -> Result<f64> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::invalid("radius", format!("must be > 0 m, got {radius}")));
    }
    Ok((c.hbar * c.gamma_abs * c.m_s / (2.0 * sphere_volume(radius))).sqrt())
}
