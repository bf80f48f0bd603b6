//! Geometry-dependent coupling strengths and the magnon-eliminated
//! (effective) spin–photon parameters.
//!
//! Both couplings are returned in rad/s. The closed forms carry an explicit
//! `1/ħ` inside the square root; this is where the zero-point magnetization
//! `M_K = sqrt(ħ|γ|M_s / 2V)` puts it once the interaction energies are
//! divided by `ħ`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{zero_point_magnetization, PhysicalConstants, SystemParams};

/// Largest `|α|`, `|β|` for which the effective model is flagged valid.
pub const ELIMINATION_LIMIT: f64 = 0.3;

/// Accepted window for the cavity zero-point field at the sphere (T).
pub const B_X_WINDOW: (f64, f64) = (1e-10, 1e-7);

/// Default cavity zero-point field: 37.5 μG.
pub const DEFAULT_B_X: f64 = 3.75e-9;

/// Sphere / spin / cavity geometry. Lengths in metres, angle in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagnetGeometry {
    /// Sphere radius `R`.
    pub radius: f64,
    /// Spin to sphere-surface gap `d = r − R`.
    pub gap: f64,
    /// Polar angle of the spin position relative to the sphere centre.
    pub theta: f64,
    /// Cavity zero-point field amplitude at the sphere (T).
    pub b_x: f64,
}

impl MagnetGeometry {
    pub fn new(radius: f64, gap: f64) -> Self {
        Self {
            radius,
            gap,
            theta: 0.0,
            b_x: DEFAULT_B_X,
        }
    }

    /// Spin distance from the sphere centre.
    pub fn distance(&self) -> f64 {
        self.radius + self.gap
    }

    pub fn validate(&self) -> Result<()> {
        positive("radius", self.radius)?;
        positive("gap", self.gap)?;
        if !self.theta.is_finite() {
            return Err(Error::invalid("theta", "must be finite"));
        }
        positive("b_x", self.b_x)
    }

    /// Rejects cavity fields outside [`B_X_WINDOW`].
    pub fn check_field_window(&self) -> Result<()> {
        let (lo, hi) = B_X_WINDOW;
        if self.b_x < lo || self.b_x > hi {
            return Err(Error::invalid(
                "b_x",
                format!("{} T is outside the expected window [{lo:e}, {hi:e}] T", self.b_x),
            ));
        }
        Ok(())
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::invalid(name, format!("must be finite and > 0, got {value}")));
    }
    Ok(())
}

/// Spin–magnon coupling after the rotating-wave approximation,
///
/// `g = sqrt(|γ| M_s / (12π ħ)) · g_e μ₀ μ_B R^{3/2} / (R + d)³`.
pub fn spin_magnon_coupling(c: &PhysicalConstants, geom: &MagnetGeometry) -> Result<f64> {
    positive("radius", geom.radius)?;
    positive("gap", geom.gap)?;
    let prefactor = (c.gamma_abs * c.m_s / (12.0 * PI * c.hbar)).sqrt();
    Ok(prefactor * c.g_e * c.mu0 * c.mu_b * geom.radius.powf(1.5) / geom.distance().powi(3))
}

/// Photon–magnon coupling `λ = sqrt(π |γ| M_s / (3ħ)) · b_x · R^{3/2}`.
pub fn photon_magnon_coupling(c: &PhysicalConstants, geom: &MagnetGeometry) -> Result<f64> {
    positive("radius", geom.radius)?;
    positive("b_x", geom.b_x)?;
    let prefactor = (PI * c.gamma_abs * c.m_s / (3.0 * c.hbar)).sqrt();
    Ok(prefactor * geom.b_x * geom.radius.powf(1.5))
}

/// Coefficients of the quantized Kittel-mode dipole field at `(r, θ)`:
///
/// `B_x = c_xX X̂ + c_xP P̂`, `B_y = c_yX X̂ + c_yP P̂`, with `X̂ = s + s†`,
/// `P̂ = i(s − s†)`. Units are tesla.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DipoleCoefficients {
    /// `μ₀ R³ M_K / (3 r³)`.
    pub prefactor: f64,
    pub x_x: f64,
    pub x_p: f64,
    pub y_x: f64,
    pub y_p: f64,
}

pub fn dipole_field_coefficients(
    c: &PhysicalConstants,
    radius: f64,
    r: f64,
    theta: f64,
) -> Result<DipoleCoefficients> {
    positive("radius", radius)?;
    if !(r.is_finite() && r > radius) {
        return Err(Error::invalid(
            "r",
            format!("field point must lie outside the sphere (r = {r} <= R = {radius})"),
        ));
    }
    let mk = zero_point_magnetization(c, radius)?;
    let prefactor = c.mu0 * radius.powi(3) * mk / (3.0 * r.powi(3));
    let (s, co) = theta.sin_cos();
    Ok(DipoleCoefficients {
        prefactor,
        x_x: prefactor * (3.0 * co * co - 1.0),
        x_p: prefactor * 3.0 * s * co,
        y_x: prefactor * 3.0 * s * co,
        y_p: prefactor * (3.0 * s * s - 1.0),
    })
}

/// Parameters of the reduced spin–photon model obtained by eliminating the
/// far-detuned Kittel mode. Rates in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    pub delta1: f64,
    pub delta2: f64,
    /// `g / Δ1`
    pub alpha: f64,
    /// `λ / Δ1`
    pub beta: f64,
    pub g_eff: f64,
    pub gamma_eff: f64,
    pub kappa_eff: f64,
    pub cooperativity: f64,
    /// Spin dephasing, carried through unchanged.
    pub gamma_s: f64,
    /// `|α| ≤ 0.3` and `|β| ≤ 0.3`.
    pub valid: bool,
}

impl EffectiveParams {
    pub fn ratio_gamma(&self) -> f64 {
        self.g_eff / self.gamma_eff
    }

    pub fn ratio_kappa(&self) -> f64 {
        self.g_eff / self.kappa_eff
    }
}

pub fn effective_parameters(p: &SystemParams) -> Result<EffectiveParams> {
    let delta1 = p.delta1();
    if delta1 == 0.0 || !delta1.is_finite() {
        return Err(Error::Singular(
            "Δ1 = 0: the Kittel mode cannot be eliminated on resonance".into(),
        ));
    }
    let alpha = p.g / delta1;
    let beta = p.lambda / delta1;
    let g_eff = p.g * p.lambda / delta1;
    let gamma_eff = alpha * alpha * p.gamma_m;
    let kappa_eff = p.kappa + beta * beta * p.gamma_m;
    let cooperativity = if g_eff == 0.0 {
        0.0
    } else {
        g_eff * g_eff / (gamma_eff * kappa_eff)
    };
    Ok(EffectiveParams {
        delta1,
        delta2: p.delta2(),
        alpha,
        beta,
        g_eff,
        gamma_eff,
        kappa_eff,
        cooperativity,
        gamma_s: p.gamma_s,
        valid: alpha.abs() <= ELIMINATION_LIMIT && beta.abs() <= ELIMINATION_LIMIT,
    })
}

/// `C = g_eff² / (γ_eff κ_eff)`.
pub fn cooperativity(e: &EffectiveParams) -> Result<f64> {
    positive("gamma_eff", e.gamma_eff)?;
    positive("kappa_eff", e.kappa_eff)?;
    Ok(e.g_eff * e.g_eff / (e.gamma_eff * e.kappa_eff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{angular_to_hz, hz_to_angular};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    #[test]
    fn g_at_reference_point() {
        let g = spin_magnon_coupling(&c(), &MagnetGeometry::new(50e-9, 10e-9)).unwrap();
        let mhz = angular_to_hz(g) / 1e6;
        assert!((0.2..2.0).contains(&mhz));
        // 30-digit evaluation of the closed form
        assert_relative_eq!(angular_to_hz(g), 478_688.626_872_130_8, max_relative = 1e-12);
    }

    #[test]
    fn g_vanishes_far_away() {
        let near = spin_magnon_coupling(&c(), &MagnetGeometry::new(50e-9, 10e-9)).unwrap();
        let far = spin_magnon_coupling(&c(), &MagnetGeometry::new(50e-9, 1.0)).unwrap();
        assert!(far < 1e-18 * near);
    }

    #[test]
    fn nonpositive_geometry_rejected() {
        assert!(spin_magnon_coupling(&c(), &MagnetGeometry::new(0.0, 10e-9)).is_err());
        assert!(spin_magnon_coupling(&c(), &MagnetGeometry::new(50e-9, 0.0)).is_err());
        let mut geom = MagnetGeometry::new(50e-9, 10e-9);
        geom.b_x = 0.0;
        assert!(photon_magnon_coupling(&c(), &geom).is_err());
        assert!(geom.validate().is_err());
    }

    #[test]
    fn field_window() {
        let mut geom = MagnetGeometry::new(50e-9, 10e-9);
        assert!(geom.check_field_window().is_ok());
        geom.b_x = 1e-3;
        assert!(geom.check_field_window().is_err());
    }

    #[test]
    fn dipole_coefficients_angles() {
        let r = 60e-9;
        let d0 = dipole_field_coefficients(&c(), 50e-9, r, 0.0).unwrap();
        let p = d0.prefactor;
        assert_relative_eq!(d0.x_x, 2.0 * p, max_relative = 1e-15);
        assert!(d0.x_p.abs() < 1e-16 * p && d0.y_x.abs() < 1e-16 * p);
        assert_relative_eq!(d0.y_p, -p, max_relative = 1e-15);

        let d90 = dipole_field_coefficients(&c(), 50e-9, r, PI / 2.0).unwrap();
        assert_relative_eq!(d90.x_x, -p, max_relative = 1e-14);
        assert_relative_eq!(d90.y_p, 2.0 * p, max_relative = 1e-14);
        assert!(d90.x_p.abs() < 1e-15 * p);

        let d45 = dipole_field_coefficients(&c(), 50e-9, r, PI / 4.0).unwrap();
        assert_relative_eq!(d45.x_p, 1.5 * p, max_relative = 1e-14);
        assert_relative_eq!(d45.y_x, 1.5 * p, max_relative = 1e-14);

        assert!(dipole_field_coefficients(&c(), 50e-9, 50e-9, 0.0).is_err());
        assert!(dipole_field_coefficients(&c(), 50e-9, 40e-9, 0.0).is_err());
    }

    #[test]
    fn rwa_reduction_of_dipole_coupling() {
        // Keeping the co-rotating part of -(g_e μ_B/ħ) B·S, the angular
        // factors collapse to (3cos²θ-1) + (3sin²θ-1) = 1 for every θ.
        for theta in [0.0, 0.3, PI / 4.0, 1.2, PI / 2.0] {
            let d = dipole_field_coefficients(&c(), 50e-9, 60e-9, theta).unwrap();
            assert_relative_eq!((d.x_x + d.y_p) / d.prefactor, 1.0, max_relative = 1e-13);
            assert_relative_eq!(d.x_p, d.y_x, max_relative = 1e-15);
        }
    }

    #[test]
    fn lambda_examples() {
        let mut geom = MagnetGeometry::new(100e-9, 10e-9);
        geom.b_x = 3.75e-9;
        let lam = photon_magnon_coupling(&c(), &geom).unwrap();
        // 30-digit evaluation of the closed form
        assert_relative_eq!(lam, 1_854_931.379_090_617, max_relative = 1e-12);
        // energy route: ħλ = V M_K b_x / √2
        let v = crate::model::sphere_volume(geom.radius);
        let mk = zero_point_magnetization(&c(), geom.radius).unwrap();
        assert_relative_eq!(lam, v * mk * geom.b_x / (2f64.sqrt() * c().hbar), max_relative = 1e-12);

        let big = MagnetGeometry { radius: 200e-9, ..geom };
        let ratio = photon_magnon_coupling(&c(), &big).unwrap() / lam;
        assert_relative_eq!(ratio, 2f64.powf(1.5), max_relative = 1e-12);
    }

    #[test]
    fn lambda_reaches_megahertz_scale() {
        let found = (1..=500).any(|nm| {
            let geom = MagnetGeometry::new(nm as f64 * 1e-9, 10e-9);
            angular_to_hz(photon_magnon_coupling(&c(), &geom).unwrap()) >= 0.9e6
        });
        assert!(found);
    }

    fn nominal() -> SystemParams {
        let mut p = SystemParams::from_detunings(hz_to_angular(1.435e9), hz_to_angular(10e6), 0.0);
        p.g = hz_to_angular(1e6);
        p.lambda = hz_to_angular(1e6);
        p.gamma_m = hz_to_angular(1e6);
        p.kappa = hz_to_angular(6e3);
        p
    }

    #[test]
    fn effective_nominal_point() {
        let e = effective_parameters(&nominal()).unwrap();
        assert_relative_eq!(e.alpha, 0.1, max_relative = 1e-12);
        assert_relative_eq!(e.beta, 0.1, max_relative = 1e-12);
        assert_relative_eq!(angular_to_hz(e.gamma_eff), 10e3, max_relative = 1e-9);
        assert_relative_eq!(angular_to_hz(e.kappa_eff), 16e3, max_relative = 1e-9);
        assert_relative_eq!(angular_to_hz(e.g_eff), 0.1e6, max_relative = 1e-9);
        assert_relative_eq!(e.cooperativity, 62.5, max_relative = 1e-9);
        assert!(e.valid);
    }

    #[test]
    fn effective_rejects_resonance() {
        let mut p = nominal();
        p.omega_k = p.omega_nv;
        assert!(effective_parameters(&p).is_err());
    }

    #[test]
    fn regime_flag() {
        let mut p = nominal();
        p.g = 0.5 * p.delta1();
        let e = effective_parameters(&p).unwrap();
        assert!(!e.valid);
    }

    #[test]
    fn cooperativity_examples() {
        let e = effective_parameters(&nominal()).unwrap();
        assert_relative_eq!(cooperativity(&e).unwrap(), 62.5, max_relative = 1e-9);
        let zero = EffectiveParams { g_eff: 0.0, ..e };
        assert_eq!(cooperativity(&zero).unwrap(), 0.0);
        let doubled = EffectiveParams { g_eff: 2.0 * e.g_eff, ..e };
        assert_relative_eq!(cooperativity(&doubled).unwrap(), 4.0 * 62.5, max_relative = 1e-9);
        let bad = EffectiveParams { gamma_eff: 0.0, ..e };
        assert!(cooperativity(&bad).is_err());
    }

    #[test]
    fn g_maximum_where_radius_equals_gap() {
        // d/dR [R^{3/2}/(R + d)³] = 0  ⇒  R = d
        let gap = 30e-9;
        let radii: Vec<f64> = (1..=3000).map(|i| i as f64 * 0.1e-9).collect();
        let best = radii
            .iter()
            .copied()
            .max_by(|a, b| {
                let ga = spin_magnon_coupling(&c(), &MagnetGeometry::new(*a, gap)).unwrap();
                let gb = spin_magnon_coupling(&c(), &MagnetGeometry::new(*b, gap)).unwrap();
                ga.partial_cmp(&gb).unwrap()
            })
            .unwrap();
        assert!((best - gap).abs() <= 0.1e-9, "{best}");
    }

    proptest! {
        #[test]
        fn g_functional_form(r in 1e-9f64..1e-6, d in 1e-9f64..1e-6) {
            let g = spin_magnon_coupling(&c(), &MagnetGeometry::new(r, d)).unwrap();
            let g_ref = spin_magnon_coupling(&c(), &MagnetGeometry::new(50e-9, 10e-9)).unwrap();
            let k = g * (r + d).powi(3) / r.powf(1.5);
            let k_ref = g_ref * (60e-9f64).powi(3) / (50e-9f64).powf(1.5);
            prop_assert!((k / k_ref - 1.0).abs() < 1e-12);
        }

        #[test]
        fn g_far_field_volume_law(r in 10e-9f64..100e-9, factor in 50.0f64..200.0) {
            let d = factor * 100e-9;
            let g = spin_magnon_coupling(&c(), &MagnetGeometry::new(r, d)).unwrap();
            let g_ref = spin_magnon_coupling(&c(), &MagnetGeometry::new(10e-9, d)).unwrap();
            let k = g * d.powi(3) / r.powf(1.5);
            let k_ref = g_ref * d.powi(3) / (10e-9f64).powf(1.5);
            prop_assert!((k / k_ref - 1.0).abs() < 0.10);
        }

        #[test]
        fn g_decreasing_in_gap(r in 1e-9f64..1e-6, d in 1e-9f64..1e-6, dd in 1e-10f64..1e-6) {
            let g1 = spin_magnon_coupling(&c(), &MagnetGeometry::new(r, d)).unwrap();
            let g2 = spin_magnon_coupling(&c(), &MagnetGeometry::new(r, d + dd)).unwrap();
            prop_assert!(g2 < g1);
        }

        #[test]
        fn lambda_power_law(r in 1e-9f64..1e-6) {
            let lam = photon_magnon_coupling(&c(), &MagnetGeometry::new(r, 10e-9)).unwrap();
            let lam_ref = photon_magnon_coupling(&c(), &MagnetGeometry::new(100e-9, 10e-9)).unwrap();
            let k = lam / r.powf(1.5);
            let k_ref = lam_ref / (100e-9f64).powf(1.5);
            prop_assert!((k / k_ref - 1.0).abs() < 1e-12);
        }

        #[test]
        fn effective_identities(g in 1e3f64..1e7, lam in 1e3f64..1e7, d1 in 1e5f64..1e9,
                                gm in 1e3f64..1e7, kap in 1e2f64..1e6, neg in proptest::bool::ANY) {
            let delta1 = if neg { -d1 } else { d1 };
            let mut p = SystemParams::from_detunings(1e10, delta1, 0.0);
            p.g = g; p.lambda = lam; p.gamma_m = gm; p.kappa = kap;
            let e = effective_parameters(&p).unwrap();
            prop_assert!((e.delta1 - delta1).abs() <= 1e-12 * d1);
            prop_assert!((e.g_eff - g * lam / e.delta1).abs() <= 4.0 * f64::EPSILON * e.g_eff.abs());
            prop_assert!((e.gamma_eff - e.alpha * e.alpha * gm).abs() <= 4.0 * f64::EPSILON * e.gamma_eff);
            prop_assert!((e.kappa_eff - (kap + e.beta * e.beta * gm)).abs() <= 4.0 * f64::EPSILON * e.kappa_eff);
            let c_ref = e.g_eff * e.g_eff / (e.gamma_eff * e.kappa_eff);
            prop_assert!((e.cooperativity - c_ref).abs() <= 4.0 * f64::EPSILON * c_ref);
        }
    }
}
