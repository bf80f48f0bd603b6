//! JSON run configuration. Every physical key carries its unit in the name;
//! conversion to SI / rad/s happens here and nowhere else.

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use magbridge::couplings::{photon_magnon_coupling, spin_magnon_coupling, MagnetGeometry, DEFAULT_B_X};
use magbridge::lindblad::{RunOptions, DEFAULT_ABS_TOL, DEFAULT_FOCK_DIM, DEFAULT_REL_TOL};
use magbridge::model::{nv_level_frequencies, resonant_field, PhysicalConstants, SystemParams};
use magbridge::walker::DEFAULT_BIAS_FIELD;
use magbridge::hz_to_angular;

const NM: f64 = 1e-9;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub constants: ConstantsConfig,
    pub geometry: Option<GeometryConfig>,
    pub system: Option<SystemConfig>,
    pub sweep: Option<SweepConfig>,
    pub evolution: Option<EvolutionConfig>,
    pub walker: Option<WalkerConfig>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    pub gamma_rad_per_s_per_tesla: Option<f64>,
    pub mu0_tesla_m_per_a: Option<f64>,
    pub mu_b_j_per_tesla: Option<f64>,
    pub g_e: Option<f64>,
    pub hbar_j_s: Option<f64>,
    pub k_b_j_per_k: Option<f64>,
    pub d0_over_2pi_hz: Option<f64>,
    pub ms_a_per_m: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub radius_nm: f64,
    pub gap_nm: f64,
    pub b_x_tesla: Option<f64>,
    pub theta_deg: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub delta1_over_2pi_hz: f64,
    #[serde(default)]
    pub delta2_over_2pi_hz: f64,
    /// Sets the spin frequency; defaults to the magnon-resonant field.
    pub bz_tesla: Option<f64>,
    /// Overrides the geometry-derived couplings.
    pub g_over_2pi_hz: Option<f64>,
    pub lambda_over_2pi_hz: Option<f64>,
    #[serde(default)]
    pub gamma_s_over_2pi_hz: f64,
    #[serde(default)]
    pub gamma_m_over_2pi_hz: f64,
    #[serde(default)]
    pub kappa_over_2pi_hz: f64,
    #[serde(default)]
    pub g_direct_over_2pi_hz: f64,
    #[serde(default)]
    pub temperature_k: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn values(&self, name: &str) -> Result<Vec<f64>> {
        if self.count == 0 {
            bail!("sweep axis `{name}` has zero length");
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            bail!("sweep axis `{name}` has a non-finite bound");
        }
        if self.count == 1 {
            return Ok(vec![self.start]);
        }
        if self.stop <= self.start {
            bail!("sweep axis `{name}` must be increasing (start < stop)");
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        Ok((0..self.count).map(|i| self.start + step * i as f64).collect())
    }
}

/// Axes left out are pinned to the base `geometry` / `system` values.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub delta1_over_2pi_hz: Option<Axis>,
    pub radius_nm: Option<Axis>,
    pub gap_nm: Option<Axis>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionConfig {
    pub horizon_gt_over_pi: f64,
    pub samples: Option<usize>,
    pub fock_dim: Option<usize>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkerConfig {
    pub h0_a_per_m: Option<f64>,
    #[serde(default = "default_modes")]
    pub modes: Vec<(usize, i32)>,
    pub scan: Option<WalkerScan>,
}

fn default_modes() -> Vec<(usize, i32)> {
    vec![(1, 1)]
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkerScan {
    pub start_over_2pi_hz: f64,
    pub stop_over_2pi_hz: f64,
    pub count: usize,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("invalid configuration")
    }

    pub fn constants(&self) -> Result<PhysicalConstants> {
        let k = &self.constants;
        let mut c = PhysicalConstants::default();
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut c.gamma_abs, k.gamma_rad_per_s_per_tesla);
        set(&mut c.mu0, k.mu0_tesla_m_per_a);
        set(&mut c.mu_b, k.mu_b_j_per_tesla);
        set(&mut c.g_e, k.g_e);
        set(&mut c.hbar, k.hbar_j_s);
        set(&mut c.k_b, k.k_b_j_per_k);
        set(&mut c.d0, k.d0_over_2pi_hz.map(hz_to_angular));
        set(&mut c.m_s, k.ms_a_per_m);
        c.validate()?;
        Ok(c)
    }

    pub fn geometry(&self) -> Result<MagnetGeometry> {
        let g = self.geometry.as_ref().context("missing `geometry` section")?;
        let geom = MagnetGeometry {
            radius: g.radius_nm * NM,
            gap: g.gap_nm * NM,
            theta: g.theta_deg.unwrap_or(0.0).to_radians(),
            b_x: g.b_x_tesla.unwrap_or(DEFAULT_B_X),
        };
        geom.validate()?;
        Ok(geom)
    }

    pub fn system_section(&self) -> Result<&SystemConfig> {
        self.system.as_ref().context("missing `system` section")
    }

    /// Full parameter set at the base point. Couplings not overridden in
    /// `system` are derived from `geometry`.
    pub fn system_params(&self, c: &PhysicalConstants) -> Result<SystemParams> {
        let s = self.system_section()?;
        let geom = match (s.g_over_2pi_hz, s.lambda_over_2pi_hz) {
            (Some(_), Some(_)) => None,
            _ => Some(self.geometry().context("couplings not overridden in `system`")?),
        };
        self.system_params_at(c, geom.as_ref(), s.delta1_over_2pi_hz)
    }

    /// Parameter set at a sweep point.
    pub fn system_params_at(
        &self,
        c: &PhysicalConstants,
        geom: Option<&MagnetGeometry>,
        delta1_over_2pi_hz: f64,
    ) -> Result<SystemParams> {
        let s = self.system_section()?;
        let bz = s.bz_tesla.unwrap_or_else(|| resonant_field(c));
        let (_, omega_nv) = nv_level_frequencies(c, bz)?;
        let mut p = SystemParams::from_detunings(omega_nv, hz_to_angular(delta1_over_2pi_hz), hz_to_angular(s.delta2_over_2pi_hz));
        p.g = match s.g_over_2pi_hz {
            Some(v) => hz_to_angular(v),
            None => spin_magnon_coupling(c, geom.context("`geometry` needed for g")?)?,
        };
        p.lambda = match s.lambda_over_2pi_hz {
            Some(v) => hz_to_angular(v),
            None => photon_magnon_coupling(c, geom.context("`geometry` needed for lambda")?)?,
        };
        p.gamma_s = hz_to_angular(s.gamma_s_over_2pi_hz);
        p.gamma_m = hz_to_angular(s.gamma_m_over_2pi_hz);
        p.kappa = hz_to_angular(s.kappa_over_2pi_hz);
        p.g_direct = hz_to_angular(s.g_direct_over_2pi_hz);
        p.temperature = s.temperature_k;
        p.validate()?;
        Ok(p)
    }

    pub fn evolution(&self) -> Result<(f64, RunOptions)> {
        let e = self.evolution.as_ref().context("missing `evolution` section")?;
        if !(e.horizon_gt_over_pi.is_finite() && e.horizon_gt_over_pi > 0.0) {
            bail!("`horizon_gt_over_pi` must be > 0");
        }
        let opts = RunOptions {
            fock_dim: e.fock_dim.unwrap_or(DEFAULT_FOCK_DIM),
            n_samples: e.samples.unwrap_or(RunOptions::default().n_samples),
            rel_tol: e.rel_tol.unwrap_or(DEFAULT_REL_TOL),
            abs_tol: e.abs_tol.unwrap_or(DEFAULT_ABS_TOL),
            ..RunOptions::default()
        };
        Ok((e.horizon_gt_over_pi, opts))
    }

    pub fn walker_section(&self) -> WalkerConfig {
        self.walker.clone().unwrap_or(WalkerConfig {
            h0_a_per_m: None,
            modes: default_modes(),
            scan: None,
        })
    }
}

impl WalkerConfig {
    pub fn h0(&self) -> f64 {
        self.h0_a_per_m.unwrap_or(DEFAULT_BIAS_FIELD)
    }
}

pub fn nm(metres: f64) -> f64 {
    metres / NM
}
