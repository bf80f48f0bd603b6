//! Magnetostatic (Walker) modes of a saturated sphere: Polder susceptibility,
//! the separation constant `ξ₀` and the characteristic equation
//! `ξ₀ P_l^m'(ξ₀)/P_l^m(ξ₀) + m κ_p + l + 1 = 0`.
//!
//! None of these quantities depend on the sphere radius.

pub mod legendre;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::C64;
use crate::model::PhysicalConstants;

/// Relative tolerance on the (1,1) root versus `|γ|μ₀H0`.
pub const KITTEL_CHECK_TOL: f64 = 1e-8;
/// Default bias for the Kittel check, comfortably above `M_s/3`.
pub const DEFAULT_BIAS_FIELD: f64 = 1.0e5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MagnetostaticParams {
    /// Bias field `H0` in A/m.
    pub h0: f64,
    /// Saturation magnetization in A/m.
    pub ms: f64,
    /// `|γ|μ₀(H0 − M_s/3)`.
    pub omega0: f64,
    /// `|γ|μ₀M_s`.
    pub omega_m: f64,
}

impl MagnetostaticParams {
    pub fn new(c: &PhysicalConstants, h0: f64, ms: f64) -> Result<Self> {
        c.validate()?;
        if !(ms.is_finite() && ms > 0.0) {
            return Err(Error::invalid("ms", format!("must be > 0, got {ms}")));
        }
        if !(h0.is_finite() && h0 > ms / 3.0) {
            return Err(Error::invalid(
                "h0",
                format!("must exceed M_s/3 = {:.6e} A/m, got {h0}", ms / 3.0),
            ));
        }
        Ok(Self {
            h0,
            ms,
            omega0: c.gamma_abs * c.mu0 * (h0 - ms / 3.0),
            omega_m: c.gamma_abs * c.mu0 * ms,
        })
    }

    pub fn with_constants(c: &PhysicalConstants, h0: f64) -> Result<Self> {
        Self::new(c, h0, c.m_s)
    }

    /// `ω_0 + ω_M/3`.
    pub fn kittel_omega(&self) -> f64 {
        self.omega0 + self.omega_m / 3.0
    }
}

fn polder_denominator(omega: f64, omega0: f64) -> Result<f64> {
    let den = omega0 * omega0 - omega * omega;
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Singular(format!("Polder pole at ω = {omega:e}")));
    }
    Ok(den)
}

/// Diagonal Polder element `χ_p = ω_M ω_0/(ω_0² − ω²)`.
pub fn polder_chi(omega: f64, omega0: f64, omega_m: f64) -> Result<f64> {
    Ok(omega_m * omega0 / polder_denominator(omega, omega0)?)
}

/// Off-diagonal Polder element `κ_p = ω_M ω/(ω_0² − ω²)`.
pub fn polder_kappa(omega: f64, omega0: f64, omega_m: f64) -> Result<f64> {
    Ok(omega_m * omega / polder_denominator(omega, omega0)?)
}

/// `ξ₀ = √((1 + χ_p)/χ_p)` with its branch made explicit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Xi0 {
    pub radicand: f64,
    /// `√|radicand|`.
    pub magnitude: f64,
    /// Radicand negative: `ξ₀ = i·magnitude`.
    pub imaginary: bool,
}

impl Xi0 {
    pub fn from_chi(chi: f64) -> Result<Self> {
        if chi == 0.0 || !chi.is_finite() {
            return Err(Error::Singular(format!("ξ₀ undefined at χ_p = {chi}")));
        }
        let radicand = (1.0 + chi) / chi;
        Ok(Self {
            radicand,
            magnitude: radicand.abs().sqrt(),
            imaginary: radicand < 0.0,
        })
    }

    pub fn as_complex(&self) -> C64 {
        if self.imaginary {
            C64::new(0.0, self.magnitude)
        } else {
            C64::new(self.magnitude, 0.0)
        }
    }
}

pub fn xi0(omega: f64, params: &MagnetostaticParams) -> Result<Xi0> {
    Xi0::from_chi(polder_chi(omega, params.omega0, params.omega_m)?)
}

fn check_mode(l: usize, m: i32) -> Result<()> {
    if l < 1 {
        return Err(Error::invalid("l", "must be >= 1"));
    }
    if m.unsigned_abs() as usize > l {
        return Err(Error::invalid("m", format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    Ok(())
}

/// Left-hand side of the Walker characteristic equation.
///
/// The logarithmic derivative is even in `ξ₀`, so it is real on both branches.
pub fn walker_residual(l: usize, m: i32, omega: f64, params: &MagnetostaticParams) -> Result<f64> {
    check_mode(l, m)?;
    let kappa = polder_kappa(omega, params.omega0, params.omega_m)?;
    let xi = xi0(omega, params)?;
    let ratio = legendre::log_derivative(l, m, xi.as_complex())?;
    Ok(ratio.re + m as f64 * kappa + l as f64 + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub omega: f64,
    /// `None` at a singular point of the residual.
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WalkerRoot {
    pub l: usize,
    pub m: i32,
    pub omega: f64,
    pub residual: f64,
}

/// Sub-intervals of `[lo, hi]` that do not contain the Polder poles `±ω_0`.
fn pole_free_intervals(lo: f64, hi: f64, omega0: f64) -> Vec<(f64, f64)> {
    let mut cuts = vec![lo];
    for pole in [-omega0, omega0] {
        if pole > lo && pole < hi {
            cuts.push(pole);
        }
    }
    cuts.push(hi);
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}

fn check_range(lo: f64, hi: f64, points: usize) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::invalid("range", format!("need lo < hi, got [{lo}, {hi}]")));
    }
    if points < 2 {
        return Err(Error::invalid("points", "must be >= 2"));
    }
    Ok(())
}

/// Residual sampled at `points` cell centres of each pole-free sub-interval,
/// so no sample ever lands on a Polder pole.
pub fn scan_residual(
    l: usize,
    m: i32,
    params: &MagnetostaticParams,
    lo: f64,
    hi: f64,
    points: usize,
) -> Result<Vec<Vec<ScanPoint>>> {
    check_mode(l, m)?;
    check_range(lo, hi, points)?;
    Ok(pole_free_intervals(lo, hi, params.omega0)
        .into_iter()
        .map(|(a, b)| {
            (0..points)
                .map(|k| {
                    let omega = a + (b - a) * (k as f64 + 0.5) / points as f64;
                    ScanPoint {
                        omega,
                        residual: walker_residual(l, m, omega, params).ok(),
                    }
                })
                .collect()
        })
        .collect())
}

/// Bisects a sign change. Returns `None` when the bracket closes on a pole
/// rather than a root, i.e. when the residual grows instead of vanishing.
fn bisect<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, fa: f64, fb: f64) -> Result<Option<(f64, f64)>> {
    let bound = fa.abs().min(fb.abs());
    let mut fa = fa;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = match f(mid) {
            Ok(v) => v,
            Err(_) => return Ok(None),
        };
        if fm == 0.0 {
            return Ok(Some((mid, 0.0)));
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let root = 0.5 * (a + b);
    let fr = f(root)?;
    if fr.abs() > bound {
        return Ok(None);
    }
    if (b - a) > 4.0 * f64::EPSILON * root.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::NoConvergence(format!("bracket [{a:e}, {b:e}] did not close")));
    }
    Ok(Some((root, fr)))
}

/// All bracketed roots of the residual on `[lo, hi]`, in increasing `ω`.
///
/// Negative or otherwise unphysical roots are returned as found.
pub fn find_roots(
    l: usize,
    m: i32,
    params: &MagnetostaticParams,
    lo: f64,
    hi: f64,
    points: usize,
) -> Result<Vec<WalkerRoot>> {
    let f = |w: f64| walker_residual(l, m, w, params);
    let mut roots = Vec::new();
    for interval in scan_residual(l, m, params, lo, hi, points)? {
        for pair in interval.windows(2) {
            let (Some(fa), Some(fb)) = (pair[0].residual, pair[1].residual) else {
                continue;
            };
            if fa == 0.0 {
                roots.push(WalkerRoot { l, m, omega: pair[0].omega, residual: 0.0 });
                continue;
            }
            if fa.signum() == fb.signum() {
                continue;
            }
            if let Some((omega, residual)) = bisect(f, pair[0].omega, pair[1].omega, fa, fb)? {
                roots.push(WalkerRoot { l, m, omega, residual });
            }
        }
    }
    Ok(roots)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KittelCheck {
    pub root: f64,
    /// `|γ|μ₀H0`.
    pub expected: f64,
    pub rel_err: f64,
    pub pass: bool,
}

/// Finds the (1,1) root on `(0, ω_0 + ω_M]` and compares it to `|γ|μ₀H0`.
pub fn kittel_mode_check(c: &PhysicalConstants, params: &MagnetostaticParams) -> Result<KittelCheck> {
    let hi = params.omega0 + params.omega_m;
    let roots = find_roots(1, 1, params, 0.0, hi, 256)?;
    let [root] = roots.as_slice() else {
        return Err(Error::NoConvergence(format!("expected one (1,1) root, found {}", roots.len())));
    };
    let expected = c.gamma_abs * c.mu0 * params.h0;
    let rel_err = (root.omega - expected).abs() / expected;
    Ok(KittelCheck {
        root: root.omega,
        expected,
        rel_err,
        pass: rel_err < KITTEL_CHECK_TOL,
    })
}
