//! Legendre polynomials as coefficient vectors, plus the associated functions
//! on `[-1, 1]` by the usual upward recurrence.

use crate::error::{Error, Result};
use crate::hilbert::C64;

/// Ascending-power coefficients of `P_l`, from Bonnet's recurrence.
pub fn legendre_coefficients(l: usize) -> Vec<f64> {
    let mut prev = vec![1.0];
    if l == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 1.0];
    for n in 1..l {
        let nf = n as f64;
        let mut next = vec![0.0; n + 2];
        for (k, c) in cur.iter().enumerate() {
            next[k + 1] += (2.0 * nf + 1.0) * c;
        }
        for (k, c) in prev.iter().enumerate() {
            next[k] -= nf * c;
        }
        for c in next.iter_mut() {
            *c /= nf + 1.0;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect()
}

pub fn eval_poly(coeffs: &[f64], x: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * x + c)
}

fn check_degree(l: usize, m: i32) -> Result<()> {
    if m.unsigned_abs() as usize > l {
        return Err(Error::invalid("m", format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    Ok(())
}

/// `P_l^m(x)` for `|x| ≤ 1` with the Condon–Shortley phase.
pub fn associated_legendre(l: usize, m: i32, x: f64) -> Result<f64> {
    check_degree(l, m)?;
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::invalid("x", format!("must lie in [-1, 1], got {x}")));
    }
    let ma = m.unsigned_abs() as usize;
    let somx2 = ((1.0 - x) * (1.0 + x)).sqrt();
    let mut pmm = 1.0;
    let mut fact = 1.0;
    for _ in 0..ma {
        pmm *= -fact * somx2;
        fact += 2.0;
    }
    let value = if l == ma {
        pmm
    } else {
        let mut pm1 = x * (2 * ma + 1) as f64 * pmm;
        let mut pm0 = pmm;
        for ll in (ma + 2)..=l {
            let next = (x * (2 * ll - 1) as f64 * pm1 - (ll + ma - 1) as f64 * pm0) / (ll - ma) as f64;
            pm0 = pm1;
            pm1 = next;
        }
        pm1
    };
    Ok(if m < 0 { negative_order_factor(l, ma) * value } else { value })
}

/// `P_l^m(x) = (−1)^m (1 − x²)^{m/2} dᵐP_l/dxᵐ`, evaluated from the coefficients.
pub fn associated_legendre_poly(l: usize, m: i32, x: f64) -> Result<f64> {
    check_degree(l, m)?;
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::invalid("x", format!("must lie in [-1, 1], got {x}")));
    }
    let ma = m.unsigned_abs() as usize;
    let mut q = legendre_coefficients(l);
    for _ in 0..ma {
        q = derivative(&q);
    }
    let sign = if ma.is_multiple_of(2) { 1.0 } else { -1.0 };
    let value = sign * (1.0 - x * x).powf(ma as f64 / 2.0) * eval_poly(&q, C64::new(x, 0.0)).re;
    Ok(if m < 0 { negative_order_factor(l, ma) * value } else { value })
}

// P_l^{−m} = (−1)^m (l−m)!/(l+m)! P_l^m
fn negative_order_factor(l: usize, ma: usize) -> f64 {
    let ratio: f64 = ((l - ma + 1)..=(l + ma)).map(|k| 1.0 / k as f64).product();
    if ma.is_multiple_of(2) {
        ratio
    } else {
        -ratio
    }
}

/// Logarithmic derivative `ξ P_l^m'(ξ) / P_l^m(ξ)` at an arbitrary complex `ξ`.
///
/// Writing `P_l^m ∝ (ξ² − 1)^{|m|/2} Q(ξ)` with `Q = d^{|m|}P_l/dξ^{|m|}` gives
/// `|m| ξ²/(ξ² − 1) + ξQ'/Q`, which is independent of normalisation, phase and
/// the sign of `m`.
pub fn log_derivative(l: usize, m: i32, xi: C64) -> Result<C64> {
    check_degree(l, m)?;
    let ma = m.unsigned_abs() as usize;
    let mut q = legendre_coefficients(l);
    for _ in 0..ma {
        q = derivative(&q);
    }
    let dq = derivative(&q);
    let qv = eval_poly(&q, xi);
    let xi2 = xi * xi;
    let scale = xi2.norm().max(1.0);
    if ma > 0 && (xi2 - 1.0).norm() <= f64::EPSILON * scale {
        return Err(Error::Singular(format!("P_{l}^{m} vanishes at ξ = ±1")));
    }
    if qv.norm() == 0.0 {
        return Err(Error::Singular(format!("P_{l}^{m} vanishes at ξ = {xi}")));
    }
    let mut out = xi * eval_poly(&dq, xi) / qv;
    if ma > 0 {
        out += xi2 * ma as f64 / (xi2 - 1.0);
    }
    Ok(out)
}
