//! Explicit Runge–Kutta steppers for matrix-valued ODEs `dY/dt = f(Y)`.
//!
//! The adaptive stepper is Dormand–Prince 5(4) with FSAL and the usual
//! Hairer-style step-size controller. The fixed-step classical RK4 is kept
//! for reproducibility runs where the step sequence must not depend on
//! tolerances.

use nalgebra::DMatrix;

use crate::hilbert::C64;

type State = DMatrix<C64>;

// Dormand–Prince 5(4) tableau. The generator is autonomous, so the nodes
// c_i are not needed.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th-order weights minus embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

/// Tolerances and limits for the adaptive stepper.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Accepted + rejected steps allowed over the whole integration.
    pub max_steps: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_steps: 5_000_000,
        }
    }
}

/// Why an adaptive integration stopped early.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepFailure {
    /// The controller asked for a step below the floating-point resolution of `t`.
    Underflow { t: f64 },
    /// Step budget exhausted.
    MaxSteps { t: f64 },
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Adaptive Dormand–Prince integrator that keeps its step size and FSAL
/// derivative across calls to [`Dopri5::advance`].
pub struct Dopri5<F> {
    f: F,
    opts: AdaptiveOptions,
    t: f64,
    y: State,
    k1: State,
    h: Option<f64>,
    pub stats: StepStats,
}

impl<F> Dopri5<F>
where
    F: FnMut(&State, &mut State),
{
    pub fn new(mut f: F, t0: f64, y0: State, opts: AdaptiveOptions) -> Self {
        let mut k1 = State::zeros(y0.nrows(), y0.ncols());
        f(&y0, &mut k1);
        Self {
            f,
            opts,
            t: t0,
            y: y0,
            k1,
            h: None,
            stats: StepStats {
                evaluations: 1,
                ..Default::default()
            },
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> &State {
        &self.y
    }

    fn error_norm(&self, err: &State, y_new: &State) -> f64 {
        let mut acc = 0.0;
        for ((e, a), b) in err.iter().zip(self.y.iter()).zip(y_new.iter()) {
            let scale = self.opts.abs_tol + self.opts.rel_tol * a.norm().max(b.norm());
            // real and imaginary parts count as separate components
            acc += (e.re / scale).powi(2) + (e.im / scale).powi(2);
        }
        (acc / (2 * err.len()) as f64).sqrt()
    }

    fn rms_scaled(&self, v: &State) -> f64 {
        let mut acc = 0.0;
        for (x, y) in v.iter().zip(self.y.iter()) {
            let scale = self.opts.abs_tol + self.opts.rel_tol * y.norm();
            acc += (x.norm() / scale).powi(2);
        }
        (acc / v.len() as f64).sqrt()
    }

    /// Hairer's starting-step heuristic.
    fn initial_step(&mut self, span: f64) -> f64 {
        let d0 = self.rms_scaled(&self.y.clone());
        let d1 = self.rms_scaled(&self.k1.clone());
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 * span } else { 0.01 * d0 / d1 };
        let h0 = h0.min(span);
        let y1 = &self.y + &self.k1 * C64::new(h0, 0.0);
        let mut f1 = State::zeros(self.y.nrows(), self.y.ncols());
        (self.f)(&y1, &mut f1);
        self.stats.evaluations += 1;
        let d2 = self.rms_scaled(&(&f1 - &self.k1)) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6 * span)
        } else {
            (0.01 / d1.max(d2)).powf(1.0 / 5.0)
        };
        (100.0 * h0).min(h1).min(span)
    }

    /// Integrates up to exactly `t_end`.
    pub fn advance(&mut self, t_end: f64) -> Result<(), StepFailure> {
        let span = t_end - self.t;
        if span <= 0.0 {
            return Ok(());
        }
        let mut h = match self.h {
            Some(h) => h,
            None => self.initial_step(span),
        };
        let (n, m) = (self.y.nrows(), self.y.ncols());
        let mut k2 = State::zeros(n, m);
        let mut k3 = State::zeros(n, m);
        let mut k4 = State::zeros(n, m);
        let mut k5 = State::zeros(n, m);
        let mut k6 = State::zeros(n, m);
        let mut k7 = State::zeros(n, m);
        let c = |x: f64| C64::new(x, 0.0);

        while self.t < t_end {
            if self.stats.accepted + self.stats.rejected >= self.opts.max_steps {
                return Err(StepFailure::MaxSteps { t: self.t });
            }
            let remaining = t_end - self.t;
            let last = h >= remaining;
            let h_try = if last { remaining } else { h };
            if h_try <= 8.0 * f64::EPSILON * self.t.abs().max(remaining) {
                return Err(StepFailure::Underflow { t: self.t });
            }
            let y = &self.y;
            let k1 = &self.k1;
            let hc = |a: f64| c(h_try * a);

            (self.f)(&(y + k1 * hc(A21)), &mut k2);
            (self.f)(&(y + k1 * hc(A31) + &k2 * hc(A32)), &mut k3);
            (self.f)(&(y + k1 * hc(A41) + &k2 * hc(A42) + &k3 * hc(A43)), &mut k4);
            (self.f)(
                &(y + k1 * hc(A51) + &k2 * hc(A52) + &k3 * hc(A53) + &k4 * hc(A54)),
                &mut k5,
            );
            (self.f)(
                &(y + k1 * hc(A61) + &k2 * hc(A62) + &k3 * hc(A63) + &k4 * hc(A64) + &k5 * hc(A65)),
                &mut k6,
            );
            let y_new = y + k1 * hc(A71) + &k3 * hc(A73) + &k4 * hc(A74) + &k5 * hc(A75) + &k6 * hc(A76);
            (self.f)(&y_new, &mut k7);
            self.stats.evaluations += 6;

            let err = (k1 * c(E1) + &k3 * c(E3) + &k4 * c(E4) + &k5 * c(E5) + &k6 * c(E6) + &k7 * c(E7))
                * c(h_try);
            let en = self.error_norm(&err, &y_new);

            if en <= 1.0 {
                self.stats.accepted += 1;
                self.t = if last { t_end } else { self.t + h_try };
                self.y = y_new;
                std::mem::swap(&mut self.k1, &mut k7);
                let factor = if en == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * en.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                };
                // keep the controller's step, not the truncated one
                h = if last { h.max(h_try * factor) } else { h_try * factor };
            } else {
                self.stats.rejected += 1;
                h = h_try * (SAFETY * en.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
            }
        }
        self.h = Some(h);
        Ok(())
    }
}

/// Classical RK4 with `steps` equal steps from `t0` to `t1`.
pub fn rk4_fixed<F>(f: &mut F, y: &mut State, t0: f64, t1: f64, steps: usize)
where
    F: FnMut(&State, &mut State) + ?Sized,
{
    let h = (t1 - t0) / steps as f64;
    let (n, m) = (y.nrows(), y.ncols());
    let mut k1 = State::zeros(n, m);
    let mut k2 = State::zeros(n, m);
    let mut k3 = State::zeros(n, m);
    let mut k4 = State::zeros(n, m);
    let half = C64::new(h / 2.0, 0.0);
    let full = C64::new(h, 0.0);
    let sixth = C64::new(h / 6.0, 0.0);
    let two = C64::new(2.0, 0.0);
    for _ in 0..steps {
        f(y, &mut k1);
        f(&(&*y + &k1 * half), &mut k2);
        f(&(&*y + &k2 * half), &mut k3);
        f(&(&*y + &k3 * full), &mut k4);
        *y += (&k1 + &k2 * two + &k3 * two + &k4) * sixth;
    }
}
