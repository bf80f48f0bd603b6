//! Hamiltonians and Lindblad master equations for the full spin–magnon–photon
//! model, the reduced spin–photon model and the no-magnon baseline, plus the
//! integrator driver that turns them into occupation trajectories.
//!
//! Hamiltonians are `H/ħ` in rad/s. The dissipator convention is
//! `D[o]ρ = oρo† − {o†o, ρ}/2`; spin dephasing enters as `γ_s D[σ_z]` with no
//! rescaling of `σ_z`.

pub mod integrator;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::couplings::{effective_parameters, EffectiveParams};
use crate::error::{Error, Result};
use crate::hilbert::{
    embed, fock_annihilation, hermitian_eigenvalues, hermiticity_deviation, qubit_operators,
    trace_product, DensityMatrix, QOp, C64,
};
use crate::model::{thermal_occupation, PhysicalConstants, SystemParams};
use integrator::{rk4_fixed, AdaptiveOptions, Dopri5, StepFailure, StepStats};

/// Default Fock truncation for the magnon and photon modes.
pub const DEFAULT_FOCK_DIM: usize = 3;
/// Top-Fock-level population above which a run is flagged.
pub const LEAKAGE_LIMIT: f64 = 1e-4;
pub const DEFAULT_REL_TOL: f64 = 1e-8;
pub const DEFAULT_ABS_TOL: f64 = 1e-10;

/// One dissipation channel: `rate (n̄+1) D[o] + rate n̄ D[o†]`.
#[derive(Debug, Clone)]
pub struct LindbladTerm {
    pub op: QOp,
    pub rate: f64,
    pub nbar: f64,
}

impl LindbladTerm {
    pub fn new(op: QOp, rate: f64) -> Self {
        Self { op, rate, nbar: 0.0 }
    }

    pub fn thermal(op: QOp, rate: f64, nbar: f64) -> Self {
        Self { op, rate, nbar }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rate.is_finite() && self.rate >= 0.0) {
            return Err(Error::invalid("rate", format!("must be >= 0, got {}", self.rate)));
        }
        if !(self.nbar.is_finite() && self.nbar >= 0.0) {
            return Err(Error::invalid("nbar", format!("must be >= 0, got {}", self.nbar)));
        }
        Ok(())
    }
}

/// Reference frame for the full Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Lab,
    /// Rotating at the spin frequency `ω_NV`.
    Rotating,
}

/// Operators of a model's composite space.
struct ModelOps {
    sigma_z: QOp,
    sigma_plus: QOp,
    sigma_minus: QOp,
    magnon: Option<QOp>,
    photon: QOp,
}

impl ModelOps {
    fn full(n: usize) -> Result<Self> {
        let dims = vec![2, n, n];
        let q = qubit_operators();
        let a = fock_annihilation(n)?;
        Ok(Self {
            sigma_z: embed(&q.sigma_z, 0, &dims)?,
            sigma_plus: embed(&q.sigma_plus, 0, &dims)?,
            sigma_minus: embed(&q.sigma_minus, 0, &dims)?,
            magnon: Some(embed(&a, 1, &dims)?),
            photon: embed(&a, 2, &dims)?,
        })
    }

    fn reduced(n: usize) -> Result<Self> {
        let dims = vec![2, n];
        let q = qubit_operators();
        let a = fock_annihilation(n)?;
        Ok(Self {
            sigma_z: embed(&q.sigma_z, 0, &dims)?,
            sigma_plus: embed(&q.sigma_plus, 0, &dims)?,
            sigma_minus: embed(&q.sigma_minus, 0, &dims)?,
            magnon: None,
            photon: embed(&a, 1, &dims)?,
        })
    }

    fn for_dims(dims: &[usize]) -> Result<Self> {
        match dims {
            [2, n, m] if n == m => Self::full(*n),
            [2, n] => Self::reduced(*n),
            _ => Err(Error::invalid(
                "dims",
                format!("expected (2, N, N) or (2, N), got {dims:?}"),
            )),
        }
    }
}

fn number(op: &QOp) -> QOp {
    &op.dagger() * op
}

/// Full Hamiltonian on `(spin, magnon, photon)`.
///
/// Lab frame: `ω_C a†a + ω_K s†s + ½ω_NV σ_z − g(sσ₊ + h.c.) − λ(s†a + h.c.)`.
/// Rotating frame: the free part becomes `Δ1 s†s + Δ2 a†a`.
pub fn build_full_hamiltonian(p: &SystemParams, frame: Frame, fock_dim: usize) -> Result<QOp> {
    p.validate()?;
    let ops = ModelOps::full(fock_dim)?;
    let s = ops.magnon.as_ref().expect("full model has a magnon");
    let a = &ops.photon;
    let free = match frame {
        Frame::Lab => &(&(p.omega_c * &number(a)) + &(p.omega_k * &number(s))) + &((0.5 * p.omega_nv) * &ops.sigma_z),
        Frame::Rotating => &(p.delta1() * &number(s)) + &(p.delta2() * &number(a)),
    };
    let spin_magnon = &(s * &ops.sigma_plus) + &(&s.dagger() * &ops.sigma_minus);
    let photon_magnon = &(&s.dagger() * a) + &(&a.dagger() * s);
    Ok(&(&free - &(p.g * &spin_magnon)) - &(p.lambda * &photon_magnon))
}

/// Reduced Hamiltonian on `(spin, photon)`:
/// `(Δ2 − β²Δ1) a†a − ½α²Δ1 σ_z − g_eff(a†σ₋ + h.c.)`.
pub fn build_effective_hamiltonian(e: &EffectiveParams, fock_dim: usize) -> Result<QOp> {
    let ops = ModelOps::reduced(fock_dim)?;
    let a = &ops.photon;
    let cavity = (e.delta2 - e.beta * e.beta * e.delta1) * &number(a);
    let spin = (-0.5 * e.alpha * e.alpha * e.delta1) * &ops.sigma_z;
    let exchange = &(&a.dagger() * &ops.sigma_minus) + &(&ops.sigma_plus * a);
    Ok(&(&cavity + &spin) - &(e.g_eff * &exchange))
}

/// No-magnon baseline in the spin rotating frame:
/// `Δ2 a†a − g_direct(a†σ₋ + h.c.)` on `(spin, photon)`.
pub fn build_direct_hamiltonian(p: &SystemParams, fock_dim: usize) -> Result<QOp> {
    p.validate()?;
    let ops = ModelOps::reduced(fock_dim)?;
    let a = &ops.photon;
    let exchange = &(&a.dagger() * &ops.sigma_minus) + &(&ops.sigma_plus * a);
    Ok(&(p.delta2() * &number(a)) - &(p.g_direct * &exchange))
}

fn occupation_or_zero(c: &PhysicalConstants, omega: f64, temperature: f64) -> Result<f64> {
    if temperature == 0.0 {
        Ok(0.0)
    } else {
        thermal_occupation(c, omega, temperature)
    }
}

/// `γ_s D[σ_z]`, `γ_m D[s]` and `κ D[a]`, with thermal heating terms when `T > 0`.
pub fn full_model_terms(c: &PhysicalConstants, p: &SystemParams, fock_dim: usize) -> Result<Vec<LindbladTerm>> {
    p.validate()?;
    let ops = ModelOps::full(fock_dim)?;
    let n_k = occupation_or_zero(c, p.omega_k, p.temperature)?;
    let n_c = occupation_or_zero(c, p.omega_c, p.temperature)?;
    Ok(vec![
        LindbladTerm::new(ops.sigma_z, p.gamma_s),
        LindbladTerm::thermal(ops.magnon.expect("full model has a magnon"), p.gamma_m, n_k),
        LindbladTerm::thermal(ops.photon, p.kappa, n_c),
    ])
}

/// `γ_s D[σ_z] + γ_eff D[σ₋] + κ_eff D[a]`.
pub fn effective_model_terms(e: &EffectiveParams, fock_dim: usize) -> Result<Vec<LindbladTerm>> {
    let ops = ModelOps::reduced(fock_dim)?;
    Ok(vec![
        LindbladTerm::new(ops.sigma_z, e.gamma_s),
        LindbladTerm::new(ops.sigma_minus, e.gamma_eff),
        LindbladTerm::new(ops.photon, e.kappa_eff),
    ])
}

/// Same spin and cavity channels as the full model, without the magnon.
pub fn direct_model_terms(c: &PhysicalConstants, p: &SystemParams, fock_dim: usize) -> Result<Vec<LindbladTerm>> {
    p.validate()?;
    let ops = ModelOps::reduced(fock_dim)?;
    let n_c = occupation_or_zero(c, p.omega_c, p.temperature)?;
    Ok(vec![
        LindbladTerm::new(ops.sigma_z, p.gamma_s),
        LindbladTerm::thermal(ops.photon, p.kappa, n_c),
    ])
}

/// Precompiled Lindblad generator
/// `dρ/dt = −i(Kρ − ρK†) + Σ LρL†`, with `K = H − (i/2) Σ L†L`.
pub struct Generator {
    dims: Vec<usize>,
    k: DMatrix<C64>,
    k_adj: DMatrix<C64>,
    jumps: Vec<(DMatrix<C64>, DMatrix<C64>)>,
}

impl Generator {
    pub fn new(h: &QOp, terms: &[LindbladTerm]) -> Result<Self> {
        let dims = h.dims().to_vec();
        let n = h.dim();
        let mut jumps = Vec::new();
        let mut loss = DMatrix::<C64>::zeros(n, n);
        for term in terms {
            term.validate()?;
            if term.op.dims() != h.dims() {
                return Err(Error::DimensionMismatch {
                    expected: dims.clone(),
                    found: term.op.dims().to_vec(),
                });
            }
            let channels = [
                (term.rate * (term.nbar + 1.0), term.op.matrix().clone()),
                (term.rate * term.nbar, term.op.matrix().adjoint()),
            ];
            for (rate, op) in channels {
                if rate == 0.0 {
                    continue;
                }
                let l = op * C64::new(rate.sqrt(), 0.0);
                let l_adj = l.adjoint();
                loss += &l_adj * &l;
                jumps.push((l, l_adj));
            }
        }
        let k = h.matrix() - loss * C64::new(0.0, 0.5);
        let k_adj = k.adjoint();
        Ok(Self { dims, k, k_adj, jumps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn apply(&self, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let minus_i = C64::new(0.0, -1.0);
        *out = (&self.k * rho - rho * &self.k_adj) * minus_i;
        for (l, l_adj) in &self.jumps {
            *out += l * rho * l_adj;
        }
    }
}

/// Right-hand side of the master equation for `rho`.
pub fn lindblad_rhs(h: &QOp, terms: &[LindbladTerm], rho: &DensityMatrix) -> Result<QOp> {
    let gen = Generator::new(h, terms)?;
    if rho.dims() != h.dims() {
        return Err(Error::DimensionMismatch {
            expected: h.dims().to_vec(),
            found: rho.dims().to_vec(),
        });
    }
    let n = h.dim();
    let mut out = DMatrix::zeros(n, n);
    gen.apply(rho.as_op().matrix(), &mut out);
    QOp::new(h.dims().to_vec(), out)
}

/// `D[o]ρ = oρo† − {o†o, ρ}/2` applied to an arbitrary operator.
pub fn dissipator(o: &QOp, rho: &QOp) -> Result<QOp> {
    let od = o.dagger();
    let ood = &od * o;
    let jump = o.try_matmul(rho)?.try_matmul(&od)?;
    let anti = &(&ood * rho) + &(rho * &ood);
    Ok(&jump - &anti.scale(0.5))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stepper {
    /// Dormand–Prince 5(4) with error control.
    Adaptive,
    /// Classical RK4 with a fixed number of steps between samples.
    FixedRk4 { steps_per_sample: usize },
}

#[derive(Debug, Clone)]
pub struct EvolutionSpec {
    pub hamiltonian: QOp,
    pub terms: Vec<LindbladTerm>,
    pub rho0: DensityMatrix,
    /// Final time in seconds (or in whatever unit the rates use).
    pub t_final: f64,
    pub n_samples: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub stepper: Stepper,
}

impl EvolutionSpec {
    pub fn new(hamiltonian: QOp, terms: Vec<LindbladTerm>, rho0: DensityMatrix, t_final: f64, n_samples: usize) -> Self {
        Self {
            hamiltonian,
            terms,
            rho0,
            t_final,
            n_samples,
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
            stepper: Stepper::Adaptive,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(Error::invalid("t_final", format!("must be > 0, got {}", self.t_final)));
        }
        if self.n_samples < 2 {
            return Err(Error::invalid("n_samples", format!("must be >= 2, got {}", self.n_samples)));
        }
        for (name, tol) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(tol > 0.0 && tol < 1e-2) {
                return Err(Error::invalid(name, format!("must lie in (0, 1e-2), got {tol}")));
            }
        }
        if let Stepper::FixedRk4 { steps_per_sample: 0 } = self.stepper {
            return Err(Error::invalid("steps_per_sample", "must be >= 1"));
        }
        if self.rho0.dims() != self.hamiltonian.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.hamiltonian.dims().to_vec(),
                found: self.rho0.dims().to_vec(),
            });
        }
        Ok(())
    }
}

/// Conditions that make a run untrustworthy without invalidating its output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RunFlag {
    /// Top Fock level population exceeded [`LEAKAGE_LIMIT`].
    Leakage { max: f64 },
    StepUnderflow { t: f64 },
    StepBudgetExhausted { t: f64 },
}

impl std::fmt::Display for RunFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunFlag::Leakage { max } => write!(f, "truncation leakage {max:.3e} exceeds {LEAKAGE_LIMIT:e}"),
            RunFlag::StepUnderflow { t } => write!(f, "step size underflow at t = {t:e}"),
            RunFlag::StepBudgetExhausted { t } => write!(f, "step budget exhausted at t = {t:e}"),
        }
    }
}

/// Sampled occupations and numerical-health diagnostics of one evolution.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Population of the excited spin state `|−1⟩`.
    pub occ_spin: Vec<f64>,
    /// `⟨s†s⟩`, present for the full model only.
    pub occ_magnon: Option<Vec<f64>>,
    pub occ_photon: Vec<f64>,
    /// `⟨H⟩/ħ` in rad/s.
    pub energy: Vec<f64>,
    /// `|Tr ρ − 1|` at each sample.
    pub trace_dev: Vec<f64>,
    /// Largest `|Tr ρ − 1|` seen.
    pub trace_err: f64,
    /// Largest anti-Hermitian element of `ρ` seen.
    pub hermiticity_err: f64,
    /// Most negative eigenvalue of `ρ` seen.
    pub min_eig: f64,
    /// Largest population of any mode's top Fock level.
    pub leakage: f64,
    pub flags: Vec<RunFlag>,
    #[serde(skip)]
    pub stats: StepStats,
}

impl Trajectory {
    pub fn is_flagged(&self) -> bool {
        !self.flags.is_empty()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

struct Observer {
    spin: DMatrix<C64>,
    magnon: Option<DMatrix<C64>>,
    photon: DMatrix<C64>,
    top_levels: Vec<DMatrix<C64>>,
    hamiltonian: DMatrix<C64>,
}

impl Observer {
    fn new(spec: &EvolutionSpec) -> Result<Self> {
        let dims = spec.hamiltonian.dims().to_vec();
        let ops = ModelOps::for_dims(&dims)?;
        let spin = (&ops.sigma_plus * &ops.sigma_minus).into_matrix();
        let mut top_levels = Vec::new();
        for slot in 1..dims.len() {
            let n = dims[slot];
            top_levels.push(embed(&QOp::outer(&[n], n - 1, n - 1), slot, &dims)?.into_matrix());
        }
        Ok(Self {
            spin,
            magnon: ops.magnon.as_ref().map(|s| number(s).into_matrix()),
            photon: number(&ops.photon).into_matrix(),
            top_levels,
            hamiltonian: spec.hamiltonian.matrix().clone(),
        })
    }

    fn record(&self, t: f64, rho: &DMatrix<C64>, traj: &mut Trajectory) {
        traj.times.push(t);
        traj.occ_spin.push(trace_product(rho, &self.spin).re);
        if let (Some(op), Some(occ)) = (&self.magnon, traj.occ_magnon.as_mut()) {
            occ.push(trace_product(rho, op).re);
        }
        traj.occ_photon.push(trace_product(rho, &self.photon).re);
        traj.energy.push(trace_product(rho, &self.hamiltonian).re);
        let trace_dev = (rho.trace() - C64::new(1.0, 0.0)).norm();
        traj.trace_dev.push(trace_dev);
        traj.trace_err = traj.trace_err.max(trace_dev);
        traj.hermiticity_err = traj.hermiticity_err.max(hermiticity_deviation(rho));
        traj.min_eig = traj.min_eig.min(hermitian_eigenvalues(rho)[0]);
        for top in &self.top_levels {
            traj.leakage = traj.leakage.max(trace_product(rho, top).re);
        }
    }
}

/// Integrates the master equation and samples it at `n_samples` uniform times
/// on `[0, t_final]`.
///
/// Numerical trouble (step underflow, step budget, truncation leakage) is
/// reported through [`Trajectory::flags`]; an early stop truncates the
/// sample sequences.
pub fn evolve(spec: &EvolutionSpec) -> Result<Trajectory> {
    spec.validate()?;
    let gen = Generator::new(&spec.hamiltonian, &spec.terms)?;
    let observer = Observer::new(spec)?;
    let mut traj = Trajectory {
        times: Vec::with_capacity(spec.n_samples),
        occ_spin: Vec::with_capacity(spec.n_samples),
        occ_magnon: observer.magnon.as_ref().map(|_| Vec::with_capacity(spec.n_samples)),
        occ_photon: Vec::with_capacity(spec.n_samples),
        energy: Vec::with_capacity(spec.n_samples),
        trace_dev: Vec::with_capacity(spec.n_samples),
        trace_err: 0.0,
        hermiticity_err: 0.0,
        min_eig: f64::INFINITY,
        leakage: 0.0,
        flags: Vec::new(),
        stats: StepStats::default(),
    };
    let sample_time = |k: usize| spec.t_final * k as f64 / (spec.n_samples - 1) as f64;
    let rhs = |y: &DMatrix<C64>, dy: &mut DMatrix<C64>| gen.apply(y, dy);
    let rho0 = spec.rho0.as_op().matrix().clone();
    observer.record(0.0, &rho0, &mut traj);

    match spec.stepper {
        Stepper::Adaptive => {
            let opts = AdaptiveOptions {
                rel_tol: spec.rel_tol,
                abs_tol: spec.abs_tol,
                ..Default::default()
            };
            let mut solver = Dopri5::new(rhs, 0.0, rho0, opts);
            for k in 1..spec.n_samples {
                let t = sample_time(k);
                match solver.advance(t) {
                    Ok(()) => observer.record(t, solver.state(), &mut traj),
                    Err(StepFailure::Underflow { t }) => {
                        traj.flags.push(RunFlag::StepUnderflow { t });
                        break;
                    }
                    Err(StepFailure::MaxSteps { t }) => {
                        traj.flags.push(RunFlag::StepBudgetExhausted { t });
                        break;
                    }
                }
            }
            traj.stats = solver.stats;
        }
        Stepper::FixedRk4 { steps_per_sample } => {
            let mut rhs = rhs;
            let mut rho = rho0;
            for k in 1..spec.n_samples {
                rk4_fixed(&mut rhs, &mut rho, sample_time(k - 1), sample_time(k), steps_per_sample);
                observer.record(sample_time(k), &rho, &mut traj);
            }
            traj.stats.accepted = steps_per_sample * (spec.n_samples - 1);
            traj.stats.evaluations = 4 * traj.stats.accepted;
        }
    }
    if traj.leakage > LEAKAGE_LIMIT {
        traj.flags.push(RunFlag::Leakage { max: traj.leakage });
    }
    Ok(traj)
}

/// Which master equation to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Spin, magnon and photon in the spin rotating frame.
    Full,
    /// Magnon eliminated.
    Effective,
    /// Direct spin–photon coupling, no magnon.
    Direct,
}

/// Length of an evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    /// Dimensionless `g t`, with `g` the spin–magnon coupling.
    CouplingTimes(f64),
    Seconds(f64),
}

impl Horizon {
    pub fn seconds(&self, p: &SystemParams) -> Result<f64> {
        match *self {
            Horizon::Seconds(t) => Ok(t),
            Horizon::CouplingTimes(gt) => {
                if p.g <= 0.0 {
                    return Err(Error::invalid("horizon", "a g·t horizon needs g > 0"));
                }
                Ok(gt / p.g)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub fock_dim: usize,
    pub n_samples: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub stepper: Stepper,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            fock_dim: DEFAULT_FOCK_DIM,
            n_samples: 401,
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
            stepper: Stepper::Adaptive,
        }
    }
}

/// Builds the evolution for one model, starting from the excited spin with
/// both bosonic modes in vacuum.
pub fn model_spec(
    c: &PhysicalConstants,
    p: &SystemParams,
    kind: ModelKind,
    horizon: Horizon,
    opts: &RunOptions,
) -> Result<EvolutionSpec> {
    let n = opts.fock_dim;
    let (hamiltonian, terms, dims) = match kind {
        ModelKind::Full => (
            build_full_hamiltonian(p, Frame::Rotating, n)?,
            full_model_terms(c, p, n)?,
            vec![2, n, n],
        ),
        ModelKind::Effective => {
            let e = effective_parameters(p)?;
            (build_effective_hamiltonian(&e, n)?, effective_model_terms(&e, n)?, vec![2, n])
        }
        ModelKind::Direct => (build_direct_hamiltonian(p, n)?, direct_model_terms(c, p, n)?, vec![2, n]),
    };
    let zeros = vec![0; dims.len()];
    let rho0 = DensityMatrix::basis_state(&dims, &zeros)?;
    Ok(EvolutionSpec {
        hamiltonian,
        terms,
        rho0,
        t_final: horizon.seconds(p)?,
        n_samples: opts.n_samples,
        rel_tol: opts.rel_tol,
        abs_tol: opts.abs_tol,
        stepper: opts.stepper,
    })
}

pub fn simulate(
    c: &PhysicalConstants,
    p: &SystemParams,
    kind: ModelKind,
    horizon: Horizon,
    opts: &RunOptions,
) -> Result<Trajectory> {
    evolve(&model_spec(c, p, kind, horizon, opts)?)
}

/// Full and reduced runs on a shared time grid, with their pointwise deviations.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub full: Trajectory,
    pub effective: Trajectory,
    pub spin_deviation: Vec<f64>,
    pub photon_deviation: Vec<f64>,
    pub max_spin_deviation: f64,
    pub max_photon_deviation: f64,
    /// Largest magnon occupation in the full run.
    pub max_magnon: f64,
}

impl Comparison {
    pub fn max_deviation(&self) -> f64 {
        self.max_spin_deviation.max(self.max_photon_deviation)
    }

    pub fn is_flagged(&self) -> bool {
        self.full.is_flagged() || self.effective.is_flagged()
    }
}

/// Runs the full and the magnon-eliminated model from the same initial state
/// and reports how far their spin and photon occupations drift apart.
pub fn compare_full_vs_effective(
    c: &PhysicalConstants,
    p: &SystemParams,
    horizon: Horizon,
    opts: &RunOptions,
) -> Result<Comparison> {
    let e = effective_parameters(p)?;
    if !e.valid {
        return Err(Error::RegimeViolation {
            alpha: e.alpha.abs(),
            beta: e.beta.abs(),
        });
    }
    let full = simulate(c, p, ModelKind::Full, horizon, opts)?;
    let effective = simulate(c, p, ModelKind::Effective, horizon, opts)?;
    let diff = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect() };
    let spin_deviation = diff(&full.occ_spin, &effective.occ_spin);
    let photon_deviation = diff(&full.occ_photon, &effective.occ_photon);
    let max_of = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    Ok(Comparison {
        max_spin_deviation: max_of(&spin_deviation),
        max_photon_deviation: max_of(&photon_deviation),
        max_magnon: full.occ_magnon.as_deref().map(max_of).unwrap_or(0.0),
        spin_deviation,
        photon_deviation,
        full,
        effective,
    })
}
