//! Dense operators on composite truncated Hilbert spaces.
//!
//! Subsystems are ordered (spin, magnon, photon) for the full model and
//! (spin, photon) for the reduced one. The spin basis is `{|−1⟩, |0⟩}`, so
//! index 0 is the excited qubit state.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex operator together with its subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct QOp {
    dims: Vec<usize>,
    data: DMatrix<C64>,
}

impl QOp {
    pub fn new(dims: Vec<usize>, data: DMatrix<C64>) -> Result<Self> {
        let n: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::invalid("dims", "dimensions must be non-empty and nonzero"));
        }
        if data.nrows() != n || data.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: vec![n, n],
                found: vec![data.nrows(), data.ncols()],
            });
        }
        Ok(Self { dims, data })
    }

    pub fn identity(dims: &[usize]) -> Self {
        let n = dims.iter().product();
        Self {
            dims: dims.to_vec(),
            data: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(dims: &[usize]) -> Self {
        let n = dims.iter().product();
        Self {
            dims: dims.to_vec(),
            data: DMatrix::zeros(n, n),
        }
    }

    /// `|i⟩⟨j|` in the flattened basis.
    pub fn outer(dims: &[usize], i: usize, j: usize) -> Self {
        let mut op = Self::zeros(dims);
        op.data[(i, j)] = ONE;
        op
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.data
    }

    pub fn dagger(&self) -> Self {
        Self {
            dims: self.dims.clone(),
            data: self.data.adjoint(),
        }
    }

    pub fn scale(&self, s: impl Into<C64>) -> Self {
        Self {
            dims: self.dims.clone(),
            data: &self.data * s.into(),
        }
    }

    fn check_same(&self, other: &QOp) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims.clone(),
                found: other.dims.clone(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &QOp) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            dims: self.dims.clone(),
            data: &self.data + &other.data,
        })
    }

    pub fn try_matmul(&self, other: &QOp) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            dims: self.dims.clone(),
            data: &self.data * &other.data,
        })
    }

    /// `[A, B] = AB − BA`
    pub fn commutator(&self, other: &QOp) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            dims: self.dims.clone(),
            data: &self.data * &other.data - &other.data * &self.data,
        })
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    /// Kronecker product; the result's dims are the concatenation.
    pub fn kron(&self, other: &QOp) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            dims,
            data: self.data.kronecker(&other.data),
        }
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(&self.data)
    }

    /// Largest absolute element.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues of the Hermitian part `(A + A†)/2`, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.data)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        self.hermitian_eigenvalues()[0]
    }
}

pub(crate) fn hermiticity_deviation(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

impl Add for &QOp {
    type Output = QOp;
    fn add(self, rhs: &QOp) -> QOp {
        self.try_add(rhs).expect("operator dimensions differ")
    }
}

impl Sub for &QOp {
    type Output = QOp;
    fn sub(self, rhs: &QOp) -> QOp {
        self.try_add(&-rhs).expect("operator dimensions differ")
    }
}

impl Mul for &QOp {
    type Output = QOp;
    fn mul(self, rhs: &QOp) -> QOp {
        self.try_matmul(rhs).expect("operator dimensions differ")
    }
}

impl Mul<&QOp> for f64 {
    type Output = QOp;
    fn mul(self, rhs: &QOp) -> QOp {
        rhs.scale(self)
    }
}

impl Neg for &QOp {
    type Output = QOp;
    fn neg(self) -> QOp {
        self.scale(-1.0)
    }
}

/// Truncated bosonic annihilation operator: `√n` on the superdiagonal.
pub fn fock_annihilation(n: usize) -> Result<QOp> {
    if n < 2 {
        return Err(Error::invalid("N", format!("Fock truncation must be >= 2, got {n}")));
    }
    let mut data = DMatrix::zeros(n, n);
    for k in 1..n {
        data[(k - 1, k)] = C64::new((k as f64).sqrt(), 0.0);
    }
    Ok(QOp { dims: vec![n], data })
}

/// Qubit operators in the `{|−1⟩, |0⟩}` basis.
#[derive(Debug, Clone)]
pub struct QubitOps {
    /// `|−1⟩⟨−1| − |0⟩⟨0|`
    pub sigma_z: QOp,
    /// `|−1⟩⟨0|`
    pub sigma_plus: QOp,
    /// `|0⟩⟨−1|`
    pub sigma_minus: QOp,
}

pub fn qubit_operators() -> QubitOps {
    let d = [2];
    QubitOps {
        sigma_z: &QOp::outer(&d, 0, 0) - &QOp::outer(&d, 1, 1),
        sigma_plus: QOp::outer(&d, 0, 1),
        sigma_minus: QOp::outer(&d, 1, 0),
    }
}

/// Places `op` at position `slot` of the tensor product over `dims`,
/// identities elsewhere.
pub fn embed(op: &QOp, slot: usize, dims: &[usize]) -> Result<QOp> {
    if slot >= dims.len() {
        return Err(Error::invalid("slot", format!("{slot} out of range for {} subsystems", dims.len())));
    }
    if op.dim() != dims[slot] {
        return Err(Error::DimensionMismatch {
            expected: vec![dims[slot]],
            found: op.dims.clone(),
        });
    }
    let left: usize = dims[..slot].iter().product();
    let right: usize = dims[slot + 1..].iter().product();
    let data = DMatrix::<C64>::identity(left, left)
        .kronecker(&op.data)
        .kronecker(&DMatrix::<C64>::identity(right, right));
    Ok(QOp {
        dims: dims.to_vec(),
        data,
    })
}

/// Tolerances a [`DensityMatrix`] must meet at construction.
pub const STATE_HERMITICITY_TOL: f64 = 1e-10;
pub const STATE_TRACE_TOL: f64 = 1e-10;
pub const STATE_MIN_EIG_TOL: f64 = -1e-8;

/// A validated density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(QOp);

impl DensityMatrix {
    pub fn new(op: QOp) -> Result<Self> {
        let herm = op.hermiticity_deviation();
        if herm > STATE_HERMITICITY_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = op.trace();
        if (tr - ONE).norm() > STATE_TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min = op.min_eigenvalue();
        if min < STATE_MIN_EIG_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self(op))
    }

    /// `|ψ⟩⟨ψ|` for a basis product state given per-subsystem indices.
    pub fn basis_state(dims: &[usize], indices: &[usize]) -> Result<Self> {
        if indices.len() != dims.len() {
            return Err(Error::DimensionMismatch {
                expected: dims.to_vec(),
                found: indices.to_vec(),
            });
        }
        let mut flat = 0;
        for (&i, &d) in indices.iter().zip(dims) {
            if i >= d {
                return Err(Error::invalid("indices", format!("level {i} outside dimension {d}")));
            }
            flat = flat * d + i;
        }
        Ok(Self(QOp::outer(dims, flat, flat)))
    }

    pub fn as_op(&self) -> &QOp {
        &self.0
    }

    pub fn dims(&self) -> &[usize] {
        self.0.dims()
    }
}

/// `Tr(ρ A)`.
pub fn expectation(rho: &DensityMatrix, op: &QOp) -> Result<C64> {
    rho.0.check_same(op)?;
    Ok(trace_product(rho.0.matrix(), op.matrix()))
}

/// `Tr(A B)` without forming the product.
pub(crate) fn trace_product(a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}
