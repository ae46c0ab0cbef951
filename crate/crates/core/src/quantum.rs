//! Minimal numerical kernel: complex dense matrices, Fock-space ladder
//! operators, tensor products, Hermitian eigendecomposition and linear solves.
//!
//! Everything lives on a composite Hilbert space of one cavity mode and one
//! mechanical mode. The tensor ordering is fixed once and for all: the cavity
//! factor is leftmost, so composite basis index = photon_index * n_b +
//! phonon_index.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, Norm, Solve, UPLO};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type CMat = Array2<C64>;
pub type CVec = Array1<C64>;

/// Fock cutoffs defining the simulation space: photon numbers `0..n_a-1`,
/// phonon numbers `0..n_b-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    pub n_a: usize,
    pub n_b: usize,
}

impl Truncation {
    pub fn new(n_a: usize, n_b: usize) -> Result<Self> {
        if n_a < 1 || n_b < 2 {
            return Err(Error::InvalidParameter(format!(
                "truncation requires n_a >= 1 and n_b >= 2, got ({n_a}, {n_b})"
            )));
        }
        Ok(Truncation { n_a, n_b })
    }

    /// Composite dimension d = n_a * n_b.
    pub fn dim(&self) -> usize {
        self.n_a * self.n_b
    }

    /// Composite basis index of |photon_a, phonon_b>.
    pub fn index(&self, photon: usize, phonon: usize) -> usize {
        debug_assert!(photon < self.n_a && phonon < self.n_b);
        photon * self.n_b + phonon
    }
}

impl std::fmt::Display for Truncation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.n_a, self.n_b)
    }
}

/// Which tensor factor a single-mode operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Cavity,
    Mechanical,
}

/// Dense complex matrix tagged with the composite dimensions it acts on.
#[derive(Debug, Clone)]
pub struct Operator {
    pub dims: Truncation,
    pub data: CMat,
}

impl Operator {
    pub fn new(dims: Truncation, data: CMat) -> Result<Self> {
        let d = dims.dim();
        if data.nrows() != d || data.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "operator data is {}x{} but dims {} give d = {}",
                data.nrows(),
                data.ncols(),
                dims,
                d
            )));
        }
        Ok(Operator { dims, data })
    }

    pub fn zeros(dims: Truncation) -> Self {
        let d = dims.dim();
        Operator { dims, data: CMat::zeros((d, d)) }
    }

    pub fn identity(dims: Truncation) -> Self {
        Operator { dims, data: CMat::eye(dims.dim()) }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Operator {
        Operator { dims: self.dims, data: dagger(&self.data) }
    }

    pub fn dim(&self) -> usize {
        self.dims.dim()
    }
}

pub fn dagger(m: &CMat) -> CMat {
    m.t().mapv(|z| z.conj())
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_deviation(m: &CMat) -> f64 {
    let diff = m - &dagger(m);
    max_abs(&diff)
}

/// Annihilation operator for the chosen mode, identity-padded on the other
/// factor. On the truncated space <m-1|c|m> = sqrt(m) for 1 <= m <= n-1; the
/// top level is simply cut.
pub fn ladder(dims: Truncation, which: Mode) -> Operator {
    let lower = |n: usize| -> CMat {
        let mut m = CMat::zeros((n, n));
        for k in 1..n {
            m[(k - 1, k)] = C64::new((k as f64).sqrt(), 0.0);
        }
        m
    };
    let data = match which {
        Mode::Cavity => kron(&lower(dims.n_a), &CMat::eye(dims.n_b)),
        Mode::Mechanical => kron(&CMat::eye(dims.n_a), &lower(dims.n_b)),
    };
    Operator { dims, data }
}

/// Standard Kronecker product; dimensions multiply, `lhs` is the leftmost
/// (slow) factor.
pub fn kron(lhs: &CMat, rhs: &CMat) -> CMat {
    ndarray::linalg::kron(lhs, rhs)
}

/// Eigendecomposition of a Hermitian operator. Eigenvalues come back sorted
/// ascending with eigenvectors in matching columns; the reconstruction
/// V diag(w) V† matches the input to 1e-10.
pub fn eig_hermitian(op: &Operator) -> Result<(Array1<f64>, CMat)> {
    let dev = hermiticity_deviation(&op.data);
    if dev > 1e-10 {
        return Err(Error::NotHermitian { max_dev: dev });
    }
    let (vals, vecs) = op
        .data
        .eigh(UPLO::Lower)
        .map_err(|e| Error::SingularSystem { detail: format!("eigh failed: {e}") })?;
    debug_assert!(vals.windows(2).into_iter().all(|w| w[0] <= w[1]));
    // LAPACK sees the row-major buffer as its transpose, so the returned
    // columns are eigenvectors of H^T; conjugating recovers those of H.
    Ok((vals, vecs.mapv(|z| z.conj())))
}

/// Eigenvalues only, for Hermitian matrices that are not full `Operator`s
/// (e.g. density matrices during validation).
pub fn eigvals_hermitian(m: &CMat) -> Result<Array1<f64>> {
    let dev = hermiticity_deviation(m);
    if dev > 1e-10 {
        return Err(Error::NotHermitian { max_dev: dev });
    }
    let (vals, _) = m
        .eigh(UPLO::Lower)
        .map_err(|e| Error::SingularSystem { detail: format!("eigh failed: {e}") })?;
    Ok(vals)
}

/// Dense LU solve with a residual check:
/// ||Ax - rhs|| <= 1e-10 (||A||_F ||x|| + ||rhs||).
pub fn solve_linear(a: &CMat, rhs: &CVec) -> Result<CVec> {
    if a.nrows() != a.ncols() || a.nrows() != rhs.len() {
        return Err(Error::DimensionMismatch(format!(
            "solve_linear: A is {}x{}, rhs has length {}",
            a.nrows(),
            a.ncols(),
            rhs.len()
        )));
    }
    let x = a
        .solve(rhs)
        .map_err(|e| Error::SingularSystem { detail: format!("LU solve failed: {e}") })?;
    let resid = (a.dot(&x) - rhs).norm_l2();
    let bound = 1e-10 * (a.norm_l2() * x.norm_l2() + rhs.norm_l2());
    if resid > bound {
        return Err(Error::SingularSystem {
            detail: format!("residual {resid:.3e} exceeds bound {bound:.3e}"),
        });
    }
    Ok(x)
}

/// Hermitian, unit-trace, positive-semidefinite state on the composite space.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub dims: Truncation,
    pub data: CMat,
}

/// Negative-eigenvalue slack accepted when validating a density matrix.
pub const POSITIVITY_SLACK: f64 = 1e-8;

impl DensityMatrix {
    /// Validates Hermiticity (1e-10), unit trace (1e-10) and positivity
    /// (min eigenvalue >= -1e-8).
    pub fn new(dims: Truncation, data: CMat) -> Result<Self> {
        let d = dims.dim();
        if data.nrows() != d || data.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "density matrix is {}x{} but dims {} give d = {}",
                data.nrows(),
                data.ncols(),
                dims,
                d
            )));
        }
        let dev = hermiticity_deviation(&data);
        if dev > 1e-10 {
            return Err(Error::NotHermitian { max_dev: dev });
        }
        let tr = trace(&data);
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "density matrix trace {tr} is not 1"
            )));
        }
        let min_eig = eigvals_hermitian(&data)?
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -POSITIVITY_SLACK {
            return Err(Error::NonPositive { min_eig });
        }
        Ok(DensityMatrix { dims, data })
    }

    /// Pure state |photon_a, phonon_b><photon_a, phonon_b|.
    pub fn fock(dims: Truncation, photon: usize, phonon: usize) -> Result<Self> {
        if photon >= dims.n_a || phonon >= dims.n_b {
            return Err(Error::InvalidParameter(format!(
                "Fock state ({photon}, {phonon}) outside truncation {dims}"
            )));
        }
        let mut data = CMat::zeros((dims.dim(), dims.dim()));
        let k = dims.index(photon, phonon);
        data[(k, k)] = C64::new(1.0, 0.0);
        Ok(DensityMatrix { dims, data })
    }

    pub fn vacuum(dims: Truncation) -> Self {
        Self::fock(dims, 0, 0).expect("vacuum always exists")
    }

    /// <O> = tr(rho O).
    pub fn expect(&self, op: &CMat) -> C64 {
        trace(&self.data.dot(op))
    }

    pub fn dim(&self) -> usize {
        self.dims.dim()
    }
}

pub fn trace(m: &CMat) -> C64 {
    m.diag().sum()
}
