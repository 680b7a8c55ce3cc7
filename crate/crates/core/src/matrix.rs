//! Dense complex matrices and state vectors on the Hilbert-space side.
//!
//! Everything geometric in this crate is cross-checked against plain
//! matrix-vector arithmetic, so this module is deliberately boring: a
//! checked Hermitian wrapper around `nalgebra::DMatrix<Complex64>` plus a
//! few trace and inner-product helpers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type StateVector = DVector<Complex64>;

/// Max entry-wise deviation from `M = M^H` accepted by [`HermitianMatrix::new`].
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Accepted deviation of a state norm from 1.
pub const STATE_NORM_TOL: f64 = 1e-10;
/// Accepted `||P^2 - P||` for projector inputs.
pub const PROJECTOR_TOL: f64 = 1e-9;

/// A dense N x N complex matrix asserted Hermitian at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    mat: CMatrix,
}

impl HermitianMatrix {
    /// Wrap a matrix, rejecting non-square or non-Hermitian input.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                expected: mat.nrows(),
                got: mat.ncols(),
            });
        }
        let defect = hermiticity_defect(&mat);
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self { mat })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: CMatrix::identity(n, n),
        }
    }

    /// Rank-1 projector `|psi><psi|` of a normalized state.
    pub fn projector_onto(psi: &StateVector) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        let n = psi.len();
        let mat = CMatrix::from_fn(n, n, |r, c| psi[r] * psi[c].conj());
        Ok(Self { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_inner(self) -> CMatrix {
        self.mat
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    /// `A |psi>`, with a dimension check.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: psi.len(),
            });
        }
        Ok(&self.mat * psi)
    }

    /// `<psi| A |psi>`, real for Hermitian `A`.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        let apsi = self.apply(psi)?;
        Ok(psi.dotc(&apsi).re)
    }

    /// Max entry of `A^2 - A`; zero iff `A` is a projector.
    pub fn projector_defect(&self) -> f64 {
        let sq = &self.mat * &self.mat;
        max_entry_abs(&(sq - &self.mat))
    }

    /// Eigenvalues and orthonormal eigenvectors of the Hermitian matrix.
    pub fn eigen(&self) -> Result<HermitianEigen> {
        let decomp = nalgebra::SymmetricEigen::try_new(self.mat.clone(), f64::EPSILON, 0)
            .ok_or(Error::EigenFailed)?;
        let values: Vec<f64> = decomp.eigenvalues.iter().copied().collect();
        let vectors: Vec<StateVector> = decomp
            .eigenvectors
            .column_iter()
            .map(|c| c.into_owned())
            .collect();
        Ok(HermitianEigen { values, vectors })
    }
}

/// Spectral decomposition of a [`HermitianMatrix`].
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<StateVector>,
}

/// Max entry of `|M - M^H|`.
pub fn hermiticity_defect(mat: &CMatrix) -> f64 {
    let n = mat.nrows();
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            worst = worst.max((mat[(r, c)] - mat[(c, r)].conj()).norm());
        }
    }
    worst
}

pub fn max_entry_abs(mat: &CMatrix) -> f64 {
    mat.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Hilbert-space inner product `<a|b>` (conjugate-linear in `a`).
pub fn inner(a: &StateVector, b: &StateVector) -> Complex64 {
    a.dotc(b)
}

/// `Tr(A B)` without forming the product matrix.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::default();
    for r in 0..n {
        for c in 0..n {
            acc += a[(r, c)] * b[(c, r)];
        }
    }
    acc
}

/// Error of `||psi||` relative to 1.
pub fn norm_defect(psi: &StateVector) -> f64 {
    (psi.norm() - 1.0).abs()
}

/// Rescale a state to unit norm.
pub fn normalized(psi: &StateVector) -> Result<StateVector> {
    let n = psi.norm();
    if n <= 0.0 {
        return Err(Error::NotNormalized(n));
    }
    Ok(psi / Complex64::new(n, 0.0))
}
