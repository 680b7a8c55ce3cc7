//! Decomposition of Hermitian observables over the generator basis,
//! `A = a_I I + a_L alpha . L`, and the projector-derived operators built
//! on top of it (degenerate projectors, Hermitian-unitary reflections).
//!
//! The `(a_L, alpha)` pair is only defined up to a joint sign flip; the
//! canonical form here fixes `a_L >= 0`. Below `a_L = 1e-12` the traceless
//! part is declared absent and `alpha` is `None`, so downstream code never
//! sees a spurious random direction.

use num_complex::Complex64;

use crate::bloch::BlochVector;
use crate::error::{Error, Result};
use crate::matrix::{trace_product, CMatrix, HermitianMatrix, PROJECTOR_TOL};
use crate::sun_algebra::SunAlgebra;

/// Magnitudes below this declare the observable proportional to the identity.
pub const ALPHA_THRESHOLD: f64 = 1e-12;

/// `(a_I, a_L, alpha)` with `a_L >= 0` and `alpha` unit when present.
#[derive(Debug, Clone)]
pub struct ObservableDecomposition {
    pub n: usize,
    pub a_i: f64,
    pub a_l: f64,
    /// Unit direction of the traceless part; `None` when `a_l == 0`.
    pub alpha: Option<BlochVector>,
}

impl ObservableDecomposition {
    /// Assemble a decomposition from parts, canonicalizing the sign.
    pub fn new(n: usize, a_i: f64, a_l: f64, alpha: Option<BlochVector>) -> Result<Self> {
        if a_l.abs() <= ALPHA_THRESHOLD {
            return Ok(Self {
                n,
                a_i,
                a_l: 0.0,
                alpha: None,
            });
        }
        let alpha = alpha.ok_or(Error::MissingAlpha)?;
        if alpha.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: alpha.dim(),
            });
        }
        let defect = alpha.unit_defect();
        if defect > crate::bloch::UNIT_TOL {
            return Err(Error::NotUnit(alpha.norm()));
        }
        if a_l < 0.0 {
            Ok(Self {
                n,
                a_i,
                a_l: -a_l,
                alpha: Some(alpha.negated()),
            })
        } else {
            Ok(Self {
                n,
                a_i,
                a_l,
                alpha: Some(alpha),
            })
        }
    }
}

/// Project a Hermitian matrix onto `(a_I, a_L, alpha)`:
/// `a_I = Tr(A)/N`, raw components `Tr(A L_c)/2`.
pub fn decompose(alg: &SunAlgebra, a: &HermitianMatrix) -> Result<ObservableDecomposition> {
    let n = alg.n();
    if a.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.dim(),
        });
    }
    let a_i = a.trace().re / n as f64;
    let raw: Vec<f64> = (0..alg.count())
        .map(|c| trace_product(a.matrix(), alg.generator(c)).re / 2.0)
        .collect();
    let a_l = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    if a_l <= ALPHA_THRESHOLD {
        return Ok(ObservableDecomposition {
            n,
            a_i,
            a_l: 0.0,
            alpha: None,
        });
    }
    let alpha = BlochVector::new(n, raw.iter().map(|x| x / a_l).collect())?;
    Ok(ObservableDecomposition {
        n,
        a_i,
        a_l,
        alpha: Some(alpha),
    })
}

/// Rebuild the Hilbert-space matrix `a_I I + a_L alpha . L`.
pub fn compose(alg: &SunAlgebra, dec: &ObservableDecomposition) -> Result<HermitianMatrix> {
    let n = alg.n();
    if dec.n != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: dec.n,
        });
    }
    let mut mat = CMatrix::identity(n, n) * Complex64::new(dec.a_i, 0.0);
    if dec.a_l > 0.0 {
        let alpha = dec.alpha.as_ref().ok_or(Error::MissingAlpha)?;
        if alpha.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: alpha.dim(),
            });
        }
        for (c, &x) in alpha.components().iter().enumerate() {
            if x != 0.0 {
                mat += alg.generator(c) * Complex64::new(dec.a_l * x, 0.0);
            }
        }
    }
    HermitianMatrix::new(mat)
}

/// The Hermitian-unitary reflection `S = 2P - I` of a projector.
pub fn hermitian_unitary_from_projector(p: &HermitianMatrix) -> Result<HermitianMatrix> {
    let defect = p.projector_defect();
    if defect > PROJECTOR_TOL {
        return Err(Error::NotProjector(defect));
    }
    let n = p.dim();
    let s = p.matrix() * Complex64::new(2.0, 0.0) - CMatrix::identity(n, n);
    HermitianMatrix::new(s)
}
