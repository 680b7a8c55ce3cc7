//! Weak values by two routes: the defining Hilbert-space ratio
//! `A_w = <psi_f|A|psi_i> / <psi_f|psi_i>` (the oracle everything else is
//! tested against) and the closed geometric form over three real vectors
//! on the generalized Bloch sphere. Also the Bargmann invariant, the
//! effective projector `Pi_i'`, and the split of an arbitrary weak-value
//! argument into a projector geometric phase minus the sign of the mean.

use num_complex::Complex64;
use serde::Serialize;

use crate::bloch::{
    self, purity_defect, star_raw, star_raw_coefficient, state_to_bloch, wedge, BlochVector,
    PURITY_TOL,
};
use crate::error::{Error, Result};
use crate::matrix::{inner, HermitianMatrix, StateVector, STATE_NORM_TOL};
use crate::observables::ObservableDecomposition;
use crate::sun_algebra::SunAlgebra;

/// Hard floor on the squared selection overlap; below this the weak value
/// is treated as undefined.
pub const SELECTION_FLOOR: f64 = 1e-12;
/// Results with squared overlap below this carry the amplification flag
/// (the value is legitimate but numerically delicate).
pub const AMPLIFICATION_THRESHOLD: f64 = 1e-4;
/// Width of the `Re = 0` band where the quadrant term is undefined.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Quadrant correction of the argument formula: 0 for `Re > 0`, pi for
/// `Re < 0`. On the `|Re| <= 1e-12` band the correction is reported as 0
/// with the boundary flag raised and the two-argument arctangent is the
/// arbiter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadrantPhi {
    pub phi: f64,
    pub boundary: bool,
}

pub fn quadrant_phi(z: Complex64) -> Result<QuadrantPhi> {
    if z.norm() <= 1e-12 {
        return Err(Error::UndefinedArgument);
    }
    if z.re > BOUNDARY_TOL {
        Ok(QuadrantPhi {
            phi: 0.0,
            boundary: false,
        })
    } else if z.re < -BOUNDARY_TOL {
        Ok(QuadrantPhi {
            phi: std::f64::consts::PI,
            boundary: false,
        })
    } else {
        Ok(QuadrantPhi {
            phi: 0.0,
            boundary: true,
        })
    }
}

/// A weak value plus the geometric breakdown it was assembled from.
///
/// `argument` is always the principal argument of `value` (the two-argument
/// arctangent is the single source of truth); `phi_term` is the quadrant
/// correction of the arctan construction, kept for fidelity tests against
/// the closed-form argument expression.
#[derive(Debug, Clone)]
pub struct WeakValueResult {
    pub value: Complex64,
    /// Principal argument in (-pi, pi].
    pub argument: f64,
    /// Quadrant term, 0 or pi.
    pub phi_term: f64,
    /// True when `Re(value)` sits in the band where the quadrant term is
    /// undefined.
    pub boundary: bool,
    /// True when the squared selection overlap is below
    /// [`AMPLIFICATION_THRESHOLD`].
    pub amplified: bool,
    /// `f . i`
    pub dot_fi: f64,
    /// `f . alpha`
    pub dot_fa: f64,
    /// `alpha . i`
    pub dot_ai: f64,
    /// `(N-2) f . (alpha * i)`, evaluated as
    /// `sqrt(N(N-1)/2) f . star_raw(alpha, i)` so that N = 2 is finite
    /// (and zero).
    pub star_invariant: f64,
    /// `f . (alpha ^ i)`
    pub wedge_invariant: f64,
}

impl WeakValueResult {
    /// Shared constructor for the closed-form routes (the qubit family
    /// fills the same invariant slots with its three-dimensional dots).
    pub(crate) fn from_qubit_parts(
        value: Complex64,
        amplified: bool,
        invariants: [f64; 5],
    ) -> Self {
        Self::assemble(value, amplified, invariants)
    }

    fn assemble(value: Complex64, amplified: bool, invariants: [f64; 5]) -> Self {
        let (phi_term, boundary) = match quadrant_phi(value) {
            Ok(q) => (q.phi, q.boundary),
            Err(_) => (0.0, true),
        };
        Self {
            value,
            argument: if value.norm() == 0.0 { 0.0 } else { value.arg() },
            phi_term,
            boundary,
            amplified,
            dot_fi: invariants[0],
            dot_fa: invariants[1],
            dot_ai: invariants[2],
            star_invariant: invariants[3],
            wedge_invariant: invariants[4],
        }
    }
}

/// Pre- and post-selected states with their cached Bloch images.
#[derive(Debug, Clone)]
pub struct PrePostSelection {
    pub psi_i: StateVector,
    pub psi_f: StateVector,
    pub i_vec: BlochVector,
    pub f_vec: BlochVector,
}

impl PrePostSelection {
    pub fn new(alg: &SunAlgebra, psi_i: StateVector, psi_f: StateVector) -> Result<Self> {
        let i_vec = state_to_bloch(alg, &psi_i)?;
        let f_vec = state_to_bloch(alg, &psi_f)?;
        Ok(Self {
            psi_i,
            psi_f,
            i_vec,
            f_vec,
        })
    }

    /// `|<psi_f|psi_i>|^2`, the post-selection probability at zero coupling.
    pub fn overlap_probability(&self) -> f64 {
        inner(&self.psi_f, &self.psi_i).norm_sqr()
    }
}

/// The defining ratio, evaluated by plain matrix-vector arithmetic. This is
/// the oracle against which every geometric path is tested.
pub fn weak_value_direct(a: &HermitianMatrix, sel: &PrePostSelection) -> Result<Complex64> {
    let ov = inner(&sel.psi_f, &sel.psi_i);
    if ov.norm() <= 1e-12 {
        return Err(Error::OrthogonalSelection { overlap: ov.norm() });
    }
    let apsi = a.apply(&sel.psi_i)?;
    Ok(inner(&sel.psi_f, &apsi) / ov)
}

/// The geometric weak value of a decomposed observable between pure
/// directions `i` and `f`:
///
/// ```text
/// A_w = [ a_I/N (1 + (N-1) f.i)
///       + a_L sqrt(2(N-1))/(N sqrt(N)) (f.alpha + alpha.i + S)
///       + i a_L (N-1)/N  f.(alpha ^ i) ] / [(1 + (N-1) f.i)/N]
/// ```
///
/// with `S = (N-2) f.(alpha * i)` carried as the finite star_raw
/// combination.
pub fn weak_value_geometric(
    alg: &SunAlgebra,
    dec: &ObservableDecomposition,
    i: &BlochVector,
    f: &BlochVector,
) -> Result<WeakValueResult> {
    let n = alg.n();
    if dec.n != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: dec.n,
        });
    }
    let pi = purity_defect(alg, i)?;
    if pi > PURITY_TOL {
        return Err(Error::NotPure(pi));
    }
    let pf = purity_defect(alg, f)?;
    if pf > PURITY_TOL {
        return Err(Error::NotPure(pf));
    }

    let nf = n as f64;
    let dot_fi = f.dot(i)?;
    let denom = (1.0 + (nf - 1.0) * dot_fi) / nf;
    if denom <= SELECTION_FLOOR {
        return Err(Error::OrthogonalSelection {
            overlap: denom.max(0.0).sqrt(),
        });
    }
    let amplified = denom < AMPLIFICATION_THRESHOLD;

    let (dot_fa, dot_ai, star_inv, wedge_inv) = match &dec.alpha {
        None => (0.0, 0.0, 0.0, 0.0),
        Some(alpha) => {
            let sr = star_raw(alg, alpha, i)?;
            let w = wedge(alg, alpha, i)?;
            (
                f.dot(alpha)?,
                alpha.dot(i)?,
                star_raw_coefficient(n) * f.dot(&sr)?,
                f.dot(&w)?,
            )
        }
    };

    let c1 = dec.a_l * (2.0 * (nf - 1.0)).sqrt() / (nf * nf.sqrt());
    let re = dec.a_i / nf + dec.a_i * (nf - 1.0) / nf * dot_fi
        + c1 * (dot_fa + dot_ai)
        + c1 * star_inv;
    let im = dec.a_l * (nf - 1.0) / nf * wedge_inv;
    let value = Complex64::new(re / denom, im / denom);

    Ok(WeakValueResult::assemble(
        value,
        amplified,
        [dot_fi, dot_fa, dot_ai, star_inv, wedge_inv],
    ))
}

/// Weak value of the projector onto pure direction `r`: the general form
/// specialized to `a_I = 1/N`, `a_L = c_p(1, N)`. Its numerator is the
/// Bargmann invariant of `(i, r, f)` and its denominator is the positive
/// overlap, so the argument is a geometric phase.
pub fn weak_value_projector_geometric(
    alg: &SunAlgebra,
    r: &BlochVector,
    i: &BlochVector,
    f: &BlochVector,
) -> Result<WeakValueResult> {
    let pr = purity_defect(alg, r)?;
    if pr > PURITY_TOL {
        return Err(Error::NotPure(pr));
    }
    let n = alg.n();
    let dec = ObservableDecomposition {
        n,
        a_i: 1.0 / n as f64,
        a_l: bloch::c_p(n, 1)?,
        alpha: Some(r.clone()),
    };
    weak_value_geometric(alg, &dec, i, f)
}

/// Weak value of the generator `alpha . L` via the dedicated closed form
///
/// ```text
/// L_w = sqrt(2(N-1)/N) [f.alpha + alpha.i + S + i sqrt(N(N-1)/2) f.(alpha ^ i)]
///       / [1 + (N-1) f.i]
/// ```
///
/// (`S` as in [`weak_value_geometric`]). Equal to the general form at
/// `a_I = 0, a_L = 1`; at N = 2 and N = 3 it reduces to the Pauli and
/// Gell-Mann expressions.
pub fn generator_weak_value(
    alg: &SunAlgebra,
    alpha: &BlochVector,
    i: &BlochVector,
    f: &BlochVector,
) -> Result<WeakValueResult> {
    let n = alg.n();
    if alpha.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: alpha.dim(),
        });
    }
    let defect = alpha.unit_defect();
    if defect > bloch::UNIT_TOL {
        return Err(Error::NotUnit(alpha.norm()));
    }
    let pi = purity_defect(alg, i)?;
    if pi > PURITY_TOL {
        return Err(Error::NotPure(pi));
    }
    let pf = purity_defect(alg, f)?;
    if pf > PURITY_TOL {
        return Err(Error::NotPure(pf));
    }

    let nf = n as f64;
    let dot_fi = f.dot(i)?;
    let denom = 1.0 + (nf - 1.0) * dot_fi;
    if denom / nf <= SELECTION_FLOOR {
        return Err(Error::OrthogonalSelection {
            overlap: (denom / nf).max(0.0).sqrt(),
        });
    }
    let sr = star_raw(alg, alpha, i)?;
    let w = wedge(alg, alpha, i)?;
    let dot_fa = f.dot(alpha)?;
    let dot_ai = alpha.dot(i)?;
    let star_inv = star_raw_coefficient(n) * f.dot(&sr)?;
    let wedge_inv = f.dot(&w)?;

    let pref = (2.0 * (nf - 1.0) / nf).sqrt();
    let re = pref * (dot_fa + dot_ai + star_inv) / denom;
    let im = pref * (nf * (nf - 1.0) / 2.0).sqrt() * wedge_inv / denom;

    Ok(WeakValueResult::assemble(
        Complex64::new(re, im),
        denom / nf < AMPLIFICATION_THRESHOLD,
        [dot_fi, dot_fa, dot_ai, star_inv, wedge_inv],
    ))
}

/// The Bargmann invariant `Tr(Pi_k ... Pi_2 Pi_1)` of an ordered tuple of
/// pure states, computed as the cyclic product of amplitudes.
pub fn bargmann_invariant(states: &[StateVector]) -> Result<Complex64> {
    if states.len() < 3 {
        return Err(Error::TooFewStates(states.len()));
    }
    let n = states[0].len();
    for s in states {
        if s.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: s.len(),
            });
        }
        let defect = crate::matrix::norm_defect(s);
        if defect > STATE_NORM_TOL {
            return Err(Error::NotNormalized(1.0 + defect));
        }
    }
    let mut acc = inner(&states[0], &states[states.len() - 1]);
    for j in 1..states.len() {
        acc *= inner(&states[j], &states[j - 1]);
    }
    Ok(acc)
}

/// The normalized image `psi_i' = A psi_i / ||A psi_i||` and its projector
/// `Pi_i'`, through which any weak-value argument reduces to a projector
/// geometric phase.
pub fn effective_projector(
    a: &HermitianMatrix,
    psi_i: &StateVector,
) -> Result<(StateVector, HermitianMatrix)> {
    let image = a.apply(psi_i)?;
    let norm = image.norm();
    if norm <= 1e-12 {
        return Err(Error::ZeroObservableAction);
    }
    let psi = image / Complex64::new(norm, 0.0);
    let proj = HermitianMatrix::projector_onto(&psi)?;
    Ok((psi, proj))
}

/// The argument split `arg A_w = arg Pi_{i',w} - arg <A>_{psi_i}` (mod 2 pi).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ArgumentDecomposition {
    /// Argument of the effective-projector weak value, in (-pi, pi].
    pub arg_projector: f64,
    /// 0 for a positive mean value, pi for a negative one.
    pub arg_mean: f64,
    /// Argument of the direct weak value, in (-pi, pi].
    pub total: f64,
}

pub fn argument_decomposition(
    a: &HermitianMatrix,
    sel: &PrePostSelection,
) -> Result<ArgumentDecomposition> {
    let wv = weak_value_direct(a, sel)?;
    let mean = a.expectation(&sel.psi_i)?;
    if mean.abs() <= 1e-12 {
        return Err(Error::VanishingMeanValue(mean));
    }
    let (_, proj) = effective_projector(a, &sel.psi_i)?;
    let wv_proj = weak_value_direct(&proj, sel)?;
    Ok(ArgumentDecomposition {
        arg_projector: wv_proj.arg(),
        arg_mean: if mean > 0.0 { 0.0 } else { std::f64::consts::PI },
        total: wv.arg(),
    })
}
