//! Averages, variances, covariances, and commutator averages of decomposed
//! observables in a pure state, in Bloch-vector form:
//!
//! ```text
//! <A>       = a_I + a_L sqrt(2(N-1)/N) i.alpha
//! Var(A)    = (2/N) a_L^2 [1 - (N-1)(alpha.i)^2 + (N-2) (alpha*alpha).i]
//! Cov(A,B)  = (2/N) a_L b_L [alpha.beta - (N-1)(alpha.i)(beta.i) + (N-2) (alpha*beta).i]
//! <[A,B]>   = 2i a_L b_L sqrt(2(N-1)/N) (alpha ^ beta).i
//! <|[A,B]|^2> = (8/N) a_L^2 b_L^2 [||alpha ^ beta||^2 + (N-2) (w*w).i],  w = alpha ^ beta
//! ```
//!
//! Star terms are carried through `star_raw` with the finite combined
//! coefficient, so N = 2 needs no special-casing. Every quantity is tested
//! against its matrix-element oracle.

use serde::Serialize;

use crate::bloch::{purity_defect, star_raw, star_raw_coefficient, wedge, BlochVector, PURITY_TOL};
use crate::error::{Error, Result};
use crate::observables::ObservableDecomposition;
use crate::sun_algebra::SunAlgebra;

/// Slack allowed on the Heisenberg inequality (pure float noise).
pub const HEISENBERG_TOL: f64 = 1e-9;

/// Second-moment report for a pair of observables in one state.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MomentReport {
    pub mean_a: f64,
    pub mean_b: f64,
    pub var_a: f64,
    pub var_b: f64,
    pub cov_ab: f64,
    /// `<[A,B]>` is purely imaginary; this is its imaginary coefficient.
    pub comm_avg: f64,
    /// `<|[A,B]|^2>` (non-negative).
    pub comm_sq_avg: f64,
    /// `Var(A) Var(B) - Cov^2(A,B)`
    pub heisenberg_lhs: f64,
    /// `|<[A,B]>|^2 / 4`
    pub heisenberg_rhs: f64,
}

/// `<A>_psi` from the decomposition and the state's Bloch vector.
pub fn average(alg: &SunAlgebra, dec: &ObservableDecomposition, i: &BlochVector) -> Result<f64> {
    check_inputs(alg, dec, i)?;
    let nf = alg.n() as f64;
    let dot = match &dec.alpha {
        Some(alpha) => i.dot(alpha)?,
        None => 0.0,
    };
    Ok(dec.a_i + dec.a_l * (2.0 * (nf - 1.0) / nf).sqrt() * dot)
}

/// All second moments of the pair `(A, B)` in the pure state `i`.
pub fn moments(
    alg: &SunAlgebra,
    dec_a: &ObservableDecomposition,
    dec_b: &ObservableDecomposition,
    i: &BlochVector,
) -> Result<MomentReport> {
    check_inputs(alg, dec_a, i)?;
    check_inputs(alg, dec_b, i)?;
    let n = alg.n();
    let nf = n as f64;
    let cn = star_raw_coefficient(n);
    let zero = BlochVector::zeros(n);
    let alpha = dec_a.alpha.as_ref().unwrap_or(&zero);
    let beta = dec_b.alpha.as_ref().unwrap_or(&zero);
    let (al, bl) = (dec_a.a_l, dec_b.a_l);

    let mean_a = average(alg, dec_a, i)?;
    let mean_b = average(alg, dec_b, i)?;

    let ai = alpha.dot(i)?;
    let bi = beta.dot(i)?;
    let var_a = 2.0 / nf
        * al
        * al
        * (1.0 - (nf - 1.0) * ai * ai + cn * star_raw(alg, alpha, alpha)?.dot(i)?);
    let var_b = 2.0 / nf
        * bl
        * bl
        * (1.0 - (nf - 1.0) * bi * bi + cn * star_raw(alg, beta, beta)?.dot(i)?);
    let cov_ab = 2.0 / nf
        * al
        * bl
        * (alpha.dot(beta)? - (nf - 1.0) * ai * bi + cn * star_raw(alg, alpha, beta)?.dot(i)?);

    let w = wedge(alg, alpha, beta)?;
    let comm_avg = 2.0 * al * bl * (2.0 * (nf - 1.0) / nf).sqrt() * w.dot(i)?;
    let comm_sq_avg = 8.0 / nf
        * al
        * al
        * bl
        * bl
        * (w.dot(&w)? + cn * star_raw(alg, &w, &w)?.dot(i)?);

    Ok(MomentReport {
        mean_a,
        mean_b,
        var_a,
        var_b,
        cov_ab,
        comm_avg,
        comm_sq_avg,
        heisenberg_lhs: var_a * var_b - cov_ab * cov_ab,
        heisenberg_rhs: comm_avg * comm_avg / 4.0,
    })
}

/// `Var(A) Var(B) - Cov^2 >= |<[A,B]>|^2 / 4`, up to float slack.
pub fn heisenberg_check(report: &MomentReport) -> bool {
    report.heisenberg_lhs >= report.heisenberg_rhs - HEISENBERG_TOL
}

fn check_inputs(alg: &SunAlgebra, dec: &ObservableDecomposition, i: &BlochVector) -> Result<()> {
    if dec.n != alg.n() {
        return Err(Error::DimensionMismatch {
            expected: alg.n(),
            got: dec.n,
        });
    }
    let p = purity_defect(alg, i)?;
    if p > PURITY_TOL {
        return Err(Error::NotPure(p));
    }
    Ok(())
}
