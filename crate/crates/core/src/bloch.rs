//! Generalized Bloch-sphere geometry: states and projector directions as
//! real unit vectors in `N^2 - 1` dimensions, plus the star and wedge
//! products built from the SU(N) structure constants.
//!
//! Pure states map to unit vectors satisfying `r * r = r` (star product);
//! most points of the sphere are not states for N >= 3. The star product
//! carries the conventional coefficient `c_s = sqrt(N(N-1)/2)/(N-2)`, which
//! is singular at N = 2: [`star`] rejects qubits, and every formula that
//! multiplies the star product by `(N-2)` goes through [`star_raw`] with the
//! finite combined coefficient [`star_raw_coefficient`] instead (the SU(2)
//! star contribution is identically zero, so this reproduces the qubit
//! limit without a 0 * infinity ambiguity).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, HermitianMatrix, StateVector, STATE_NORM_TOL};
use crate::sun_algebra::SunAlgebra;

/// Accepted deviation of a Bloch-vector norm from 1.
pub const UNIT_TOL: f64 = 1e-10;
/// Accepted star-product defect for a vector claimed pure (looser than the
/// algebra tolerance: the defect composes two tensor contractions).
pub const PURITY_TOL: f64 = 1e-9;

/// Projector normalization constant `c_p = sqrt(k(N-k)/(2N))`.
pub fn c_p(n: usize, k: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    if k < 1 || k > n - 1 {
        return Err(Error::DegeneracyOutOfRange { k, n });
    }
    let (nf, kf) = (n as f64, k as f64);
    Ok((kf * (nf - kf) / (2.0 * nf)).sqrt())
}

/// Star-product constant `c_s = sqrt(N(N-1)/2)/(N-2)`; undefined at N = 2.
pub fn c_s(n: usize) -> Option<f64> {
    if n < 3 {
        return None;
    }
    let nf = n as f64;
    Some((nf * (nf - 1.0) / 2.0).sqrt() / (nf - 2.0))
}

/// The finite combination `(N-2) c_s = sqrt(N(N-1)/2)`, valid for all N >= 2.
pub fn star_raw_coefficient(n: usize) -> f64 {
    let nf = n as f64;
    (nf * (nf - 1.0) / 2.0).sqrt()
}

/// Normalization constants tied to one `(N, k)` projector family.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SphereConstants {
    pub n: usize,
    pub k: usize,
    pub c_p: f64,
    /// `None` at N = 2 where the star coefficient is singular.
    pub c_s: Option<f64>,
}

impl SphereConstants {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        Ok(Self {
            n,
            k,
            c_p: c_p(n, k)?,
            c_s: c_s(n),
        })
    }
}

/// A real vector of length `N^2 - 1` tagged with its Hilbert dimension N.
///
/// Unit norm is an invariant only of vectors representing states or
/// projector directions; products and raw embeddings are unnormalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    n: usize,
    components: Vec<f64>,
}

impl BlochVector {
    pub fn new(n: usize, components: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        if components.len() != n * n - 1 {
            return Err(Error::ComponentCount {
                expected: n * n - 1,
                got: components.len(),
            });
        }
        Ok(Self { n, components })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            components: vec![0.0; n * n - 1],
        }
    }

    /// Unit vector along tensor slot `a` (0-based).
    pub fn axis(n: usize, a: usize) -> Result<Self> {
        let mut v = Self::zeros(n);
        if a >= v.components.len() {
            return Err(Error::ComponentCount {
                expected: n * n - 1,
                got: a,
            });
        }
        v.components[a] = 1.0;
        Ok(v)
    }

    /// Hilbert dimension N.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `| ||v|| - 1 |`.
    pub fn unit_defect(&self) -> f64 {
        (self.norm() - 1.0).abs()
    }

    pub fn dot(&self, other: &Self) -> Result<f64> {
        check_same_dim(self, other)?;
        Ok(dot_slices(&self.components, &other.components))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n: self.n,
            components: self.components.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }

    /// Euclidean distance to another vector of the same dimension.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        check_same_dim(self, other)?;
        Ok(self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }
}

fn check_same_dim(u: &BlochVector, v: &BlochVector) -> Result<()> {
    if u.n != v.n {
        return Err(Error::DimensionMismatch {
            expected: u.n,
            got: v.n,
        });
    }
    Ok(())
}

fn dot_slices(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_alg(alg: &SunAlgebra, v: &BlochVector) -> Result<()> {
    if alg.n() != v.n {
        return Err(Error::DimensionMismatch {
            expected: alg.n(),
            got: v.n,
        });
    }
    Ok(())
}

/// Map a normalized state to its unit Bloch vector,
/// `r_a = Tr(Pi_psi L_a) / (2 c_p(1, N))`.
pub fn state_to_bloch(alg: &SunAlgebra, psi: &StateVector) -> Result<BlochVector> {
    let n = alg.n();
    if psi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: psi.len(),
        });
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > STATE_NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let scale = 1.0 / (2.0 * c_p(n, 1)?);
    let components = (0..alg.count())
        .map(|a| {
            let lpsi = alg.generator(a) * psi;
            psi.dotc(&lpsi).re * scale
        })
        .collect();
    BlochVector::new(n, components)
}

/// Rebuild the Hilbert-space projector `(k/N) I + c_p(k,N) r . L` of a
/// k-degenerate direction vector. The result is an actual projector only
/// when `r` satisfies the k-degenerate star constraint.
pub fn bloch_to_projector(alg: &SunAlgebra, r: &BlochVector, k: usize) -> Result<HermitianMatrix> {
    check_alg(alg, r)?;
    let n = alg.n();
    let cp = c_p(n, k)?;
    let defect = r.unit_defect();
    if defect > UNIT_TOL {
        return Err(Error::NotUnit(r.norm()));
    }
    let mut mat = CMatrix::identity(n, n) * Complex64::new(k as f64 / n as f64, 0.0);
    for (a, &ra) in r.components.iter().enumerate() {
        if ra != 0.0 {
            mat += alg.generator(a) * Complex64::new(cp * ra, 0.0);
        }
    }
    HermitianMatrix::new(mat)
}

/// Bare symmetric contraction `s_c = sum_ab d_abc u_a v_b` (no `c_s`).
pub fn star_raw(alg: &SunAlgebra, u: &BlochVector, v: &BlochVector) -> Result<BlochVector> {
    check_alg(alg, u)?;
    check_same_dim(u, v)?;
    let mut out = vec![0.0; alg.count()];
    let (uu, vv) = (&u.components, &v.components);
    for entry in alg.tensors().d.entries() {
        let [a, b, c] = entry.indices.map(|i| i as usize);
        let w = entry.value;
        if a < b && b < c {
            out[c] += w * (uu[a] * vv[b] + uu[b] * vv[a]);
            out[b] += w * (uu[a] * vv[c] + uu[c] * vv[a]);
            out[a] += w * (uu[b] * vv[c] + uu[c] * vv[b]);
        } else if a == b && b < c {
            out[c] += w * uu[a] * vv[a];
            out[a] += w * (uu[a] * vv[c] + uu[c] * vv[a]);
        } else if a < b && b == c {
            out[b] += w * (uu[a] * vv[b] + uu[b] * vv[a]);
            out[a] += w * uu[b] * vv[b];
        } else {
            out[a] += w * uu[a] * vv[a];
        }
    }
    BlochVector::new(u.n, out)
}

/// The star product `c_s(N) * star_raw(u, v)`. Undefined at N = 2.
pub fn star(alg: &SunAlgebra, u: &BlochVector, v: &BlochVector) -> Result<BlochVector> {
    let cs = c_s(alg.n()).ok_or(Error::StarUndefinedForQubits)?;
    Ok(star_raw(alg, u, v)?.scaled(cs))
}

/// The wedge product `(u ^ v)_c = sum_ab f_abc u_a v_b`; antisymmetric,
/// orthogonal to both inputs. Reduces to the cross product at N = 2.
pub fn wedge(alg: &SunAlgebra, u: &BlochVector, v: &BlochVector) -> Result<BlochVector> {
    check_alg(alg, u)?;
    check_same_dim(u, v)?;
    let mut out = vec![0.0; alg.count()];
    let (uu, vv) = (&u.components, &v.components);
    for entry in alg.tensors().f.entries() {
        let [a, b, c] = entry.indices.map(|i| i as usize);
        let w = entry.value;
        out[c] += w * (uu[a] * vv[b] - uu[b] * vv[a]);
        out[b] += w * (uu[c] * vv[a] - uu[a] * vv[c]);
        out[a] += w * (uu[b] * vv[c] - uu[c] * vv[b]);
    }
    BlochVector::new(u.n, out)
}

/// Distance of `r` from the pure-state manifold: `||r * r - r||` for
/// N >= 3, `| ||r|| - 1 |` at N = 2 (every unit vector is pure there).
pub fn purity_defect(alg: &SunAlgebra, r: &BlochVector) -> Result<f64> {
    check_alg(alg, r)?;
    if alg.n() == 2 {
        return Ok(r.unit_defect());
    }
    let ss = star(alg, r, r)?;
    ss.distance(r)
}

/// Defect of the k-degenerate star constraint
/// `r * r = (N-2k)/(N-2) sqrt((N-1)/(k(N-k))) r`.
pub fn degeneracy_defect(alg: &SunAlgebra, r: &BlochVector, k: usize) -> Result<f64> {
    check_alg(alg, r)?;
    let n = alg.n();
    if k < 1 || k > n - 1 {
        return Err(Error::DegeneracyOutOfRange { k, n });
    }
    if n == 2 {
        // only k = 1 reaches here; the constraint degenerates to purity
        return purity_defect(alg, r);
    }
    let (nf, kf) = (n as f64, k as f64);
    let mu = (nf - 2.0 * kf) / (nf - 2.0) * ((nf - 1.0) / (kf * (nf - kf))).sqrt();
    let ss = star(alg, r, r)?;
    ss.distance(&r.scaled(mu))
}

/// Squared state overlap `|<psi_u|psi_v>|^2 = (1/N)(1 + (N-1) u . v)`
/// of two pure directions.
pub fn overlap(alg: &SunAlgebra, u: &BlochVector, v: &BlochVector) -> Result<f64> {
    let pu = purity_defect(alg, u)?;
    if pu > PURITY_TOL {
        return Err(Error::NotPure(pu));
    }
    let pv = purity_defect(alg, v)?;
    if pv > PURITY_TOL {
        return Err(Error::NotPure(pv));
    }
    let nf = alg.n() as f64;
    Ok((1.0 + (nf - 1.0) * u.dot(v)?) / nf)
}

/// The explicit S^7 embedding of a qutrit state: component-wise
/// `(1/2) Tr(Pi_psi lambda_a)`, written out in moduli and phase differences.
/// Gauge-invariant under a global phase; norm `1/sqrt(3)` (this is the
/// half-trace convention, distinct from the unit-norm [`state_to_bloch`]).
pub fn embed_s7(psi: &StateVector) -> Result<BlochVector> {
    if psi.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: psi.len(),
        });
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > STATE_NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let p12 = psi[0] * psi[1].conj();
    let p13 = psi[0] * psi[2].conj();
    let p23 = psi[1] * psi[2].conj();
    let (n1, n2, n3) = (psi[0].norm(), psi[1].norm(), psi[2].norm());
    BlochVector::new(
        3,
        vec![
            p12.re,
            -p12.im,
            0.5 * (n1 * n1 - n2 * n2),
            p13.re,
            -p13.im,
            p23.re,
            -p23.im,
            (n1 * n1 + n2 * n2 - 2.0 * n3 * n3) / (2.0 * 3.0_f64.sqrt()),
        ],
    )
}

/// Project a qutrit state onto the sphere octant: `(|psi_1|, |psi_2|, |psi_3|)`.
pub fn octant_projection(psi: &StateVector) -> Result<[f64; 3]> {
    if psi.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: psi.len(),
        });
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > STATE_NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    Ok([psi[0].norm(), psi[1].norm(), psi[2].norm()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::max_entry_abs;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn state(parts: &[(f64, f64)]) -> StateVector {
        StateVector::from_vec(parts.iter().map(|&(re, im)| c(re, im)).collect())
    }

    /// Standard Gell-Mann matrices, hardcoded independently of the
    /// generator builder, as the trace oracle for qutrit conversions.
    fn gell_mann() -> Vec<CMatrix> {
        let s3 = 1.0 / 3.0_f64.sqrt();
        let z = c(0., 0.);
        vec![
            CMatrix::from_row_slice(3, 3, &[z, c(1., 0.), z, c(1., 0.), z, z, z, z, z]),
            CMatrix::from_row_slice(3, 3, &[z, c(0., -1.), z, c(0., 1.), z, z, z, z, z]),
            CMatrix::from_row_slice(3, 3, &[c(1., 0.), z, z, z, c(-1., 0.), z, z, z, z]),
            CMatrix::from_row_slice(3, 3, &[z, z, c(1., 0.), z, z, z, c(1., 0.), z, z]),
            CMatrix::from_row_slice(3, 3, &[z, z, c(0., -1.), z, z, z, c(0., 1.), z, z]),
            CMatrix::from_row_slice(3, 3, &[z, z, z, z, z, c(1., 0.), z, c(1., 0.), z]),
            CMatrix::from_row_slice(3, 3, &[z, z, z, z, z, c(0., -1.), z, c(0., 1.), z]),
            CMatrix::from_row_slice(
                3,
                3,
                &[c(s3, 0.), z, z, z, c(s3, 0.), z, z, z, c(-2. * s3, 0.)],
            ),
        ]
    }

    fn qutrit_bloch_oracle(psi: &StateVector) -> Vec<f64> {
        let scale = 3.0_f64.sqrt() / 2.0;
        gell_mann()
            .iter()
            .map(|l| (psi.dotc(&(l * psi))).re * scale)
            .collect()
    }

    #[test]
    fn north_pole_qubit() {
        let alg = SunAlgebra::cached(2).unwrap();
        let r = state_to_bloch(&alg, &state(&[(1., 0.), (0., 0.)])).unwrap();
        assert!((r.components()[0]).abs() < 1e-15);
        assert!((r.components()[1]).abs() < 1e-15);
        assert!((r.components()[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn qutrit_basis_state_vector() {
        let alg = SunAlgebra::cached(3).unwrap();
        let psi = state(&[(1., 0.), (0., 0.), (0., 0.)]);
        let r = state_to_bloch(&alg, &psi).unwrap();
        let oracle = qutrit_bloch_oracle(&psi);
        let s3 = 3.0_f64.sqrt() / 2.0;
        let frozen = [0., 0., s3, 0., 0., 0., 0., 0.5];
        for a in 0..8 {
            assert!((r.components()[a] - oracle[a]).abs() < 1e-14);
            assert!((r.components()[a] - frozen[a]).abs() < 1e-14);
        }

        let psi3 = state(&[(0., 0.), (0., 0.), (1., 0.)]);
        let r3 = state_to_bloch(&alg, &psi3).unwrap();
        let oracle3 = qutrit_bloch_oracle(&psi3);
        for (got, want) in r3.components()[..7].iter().zip(&oracle3) {
            assert!(got.abs() < 1e-14);
            assert!((got - want).abs() < 1e-14);
        }
        assert!((r3.components()[7] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_unnormalized_state() {
        let alg = SunAlgebra::cached(2).unwrap();
        let res = state_to_bloch(&alg, &state(&[(1., 0.), (1., 0.)]));
        assert!(matches!(res, Err(Error::NotNormalized(_))));
    }

    #[test]
    fn projector_round_trips() {
        let alg2 = SunAlgebra::cached(2).unwrap();
        let p = bloch_to_projector(&alg2, &BlochVector::axis(2, 2).unwrap(), 1).unwrap();
        assert!((p.matrix()[(0, 0)] - c(1., 0.)).norm() < 1e-15);
        assert!((p.matrix()[(1, 1)]).norm() < 1e-15);

        let alg3 = SunAlgebra::cached(3).unwrap();
        let psi = state(&[(1., 0.), (0., 0.), (0., 0.)]);
        let r = state_to_bloch(&alg3, &psi).unwrap();
        let p = bloch_to_projector(&alg3, &r, 1).unwrap();
        let expect = HermitianMatrix::projector_onto(&psi).unwrap();
        assert!(max_entry_abs(&(p.matrix() - expect.matrix())) < 1e-12);

        // complement of a pure state: k = 2 direction is the opposite vector
        let p2 = bloch_to_projector(&alg3, &r.negated(), 2).unwrap();
        let complement = CMatrix::identity(3, 3) - expect.matrix();
        assert!(max_entry_abs(&(p2.matrix() - complement)) < 1e-12);
        assert!((p2.trace().re - 2.0).abs() < 1e-12);
        assert!(p2.projector_defect() < 1e-12);
    }

    #[test]
    fn star_undefined_at_n2_but_raw_is_zero() {
        let alg = SunAlgebra::cached(2).unwrap();
        let u = BlochVector::axis(2, 0).unwrap();
        let v = BlochVector::axis(2, 2).unwrap();
        assert!(matches!(
            star(&alg, &u, &v),
            Err(Error::StarUndefinedForQubits)
        ));
        let raw = star_raw(&alg, &u, &v).unwrap();
        assert!(raw.norm() < 1e-15);
    }

    #[test]
    fn star_examples_qutrit() {
        let alg = SunAlgebra::cached(3).unwrap();
        // d_888 = -1/sqrt(3) shows up as the e8 * e8 slot-8 component
        let e8 = BlochVector::axis(3, 7).unwrap();
        let raw = star_raw(&alg, &e8, &e8).unwrap();
        assert!((raw.components()[7] + 1.0 / 3.0_f64.sqrt()).abs() < 1e-13);

        // pure states are star-idempotent
        let psi = state(&[(1., 0.), (0., 0.), (0., 0.)]);
        let r = state_to_bloch(&alg, &psi).unwrap();
        let ss = star(&alg, &r, &r).unwrap();
        assert!(ss.distance(&r).unwrap() < 1e-12);

        // star of two orthogonal basis states is the third one
        let r1 = state_to_bloch(&alg, &state(&[(1., 0.), (0., 0.), (0., 0.)])).unwrap();
        let r2 = state_to_bloch(&alg, &state(&[(0., 0.), (1., 0.), (0., 0.)])).unwrap();
        let r3 = state_to_bloch(&alg, &state(&[(0., 0.), (0., 0.), (1., 0.)])).unwrap();
        let s12 = star(&alg, &r1, &r2).unwrap();
        assert!(s12.distance(&r3).unwrap() < 1e-12);

        // symmetric in its arguments
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = sample::random_unit_bloch(&mut rng, 3);
        let v = sample::random_unit_bloch(&mut rng, 3);
        let uv = star_raw(&alg, &u, &v).unwrap();
        let vu = star_raw(&alg, &v, &u).unwrap();
        assert!(uv.distance(&vu).unwrap() < 1e-15);
    }

    #[test]
    fn star_idempotent_for_pure_n4() {
        let alg = SunAlgebra::cached(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let psi = sample::random_state(&mut rng, 4);
            let r = state_to_bloch(&alg, &psi).unwrap();
            let ss = star(&alg, &r, &r).unwrap();
            assert!(ss.distance(&r).unwrap() < 1e-11);
        }
    }

    #[test]
    fn wedge_reduces_to_cross_product_at_n2() {
        let alg = SunAlgebra::cached(2).unwrap();
        let x = BlochVector::axis(2, 0).unwrap();
        let y = BlochVector::axis(2, 1).unwrap();
        let z = BlochVector::axis(2, 2).unwrap();
        let w = wedge(&alg, &x, &y).unwrap();
        assert!(w.distance(&z).unwrap() < 1e-15);
        // self-wedge vanishes
        assert!(wedge(&alg, &x, &x).unwrap().norm() < 1e-15);
    }

    #[test]
    fn wedge_of_orthogonal_states_vanishes() {
        let alg = SunAlgebra::cached(3).unwrap();
        let r1 = state_to_bloch(&alg, &state(&[(1., 0.), (0., 0.), (0., 0.)])).unwrap();
        let r2 = state_to_bloch(&alg, &state(&[(0., 0.), (1., 0.), (0., 0.)])).unwrap();
        assert!(wedge(&alg, &r1, &r2).unwrap().norm() < 1e-13);
    }

    #[test]
    fn wedge_output_orthogonal_to_inputs() {
        for n in [2, 3, 5] {
            let alg = SunAlgebra::cached(n).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..10 {
                let u = sample::random_unit_bloch(&mut rng, n);
                let v = sample::random_unit_bloch(&mut rng, n);
                let w = wedge(&alg, &u, &v).unwrap();
                assert!(w.dot(&u).unwrap().abs() < 1e-12);
                assert!(w.dot(&v).unwrap().abs() < 1e-12);
            }
        }
    }

    #[test]
    fn purity_defect_flags_non_states() {
        let alg = SunAlgebra::cached(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let psi = sample::random_state(&mut rng, 3);
        let pure = state_to_bloch(&alg, &psi).unwrap();
        assert!(purity_defect(&alg, &pure).unwrap() < 1e-10);

        // a bare tensor axis is on the sphere but not a state
        let e1 = BlochVector::axis(3, 0).unwrap();
        assert!(purity_defect(&alg, &e1).unwrap() > 0.5);

        let alg2 = SunAlgebra::cached(2).unwrap();
        let z = BlochVector::axis(2, 2).unwrap();
        assert!(purity_defect(&alg2, &z).unwrap() < 1e-15);
    }

    #[test]
    fn degeneracy_defect_examples() {
        // k = 1 reduces to the purity defect
        let alg3 = SunAlgebra::cached(3).unwrap();
        let psi = state(&[(1., 0.), (0., 0.), (0., 0.)]);
        let r = state_to_bloch(&alg3, &psi).unwrap();
        let d1 = degeneracy_defect(&alg3, &r, 1).unwrap();
        let p1 = purity_defect(&alg3, &r).unwrap();
        assert!((d1 - p1).abs() < 1e-15);

        // N=4, k=2 from diag(1,1,0,0): mu = 0, star square vanishes
        let alg4 = SunAlgebra::cached(4).unwrap();
        let p = HermitianMatrix::new(CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(1., 0.),
            c(1., 0.),
            c(0., 0.),
            c(0., 0.),
        ])))
        .unwrap();
        let rho = projector_direction(&alg4, &p, 2);
        assert!(degeneracy_defect(&alg4, &rho, 2).unwrap() < 1e-12);
        let ss = star(&alg4, &rho, &rho).unwrap();
        assert!(ss.norm() < 1e-12);

        // N=3, k=2 from diag(0,1,1): mu = -1
        let p = HermitianMatrix::new(CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(0., 0.),
            c(1., 0.),
            c(1., 0.),
        ])))
        .unwrap();
        let rho = projector_direction(&alg3, &p, 2);
        assert!(degeneracy_defect(&alg3, &rho, 2).unwrap() < 1e-12);
        let ss = star(&alg3, &rho, &rho).unwrap();
        assert!(ss.distance(&rho.negated()).unwrap() < 1e-12);
    }

    /// Direction vector of a k-degenerate projector, via trace extraction.
    fn projector_direction(alg: &SunAlgebra, p: &HermitianMatrix, k: usize) -> BlochVector {
        let scale = 1.0 / (2.0 * c_p(alg.n(), k).unwrap());
        let comps = (0..alg.count())
            .map(|a| crate::matrix::trace_product(p.matrix(), alg.generator(a)).re * scale)
            .collect();
        BlochVector::new(alg.n(), comps).unwrap()
    }

    #[test]
    fn overlap_matches_amplitude_oracle() {
        let alg = SunAlgebra::cached(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let pa = sample::random_state(&mut rng, 4);
            let pb = sample::random_state(&mut rng, 4);
            let ua = state_to_bloch(&alg, &pa).unwrap();
            let ub = state_to_bloch(&alg, &pb).unwrap();
            let got = overlap(&alg, &ua, &ub).unwrap();
            let expect = pa.dotc(&pb).norm_sqr();
            assert!((got - expect).abs() < 1e-10);
            assert!((-1e-10..=1.0 + 1e-10).contains(&got));
        }
        // identical states
        let p = sample::random_state(&mut rng, 4);
        let u = state_to_bloch(&alg, &p).unwrap();
        assert!((overlap(&alg, &u, &u).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn orthogonal_basis_geometry() {
        let alg = SunAlgebra::cached(3).unwrap();
        let r1 = state_to_bloch(&alg, &state(&[(1., 0.), (0., 0.), (0., 0.)])).unwrap();
        let r2 = state_to_bloch(&alg, &state(&[(0., 0.), (1., 0.), (0., 0.)])).unwrap();
        assert!(overlap(&alg, &r1, &r2).unwrap().abs() < 1e-12);
        assert!((r1.dot(&r2).unwrap() + 0.5).abs() < 1e-12);
        // the angle is pi - arccos(1/(N-1))
        let angle = r1.dot(&r2).unwrap().clamp(-1.0, 1.0).acos();
        let expect = std::f64::consts::PI - (1.0 / 2.0_f64).acos();
        assert!((angle - expect).abs() < 1e-12);
    }

    #[test]
    fn overlap_rejects_non_pure() {
        let alg = SunAlgebra::cached(3).unwrap();
        let e1 = BlochVector::axis(3, 0).unwrap();
        let r = state_to_bloch(&alg, &state(&[(1., 0.), (0., 0.), (0., 0.)])).unwrap();
        assert!(matches!(overlap(&alg, &e1, &r), Err(Error::NotPure(_))));
    }

    #[test]
    fn embed_s7_frozen_components() {
        let psi = state(&[(1., 0.), (0., 0.), (0., 0.)]);
        let e = embed_s7(&psi).unwrap();
        let expect = [0., 0., 0.5, 0., 0., 0., 0., 1.0 / (2.0 * 3.0_f64.sqrt())];
        for (got, want) in e.components().iter().zip(expect) {
            assert!((got - want).abs() < 1e-15);
        }
        // matches the half-trace oracle on a generic state
        let psi = state(&[(0.3, 0.4), (0.5, -0.2), (0.1, 0.6)]);
        let psi = crate::matrix::normalized(&psi).unwrap();
        let e = embed_s7(&psi).unwrap();
        for (a, l) in gell_mann().iter().enumerate() {
            let half_trace = psi.dotc(&(l * &psi)).re / 2.0;
            assert!((e.components()[a] - half_trace).abs() < 1e-14);
        }
    }

    #[test]
    fn embed_s7_gauge_invariant() {
        let psi = state(&[(0.6, 0.0), (0.0, 0.48), (0.64, 0.0)]);
        let psi = crate::matrix::normalized(&psi).unwrap();
        let phase = c(0.0, 1.234).exp();
        let rotated = &psi * phase;
        let a = embed_s7(&psi).unwrap();
        let b = embed_s7(&rotated).unwrap();
        assert!(a.distance(&b).unwrap() < 1e-14);
    }

    #[test]
    fn geodesic_sweep_is_a_circle() {
        // (0, sin s, cos s): radius 1/2 in the half-trace convention,
        // sqrt(3)/2 on the unit sphere.
        let alg = SunAlgebra::cached(3).unwrap();
        let center_half = [0., 0., -0.25, 0., 0., 0., 0., -1.0 / (4.0 * 3.0_f64.sqrt())];
        let center_unit = [0., 0., -3.0_f64.sqrt() / 4.0, 0., 0., 0., 0., -0.25];
        for step in 0..=24 {
            let s = std::f64::consts::PI * step as f64 / 24.0;
            let psi = state(&[(0., 0.), (s.sin(), 0.), (s.cos(), 0.)]);
            let e = embed_s7(&psi).unwrap();
            let radius = e
                .components()
                .iter()
                .zip(center_half)
                .map(|(x, c0)| (x - c0) * (x - c0))
                .sum::<f64>()
                .sqrt();
            assert!((radius - 0.5).abs() < 1e-13, "half-trace radius at s={s}");

            let r = state_to_bloch(&alg, &psi).unwrap();
            let radius = r
                .components()
                .iter()
                .zip(center_unit)
                .map(|(x, c0)| (x - c0) * (x - c0))
                .sum::<f64>()
                .sqrt();
            assert!(
                (radius - 3.0_f64.sqrt() / 2.0).abs() < 1e-13,
                "unit radius at s={s}"
            );

            // explicit closed form of the tilted circle on the unit sphere
            let expect3 = -3.0_f64.sqrt() / 4.0 * (1.0 - (2.0 * s).cos());
            let expect6 = 3.0_f64.sqrt() / 2.0 * (2.0 * s).sin();
            let expect8 = -0.25 * (1.0 + 3.0 * (2.0 * s).cos());
            assert!((r.components()[2] - expect3).abs() < 1e-13);
            assert!((r.components()[5] - expect6).abs() < 1e-13);
            assert!((r.components()[7] - expect8).abs() < 1e-13);
        }
    }

    #[test]
    fn octant_projection_examples() {
        let p = octant_projection(&state(&[(1., 0.), (0., 0.), (0., 0.)])).unwrap();
        assert_eq!(p, [1., 0., 0.]);

        let h = 1.0 / 2.0_f64.sqrt();
        let phase = c(0.0, std::f64::consts::PI / 3.0).exp() * h;
        let psi = StateVector::from_vec(vec![c(0., 0.), phase, c(h, 0.)]);
        let p = octant_projection(&psi).unwrap();
        assert!(p[0].abs() < 1e-15);
        assert!((p[1] - h).abs() < 1e-14);
        assert!((p[2] - h).abs() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let psi = sample::random_state(&mut rng, 3);
        let p = octant_projection(&psi).unwrap();
        let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(p.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn sphere_constants() {
        let sc = SphereConstants::new(4, 2).unwrap();
        assert!((sc.c_p - (2.0 * 2.0 / 8.0_f64).sqrt()).abs() < 1e-15);
        assert!((sc.c_s.unwrap() - (6.0_f64).sqrt() / 2.0).abs() < 1e-15);
        assert!(SphereConstants::new(2, 1).unwrap().c_s.is_none());
        assert!(matches!(
            SphereConstants::new(4, 4),
            Err(Error::DegeneracyOutOfRange { .. })
        ));
        // c_s relates to c_p through c_s = N c_p(1, N) / (N - 2)
        for n in 3..=6 {
            let cp = c_p(n, 1).unwrap();
            let cs = c_s(n).unwrap();
            assert!((cs - n as f64 * cp / (n as f64 - 2.0)).abs() < 1e-14);
            assert!((star_raw_coefficient(n) - (n as f64 - 2.0) * cs).abs() < 1e-13);
        }
    }

    #[test]
    fn binary_ops_reject_mixed_dimensions() {
        let alg = SunAlgebra::cached(3).unwrap();
        let u = BlochVector::axis(3, 0).unwrap();
        let v = BlochVector::axis(2, 0).unwrap();
        assert!(matches!(
            wedge(&alg, &u, &v),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(u.dot(&v), Err(Error::DimensionMismatch { .. })));
    }
}
