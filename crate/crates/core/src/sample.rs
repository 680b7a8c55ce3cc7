//! Seeded random inputs for tests and sweeps: Haar-ish states, Gaussian
//! Hermitian matrices, degenerate projectors.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::bloch::BlochVector;
use crate::matrix::{CMatrix, HermitianMatrix, StateVector};
use crate::sun_algebra::SunAlgebra;
use crate::weak_values::PrePostSelection;

fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng))
}

/// A Haar-random pure state (normalized complex Gaussian vector).
pub fn random_state(rng: &mut impl Rng, n: usize) -> StateVector {
    loop {
        let v = DVector::from_fn(n, |_, _| complex_gaussian(rng));
        let norm = v.norm();
        if norm > 1e-6 {
            return v / Complex64::new(norm, 0.0);
        }
    }
}

/// A GUE-like random Hermitian matrix with entries of order one.
pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> HermitianMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    HermitianMatrix::new(h).expect("symmetrized matrix is Hermitian")
}

/// A random unit vector on the full `S^{N^2-2}` sphere (not a state in
/// general).
pub fn random_unit_bloch(rng: &mut impl Rng, n: usize) -> BlochVector {
    let m = n * n - 1;
    loop {
        let v: Vec<f64> = (0..m).map(|_| gaussian(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return BlochVector::new(n, v.iter().map(|x| x / norm).collect()).unwrap();
        }
    }
}

/// A random unit vector on S^2.
pub fn random_unit_vec3(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v = [gaussian(rng), gaussian(rng), gaussian(rng)];
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm > 1e-6 {
            return [v[0] / norm, v[1] / norm, v[2] / norm];
        }
    }
}

/// A Haar-random unitary (Q factor of a complex Gaussian matrix).
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    g.qr().q()
}

/// A Haar-random projector onto a k-dimensional subspace, built from the
/// leading columns of the Q factor of a complex Gaussian matrix.
pub fn random_projector(rng: &mut impl Rng, n: usize, k: usize) -> HermitianMatrix {
    assert!(k >= 1 && k < n, "k out of range");
    let g = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let q = g.qr().q();
    let mut p = CMatrix::zeros(n, n);
    for col in 0..k {
        let v = q.column(col);
        for r in 0..n {
            for c in 0..n {
                p[(r, c)] += v[r] * v[c].conj();
            }
        }
    }
    HermitianMatrix::new(p).expect("sum of rank-1 projectors is Hermitian")
}

/// A random pre/post-selection whose squared overlap exceeds
/// `min_overlap_probability` (rejection-sampled).
pub fn random_selection(
    alg: &SunAlgebra,
    rng: &mut impl Rng,
    min_overlap_probability: f64,
) -> PrePostSelection {
    loop {
        let psi_i = random_state(rng, alg.n());
        let psi_f = random_state(rng, alg.n());
        if psi_f.dotc(&psi_i).norm_sqr() > min_overlap_probability {
            return PrePostSelection::new(alg, psi_i, psi_f)
                .expect("sampled states are normalized");
        }
    }
}
