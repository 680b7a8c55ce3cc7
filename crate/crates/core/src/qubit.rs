//! Closed-form two-level results: the one-parameter observable family
//! `O_r = a (I + gamma r . sigma)`, the trajectory of the effective state
//! `i'` on the Bloch sphere, mirror images, the critical coupling, angle
//! profiles, and the oriented solid angle used as the independent oracle
//! for the qubit geometric-phase identity `arg Pi_{r,w} = -Omega_irf / 2`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::StateVector;
use crate::weak_values::{WeakValueResult, AMPLIFICATION_THRESHOLD};

pub type Vec3 = [f64; 3];

pub fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross3(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm3(a: &Vec3) -> f64 {
    dot3(a, a).sqrt()
}

/// Smallest angle between two unit vectors, via a clamped arccos.
pub fn angle_between(a: &Vec3, b: &Vec3) -> f64 {
    dot3(a, b).clamp(-1.0, 1.0).acos()
}

/// A Hilbert-space representative of a Bloch direction,
/// `(cos(theta/2), e^{i phi} sin(theta/2))`.
pub fn state_from_bloch3(v: &Vec3) -> StateVector {
    let theta = v[2].clamp(-1.0, 1.0).acos();
    let phi = v[1].atan2(v[0]);
    StateVector::from_vec(vec![
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ])
}

/// The family `O_r = a (I + gamma r . sigma)`; `gamma` interpolates from
/// the identity (0) through a projector (1) toward a Pauli operator
/// (infinity).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QubitObservable {
    pub a: f64,
    pub gamma: f64,
    pub r: Vec3,
}

impl QubitObservable {
    pub fn new(a: f64, gamma: f64, r: Vec3) -> Result<Self> {
        let norm = norm3(&r);
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnit(norm));
        }
        Ok(Self { a, gamma, r })
    }
}

/// Closed-form weak value of `O_r` between unit Bloch vectors `i` and `f`:
///
/// ```text
/// O_w = a [1 + f.i + gamma (f.r + r.i) + i gamma f.(r x i)] / (1 + f.i)
/// ```
pub fn qubit_weak_value(obs: &QubitObservable, i: &Vec3, f: &Vec3) -> Result<WeakValueResult> {
    for v in [i, f] {
        let norm = norm3(v);
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotUnit(norm));
        }
    }
    let dot_fi = dot3(f, i);
    let den = 1.0 + dot_fi;
    if den <= 1e-12 {
        return Err(Error::AntipodalStates);
    }
    let dot_fr = dot3(f, &obs.r);
    let dot_ri = dot3(&obs.r, i);
    let wedge = dot3(f, &cross3(&obs.r, i));
    let value = Complex64::new(
        obs.a * (1.0 + dot_fi + obs.gamma * (dot_fr + dot_ri)) / den,
        obs.a * obs.gamma * wedge / den,
    );
    Ok(WeakValueResult::from_qubit_parts(
        value,
        den / 2.0 < AMPLIFICATION_THRESHOLD,
        [dot_fi, dot_fr, dot_ri, 0.0, wedge],
    ))
}

/// Bloch vector of the effective state `O_r psi_i / ||O_r psi_i||`:
///
/// ```text
/// i' = [(1 - gamma^2) i + 2 gamma (1 + gamma r.i) r] / (1 + 2 gamma r.i + gamma^2)
/// ```
///
/// The denominator is `||O_r psi_i||^2 / a^2`; it vanishes (and `i'`
/// becomes undefined) exactly when `psi_i` is an eigenstate `i = +-r` and
/// `gamma` hits the critical value.
pub fn i_prime(obs: &QubitObservable, i: &Vec3) -> Result<Vec3> {
    let ri = dot3(&obs.r, i);
    let den = 1.0 + 2.0 * obs.gamma * ri + obs.gamma * obs.gamma;
    if den <= 1e-12 {
        return Err(Error::UndefinedIPrime(den));
    }
    let ci = (1.0 - obs.gamma * obs.gamma) / den;
    let cr = 2.0 * obs.gamma * (1.0 + obs.gamma * ri) / den;
    Ok([
        ci * i[0] + cr * obs.r[0],
        ci * i[1] + cr * obs.r[1],
        ci * i[2] + cr * obs.r[2],
    ])
}

/// Mirror image of `i` through the axis `r`: `i_m = -i + 2 (i.r) r`.
pub fn mirror(i: &Vec3, r: &Vec3) -> Vec3 {
    let c = 2.0 * dot3(i, r);
    [c * r[0] - i[0], c * r[1] - i[1], c * r[2] - i[2]]
}

/// The coupling `gamma* = -1 / (i.r)` at which the mean value
/// `<O_r>_{psi_i} = a (1 + gamma i.r)` vanishes (and, when `i = +-r`,
/// `O_r psi_i` itself).
pub fn critical_gamma(i: &Vec3, r: &Vec3) -> Result<f64> {
    let c = dot3(i, r);
    if c.abs() <= 1e-12 {
        return Err(Error::NoCriticalGamma);
    }
    Ok(-1.0 / c)
}

/// Oriented solid angle of the spherical triangle `(a, b, c)` by the
/// two-argument-arctangent spherical-excess formula,
/// `Omega = 2 atan2(a.(b x c), 1 + a.b + b.c + c.a)`, in (-2 pi, 2 pi].
/// Degenerate (collinear) triples give 0.
pub fn solid_angle(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let num = dot3(a, &cross3(b, c));
    let den = 1.0 + dot3(a, b) + dot3(b, c) + dot3(c, a);
    2.0 * num.atan2(den)
}

/// One row of the gamma sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProfileRow {
    pub gamma: f64,
    /// Smallest angle between `i` and `i'`.
    pub phi_i_iprime: f64,
    /// Smallest angle between `r` and `i'`.
    pub phi_r_iprime: f64,
}

/// Angle profile of the `i'` trajectory over a gamma grid, with the
/// constant angles of the configuration.
#[derive(Debug, Clone, Serialize)]
pub struct AngleProfile {
    /// Angle between `i` and `r`.
    pub phi_ir: f64,
    /// Angle between `i` and its mirror image through `r`.
    pub phi_i_mirror: f64,
    /// The expression `2 (pi - phi_ir)`, which can exceed pi; reported
    /// alongside the measured smallest angle below.
    pub phi_r_mirror_raw: f64,
    /// Smallest angle between `r` and the mirror image (a reflection
    /// preserves the angle to its axis, so this equals `phi_ir`).
    pub phi_r_mirror: f64,
    pub rows: Vec<ProfileRow>,
}

/// Sweep `i'` over a gamma grid for fixed `i` and `r`. Grid points within
/// 1e-9 of the critical gamma are rejected (the weak-value argument is
/// undefined there).
pub fn angle_profile(r: &Vec3, i: &Vec3, gamma_grid: &[f64]) -> Result<AngleProfile> {
    for v in [i, r] {
        let norm = norm3(v);
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotUnit(norm));
        }
    }
    let gamma_star = critical_gamma(i, r).ok();
    let im = mirror(i, r);
    let mut rows = Vec::with_capacity(gamma_grid.len());
    for &gamma in gamma_grid {
        if let Some(gs) = gamma_star {
            let dist = (gamma - gs).abs();
            if dist <= 1e-9 {
                return Err(Error::GridAtCriticalGamma { gamma, dist });
            }
        }
        let obs = QubitObservable { a: 1.0, gamma, r: *r };
        let ip = i_prime(&obs, i)?;
        rows.push(ProfileRow {
            gamma,
            phi_i_iprime: angle_between(i, &ip),
            phi_r_iprime: angle_between(r, &ip),
        });
    }
    let phi_ir = angle_between(i, r);
    Ok(AngleProfile {
        phi_ir,
        phi_i_mirror: angle_between(i, &im),
        phi_r_mirror_raw: 2.0 * (std::f64::consts::PI - phi_ir),
        phi_r_mirror: angle_between(r, &im),
        rows,
    })
}

/// Default sweep grid: 400 log-spaced magnitudes per sign over
/// `[1e-3, 1e3]`, plus 200 linearly spaced points in a +-0.25 window
/// around the critical gamma when it is finite (never closer than its
/// spacing).
pub fn default_gamma_grid(i: &Vec3, r: &Vec3) -> Vec<f64> {
    let mut grid = Vec::with_capacity(1001);
    let per_sign = 400;
    for j in 0..per_sign {
        let t = j as f64 / (per_sign - 1) as f64;
        let mag = 10.0_f64.powf(-3.0 + 6.0 * t);
        grid.push(mag);
        grid.push(-mag);
    }
    grid.push(0.0);
    if let Ok(gs) = critical_gamma(i, r) {
        let step = 0.0025;
        for j in 1..=100 {
            grid.push(gs + j as f64 * step);
            grid.push(gs - j as f64 * step);
        }
        grid.retain(|g| (g - gs).abs() > 1e-6);
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid
}
