//! Weak values of N-level observables on generalized Bloch spheres.
//!
//! A weak measurement of a Hermitian observable `A` between a pre-selected
//! state `|psi_i>` and a post-selected state `|psi_f>` is governed by the
//! complex weak value `A_w = <psi_f|A|psi_i> / <psi_f|psi_i>`. This crate
//! computes weak values two ways and cross-checks them everywhere:
//!
//! - **directly**, by matrix-vector arithmetic in Hilbert space (the
//!   oracle), and
//! - **geometrically**, from three real unit vectors on the sphere
//!   `S^{N^2-2}` (the generalized Bloch sphere), via the SU(N) star and
//!   wedge products built from the structure constants of the generalized
//!   Gell-Mann basis.
//!
//! The argument of a projector weak value is the argument of a Bargmann
//! invariant, a geometric phase; for qubits it is minus half the solid
//! angle of the selection triangle, which [`qubit::solid_angle`] measures
//! independently. Around this core sit observable decompositions
//! ([`observables`]), degenerate projectors and Hermitian-unitary
//! reflections, second moments and the Heisenberg inequality
//! ([`uncertainty`]), an exactly solvable von Neumann pointer simulation
//! ([`mod@pointer`]), and a scenario/report layer ([`scenario`]) used by the
//! `weakval` CLI.
//!
//! Batch sweeps run data-parallel on rayon under the `parallel` feature
//! (enabled by default); disable it for a fully sequential build. The
//! bench suite compares both paths.

pub mod bloch;
pub mod error;
pub mod matrix;
pub mod observables;
pub mod par;
pub mod pointer;
pub mod qubit;
pub mod sample;
pub mod scenario;
pub mod sun_algebra;
pub mod uncertainty;
pub mod weak_values;

pub use bloch::{BlochVector, SphereConstants};
pub use error::{Error, Result};
pub use matrix::{CMatrix, HermitianMatrix, StateVector};
pub use observables::ObservableDecomposition;
pub use pointer::{GaussianPointer, PointerOutcome, WeakValueEstimate};
pub use qubit::QubitObservable;
pub use scenario::{Command, Report, RunOptions, Scenario};
pub use sun_algebra::{GeneratorSet, StructureTensors, SunAlgebra};
pub use uncertainty::MomentReport;
pub use weak_values::{PrePostSelection, WeakValueResult};
