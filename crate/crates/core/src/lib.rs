//! Driven two-level system under a hybrid master equation: a Lindblad
//! dissipator combined with an anti-Hermitian Hamiltonian, with observables
//! taken from the trace-normalized density matrix.
//!
//! Time is always the rescaled `tau = Omega * t` and every rate is in units
//! of the Rabi frequency (see [`model::ReducedParams`]).
//!
//! Layout:
//! - [`pauli`]: 2x2 density matrices and their Pauli-basis coordinates.
//! - [`model`]: parameters and right-hand sides (density level, 4-vector
//!   level, normalized nonlinear level).
//! - [`propagator`]: matrix exponential, RK4, steady states.
//! - [`analytic`]: closed-form solutions of the limiting cases.
//! - [`observables`]: populations and coherences.
//! - [`spectral`]: Fourier diagnostics of decaying and periodic signals.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod model;
pub mod observables;
pub mod pauli;
pub mod propagator;
pub mod spectral;

pub use error::{Error, ErrorKind, Result};
pub use model::{Matrix4R, PhysicalParams, ReducedParams};
pub use pauli::{BlochState4, DensityMatrix2, NormalizedBloch};
pub use propagator::{EvolveConfig, Trajectory};
