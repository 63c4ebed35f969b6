//! Pseudospectral laboratory for the scaled 2-D Navier-Stokes-Poisson system
//!
//! ```text
//!   d/dt rho + div(rho u)            = 0
//!   d/dt u + u.grad u - (eps/rho) L u + grad P(rho) - grad phi = 0
//!   Laplace phi                      = rho - 1
//! ```
//!
//! on a periodic box approximating the plane, with `L u = mu Du + (mu+lambda) grad div u`,
//! `mu = 1`, `lambda = 0`, `gamma = 2` and viscosity parameter `eps` in `(0, 1]`.
//!
//! The crate provides:
//!
//! * [`grid`] — the truncated frequency lattice, FFT transforms, Fourier
//!   multipliers, Leray projection and the Poisson solve;
//! * [`cutoffs`] — the eps-scaled three-band cutoff family and
//!   Littlewood-Paley blocks;
//! * [`linear`] — the exact per-mode linear theory: dispersion relation
//!   `b(xi)`, eigenvalues, Green matrix, diagonalisation and the half-wave
//!   group `e^{i t b(D)}`;
//! * [`solver`] — Strang-split time integration of the primitive and
//!   symmetrised systems with the exact linear propagator;
//! * [`split`] — the main/perturbation system decomposition, the
//!   perturbation energy and the eps-sweep lifespan probe;
//! * [`norms`] — Sobolev/Lebesgue/weighted norms, the composite time-weighted
//!   norm, decay-rate fits and the commutator probe;
//! * [`phase`] — phase functions, symbol-bound sweeps, the brute-force
//!   bilinear operator and the S-matrix identity;
//! * [`init`] — deterministic random initial data with norm calibration;
//! * [`io`] — the binary snapshot format and CSV helpers.

pub mod cutoffs;
pub mod error;
pub mod grid;
pub mod init;
pub mod io;
pub mod linear;
pub mod norms;
pub mod phase;
pub mod rng;
pub mod solver;
pub mod split;
mod threads;

pub use error::{Error, Result};
pub use grid::{Grid2D, SpectralField, VectorField};

// the coefficient types appear throughout the public API
pub use ndarray;
pub use num_complex;
