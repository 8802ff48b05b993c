//! Numerical core for the `d^γ`-weighted X-ray transform of symmetric tensor
//! fields on the Euclidean unit disk.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation: special functions, fan-beam geometry, Gauss–Jacobi
//! quadrature, the fan-beam/Zernike singular bases, an exact polynomial
//! algebra in `(z, z̄)` for tensor modes, forward transforms, data-space
//! projections and the reconstruction routines. File formats and the
//! command-line driver live in the `dtx` crate.
//!
//! Conventions used throughout:
//!
//! * `d(z) = 1 - |z|²` and the weight exponent `γ` lives in `(-1, 1)`.
//! * Fan-beam coordinates `(β, α)`; chords start at `e^{iβ}` and travel in
//!   direction `θ = β + α + π`; `μ = cos α`.
//! * Symmetric `m`-tensors are stored by their fiberwise Fourier modes.
//! * `ψ̂` and `Ẑ` denote the unit-normalised fan-beam and Zernike bases.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod basis;
pub mod cmath;
pub mod dataspace;
mod error;
pub mod geometry;
pub mod invert;
pub mod quadrature;
pub mod specfun;
pub mod tensorfield;
pub mod xray;

pub use error::{Error, Result};
pub use num_complex::Complex64;
