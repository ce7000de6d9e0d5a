//! Zeta functions of positive-definite quadratic forms and lattices, and the
//! Cimmino/Jacobi representation of the solution of a linear system `Ax = b`.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches the
//! file system, the command line or serialization lives in the companion
//! `cimmino-cli` crate.
//!
//! Layout:
//!
//!  - [`linalg`]: small dense linear algebra, quadratic forms, lattices.
//!  - [`specfun`]: complex gamma, reciprocal gamma, upper incomplete gamma.
//!  - [`theta`]: ellipsoid enumeration and theta series of Gaussians.
//!  - [`zeta`]: Epstein, weighted, lattice and vector zeta functions, their
//!    analytic continuation, residues and functional equations.
//!  - [`spherequad`]: integration over the unit sphere `S^{n-1}`.
//!  - [`solver`]: `Ax = b` through residues, sphere integrals, and a direct
//!    LU oracle.
//!
//! All values are immutable after construction and every routine is a pure
//! function of its inputs, so results are bit-reproducible for a given input.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod linalg;
pub mod solver;
pub mod specfun;
pub mod spherequad;
pub mod sum;
pub mod theta;
pub mod tolerances;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
