//! Connection analysis for unfoldings of nilpotent singularities.
//!
//! The crate computes connecting orbits of the limit families, bounded
//! solutions of their adjoint variational equations, first-order splitting
//! integrals with tail bounds, the Hamiltonian structure of the reversible
//! even-dimensional family, and spectral classification of equilibria.
//!
//! Everything here is `no_std` with `alloc`; IO lives in the `nilfold` crate.

#![no_std]
// `num_traits::Float` is redundant whenever std is linked into the build.
#![allow(unused_imports)]

extern crate alloc;

pub mod dichotomy;
pub mod equilibria;
pub mod error;
pub mod families;
pub mod hamiltonian;
pub mod melnikov;
pub mod numerics;
pub mod orbits;

pub use error::{Error, Result};
pub use numerics::linalg::Matrix;
pub use numerics::ode::{ToleranceConfig, Trajectory};
