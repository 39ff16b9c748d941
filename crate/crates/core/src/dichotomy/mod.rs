//! Adjoint variational equations along connecting orbits and the reduced
//! 2-dimensional form used for tail estimates.

pub mod adjoint;
pub mod dae;

pub use adjoint::{
    adjoint_basis_michelson, adjoint_psi_4d, adjoint_residual, bounded_solution_count, manifold_dimensions,
    michelson_adjoint_rhs, AdjointBasis,
};
pub use dae::{dae_build, dae_solve_reduced, DaeSystem};
