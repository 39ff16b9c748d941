//! Shared kernels: integration, root finding, quadrature, differencing and
//! small dense linear algebra.

pub mod diff;
pub mod linalg;
pub mod newton;
pub mod ode;
pub mod poly;
pub mod quad;

pub use diff::{divergence, finite_difference_jacobian};
pub use newton::{newton_solve, newton_solve_with, NewtonOutcome};
pub use ode::{integrate, integrate_projected, ToleranceConfig, Trajectory};
pub use quad::{quad_nodes, simpson_midpoints, trapezoid, QuadEstimate};

/// Max-norm of a vector.
pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| if x.abs() > m { x.abs() } else { m })
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
