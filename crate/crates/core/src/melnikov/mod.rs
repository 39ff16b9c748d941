//! Melnikov coefficients ξ, their tail bounds, and the tangent data of the
//! connection bifurcation manifolds.

mod splitting3d;
mod splitting4d;
mod tails;

pub use splitting3d::{xi_matrix_3d, SplittingReport3D, MAX_RICHARDSON};
pub use splitting4d::{tail_envelope_4d, xi_gradient_4d, RankCheck, SignVerdicts4D, SplittingReport4D, TailEnvelope};
pub use tails::{tail_bounds, TailBounds};

use alloc::vec;

use crate::error::Result;
use crate::numerics::quad::{quad_nodes, QuadEstimate};
use crate::numerics::ode::Trajectory;

/// Node trapezoid of `f` over [a, b]: the nodes of `tr` strictly inside plus
/// interpolated end values.
pub(crate) fn node_quadrature(
    tr: &Trajectory,
    (a, b): (f64, f64),
    mut f: impl FnMut(f64, &[f64]) -> f64,
) -> Result<QuadEstimate> {
    let slack = 1e-12 * (1.0 + b.abs().max(a.abs()));
    let mut ts = vec![a];
    let mut vs = vec![f(a, &tr.eval(a)?)];
    for (i, &t) in tr.times().iter().enumerate() {
        if t > a + slack && t < b - slack {
            ts.push(t);
            vs.push(f(t, tr.state(i)));
        }
    }
    ts.push(b);
    vs.push(f(b, &tr.eval(b)?));
    quad_nodes(&ts, &vs)
}
