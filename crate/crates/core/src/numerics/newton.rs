//! Damped Newton iteration for square nonlinear systems.

use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::numerics::diff::try_jacobian;
use crate::numerics::linalg::{Lu, Matrix};
use crate::numerics::norm_inf;
use crate::numerics::ode::ToleranceConfig;

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonOutcome {
    pub root: Vec<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
}

/// Newton with a central-difference Jacobian. Converges when the residual
/// max-norm drops to `tol.abs_tol`.
pub fn newton_solve<F>(mut residual: F, x0: &[f64], tol: &ToleranceConfig) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    newton_core(&mut residual, &mut |r: &mut F, x: &[f64]| try_jacobian(r, x, None), x0, tol).map(|o| o.root)
}

/// Newton with an analytic Jacobian.
pub fn newton_solve_with<F, J>(mut residual: F, mut jacobian: J, x0: &[f64], tol: &ToleranceConfig) -> Result<NewtonOutcome>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
    J: FnMut(&[f64]) -> Result<Matrix>,
{
    newton_core(&mut residual, &mut |_: &mut F, x: &[f64]| jacobian(x), x0, tol)
}

fn newton_core<F, J>(residual: &mut F, jacobian: &mut J, x0: &[f64], tol: &ToleranceConfig) -> Result<NewtonOutcome>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
    J: FnMut(&mut F, &[f64]) -> Result<Matrix>,
{
    tol.validate()?;
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut r = residual(&x)?;
    check_dim(n, r.len())?;
    let mut rn = norm_inf(&r);
    if !rn.is_finite() {
        return Err(Error::Divergence { residual: rn });
    }
    let mut iterations = 0;
    while rn > tol.abs_tol {
        if iterations >= tol.max_iters {
            return Err(Error::NoConvergence { iterations, residual: rn });
        }
        iterations += 1;
        let jac = jacobian(residual, &x)?;
        let step = Lu::new(&jac)?.solve(&r)?;
        // Backtrack until the residual decreases.
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let trial: Vec<f64> = x.iter().zip(&step).map(|(xi, si)| xi - alpha * si).collect();
            if let Ok(rt) = residual(&trial) {
                let rtn = norm_inf(&rt);
                if rtn.is_finite() && rtn < rn {
                    x = trial;
                    r = rt;
                    rn = rtn;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            return Err(Error::Divergence { residual: rn });
        }
    }
    Ok(NewtonOutcome { root: x, residual_norm: rn, iterations })
}
