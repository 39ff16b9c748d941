//! Bounded solutions of w′ = −Df(p(t))ᵀ w.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::hamiltonian::first_integral_4d_gradient;
use crate::numerics::dot;
use crate::numerics::linalg::{eigenvalues, Matrix};
use crate::numerics::ode::{integrate_projected, ToleranceConfig, Trajectory};
use crate::orbits::homoclinic::HomoclinicProfile;
use crate::orbits::kuramoto::KuramotoOrbit;

/// Relative orthogonality drift tolerated within one step.
pub const MAX_STEP_DRIFT: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct AdjointBasis {
    /// Solutions on [−T, T].
    pub solutions: Vec<Trajectory>,
    pub initial_conditions: Vec<Vec<f64>>,
    pub d: usize,
    pub horizon: f64,
    /// Largest relative drift ⟨w, f⟩/(|w||f|) seen before a projection.
    pub max_drift: f64,
}

impl AdjointBasis {
    pub fn phi(&self) -> &Trajectory {
        &self.solutions[0]
    }

    pub fn psi(&self) -> &Trajectory {
        &self.solutions[1]
    }
}

/// (p₁w₃, −w₁ + w₃, −w₂) along the Kuramoto orbit.
pub fn michelson_adjoint_rhs(orbit: KuramotoOrbit) -> impl Fn(f64, &[f64], &mut [f64]) {
    move |t, w, dw| {
        let p1 = orbit.state(t)[0];
        dw[0] = p1 * w[2];
        dw[1] = -w[0] + w[2];
        dw[2] = -w[1];
    }
}

/// n − dim Wˢ(forward limit) − dim Wᵘ(backward limit) + 1.
pub fn bounded_solution_count(n: usize, dim_stable_forward: usize, dim_unstable_backward: usize) -> Result<usize> {
    (n + 1)
        .checked_sub(dim_stable_forward + dim_unstable_backward)
        .ok_or_else(|| Error::InvalidInput("manifold dimensions exceed n + 1".into()))
}

/// (stable, unstable) dimensions at a hyperbolic equilibrium.
pub fn manifold_dimensions(jacobian: &Matrix) -> Result<(usize, usize)> {
    let ev = eigenvalues(jacobian)?;
    if ev.iter().any(|z| z.re.abs() < 1e-10) {
        return Err(Error::Precondition("equilibrium is not hyperbolic".into()));
    }
    let stable = ev.iter().filter(|z| z.re < 0.0).count();
    Ok((stable, ev.len() - stable))
}

/// Bounded adjoint solutions along the Kuramoto orbit from φ(0) = (0, −1, 0)
/// and ψ(0) = (1 − c_k²/p₂(0), 0, 1), each projected onto f(p(t))^⊥ after
/// every accepted step.
pub fn adjoint_basis_michelson(t_end: f64, tol: &ToleranceConfig) -> Result<AdjointBasis> {
    if !(t_end >= 20.0) {
        return Err(Error::Precondition(format!("horizon {t_end} shorter than 20")));
    }
    let orbit = KuramotoOrbit::new();
    let p0 = orbit.state(0.0);
    let phi0 = vec![0.0, -1.0, 0.0];
    let psi0 = vec![1.0 - orbit.c_k * orbit.c_k / p0[1], 0.0, 1.0];
    let mut solutions = Vec::new();
    let mut max_drift: f64 = 0.0;
    for w0 in [&phi0, &psi0] {
        let mut pieces = Vec::new();
        for end in [-t_end, t_end] {
            let mut drift: f64 = 0.0;
            let mut drift_at = 0.0;
            let project = |t: f64, w: &mut [f64]| {
                let f = orbit.velocity(t);
                let ff = dot(&f, &f);
                if ff == 0.0 {
                    return;
                }
                let wf = dot(w, &f);
                let rel = wf.abs() / (ff.sqrt() * dot(w, w).sqrt()).max(f64::MIN_POSITIVE);
                if rel > drift {
                    drift = rel;
                    drift_at = t;
                }
                let c = wf / ff;
                for i in 0..3 {
                    w[i] -= c * f[i];
                }
            };
            let tr = integrate_projected(michelson_adjoint_rhs(orbit), project, w0, (0.0, end), tol)?;
            if drift > MAX_STEP_DRIFT {
                return Err(Error::ConstraintDrift { t: drift_at, drift });
            }
            max_drift = max_drift.max(drift);
            pieces.push(tr);
        }
        let fwd = pieces.pop().expect("forward piece");
        let bwd = pieces.pop().expect("backward piece");
        solutions.push(bwd.concat(fwd)?);
    }
    Ok(AdjointBasis { solutions, initial_conditions: vec![phi0, psi0], d: 2, horizon: t_end, max_drift })
}

/// Largest ‖w′ + Df(t)ᵀw‖∞ over the nodes and segment midpoints, w′ taken
/// from the interpolant.
pub fn adjoint_residual(sol: &Trajectory, jacobian: impl Fn(f64) -> Matrix) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let times = sol.times();
    let mut check = |t: f64| -> Result<()> {
        let w = sol.eval(t)?;
        let dw = sol.derivative(t)?;
        let jt = jacobian(t).transpose();
        let jw = jt.mul_vec(&w)?;
        for i in 0..w.len() {
            worst = worst.max((dw[i] + jw[i]).abs());
        }
        Ok(())
    };
    for i in 0..times.len() {
        check(times[i])?;
        if i + 1 < times.len() {
            check(0.5 * (times[i] + times[i + 1]))?;
        }
    }
    Ok(worst)
}

/// ψ(t) = ∇H(p(t)) = (p₁ − p₁², p₄ − η₃p₂, −p₃, p₂) on the reflected
/// orbit nodes.
pub fn adjoint_psi_4d(profile: &HomoclinicProfile) -> Trajectory {
    let eta3 = profile.eta3();
    profile
        .full_orbit()
        .map_nodes(|_, x| first_integral_4d_gradient(&[x[0], x[1], x[2], x[3]], eta3).to_vec())
        .expect("same node grid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting_formula() {
        assert_eq!(bounded_solution_count(3, 1, 1).unwrap(), 2);
        assert_eq!(bounded_solution_count(4, 2, 2).unwrap(), 1);
        assert!(bounded_solution_count(3, 3, 2).is_err());
    }

    #[test]
    fn initial_conditions_are_orthogonal() {
        let o = KuramotoOrbit::new();
        let f = o.velocity(0.0);
        let psi0 = [1.0 - o.c_k * o.c_k / o.state(0.0)[1], 0.0, 1.0];
        assert!((psi0[0] - 77.0 / 57.0).abs() < 1e-14);
        assert!(dot(&psi0, &f).abs() < 1e-15);
        assert_eq!(dot(&[0.0, -1.0, 0.0], &f), -o.state(0.0)[2]);
    }
}
