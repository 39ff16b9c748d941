//! Reduced form A(t)v′ = B(t)v of the Michelson adjoint equation, with
//! v = (w₃, w₃′) = (w₃, −w₂), obtained by eliminating w₁ through the
//! orthogonality constraint
//! p₂w₁ + p₃w₂ + (c_k² − p₂ − p₁²/2)w₃ = 0.
//!
//! A(t) = diag(1, p₂(t)) is singular where p₂ vanishes, at
//! t̂± = ±artanh(√(3/11))/β. Far from t̂± the reduced equation is integrated
//! directly; across t̂± the state is lifted to the regular 3-dimensional
//! adjoint equation and dropped back afterwards.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::dichotomy::adjoint::michelson_adjoint_rhs;
use crate::error::{Error, Result};
use crate::numerics::dot;
use crate::numerics::linalg::Matrix;
use crate::numerics::ode::{integrate, ToleranceConfig, Trajectory};
use crate::orbits::kuramoto::KuramotoOrbit;

/// Distance from a singular time at which the lift engages.
pub const LIFT_MARGIN: f64 = 0.25;
/// Largest relative constraint violation accepted when dropping back.
pub const HANDOFF_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct DaeSystem {
    pub orbit: KuramotoOrbit,
    /// (t̂₋, t̂₊).
    pub singular_times: [f64; 2],
    /// lim A⁻¹B as t → ∞.
    pub q: Matrix,
    /// Eigenvalues (λ₊, λ₋) of Q.
    pub eigenvalues: [Complex64; 2],
    /// Columns are eigenvectors for λ₊ and λ₋.
    pub p_eig: [[Complex64; 2]; 2],
    /// Common real part of the eigenvalues.
    pub a: f64,
}

pub fn dae_build() -> DaeSystem {
    let orbit = KuramotoOrbit::new();
    let t_hat = (3.0f64 / 11.0).sqrt().atanh() / orbit.beta;
    let q = Matrix::from_rows(&[[0.0, 1.0], [-30.0 / 19.0, -(11.0f64 / 19.0).sqrt()]]);
    let (r209, r2071) = (209.0f64.sqrt(), 2071.0f64.sqrt());
    let lp = Complex64::new(-r209, r2071) / 38.0;
    let lm = lp.conj();
    let e1 = Complex64::new(-r209, -r2071) / 60.0;
    let one = Complex64::new(1.0, 0.0);
    DaeSystem {
        orbit,
        singular_times: [-t_hat, t_hat],
        q,
        eigenvalues: [lp, lm],
        p_eig: [[e1, e1.conj()], [one, one]],
        a: lp.re,
    }
}

fn complex_norm_inf(m: &[[Complex64; 2]; 2]) -> f64 {
    m.iter().map(|row| row[0].norm() + row[1].norm()).fold(0.0, f64::max)
}

impl DaeSystem {
    pub fn mass(&self, t: f64) -> Matrix {
        Matrix::from_rows(&[[1.0, 0.0], [0.0, self.orbit.state(t)[1]]])
    }

    pub fn stiffness(&self, t: f64) -> Matrix {
        let p = self.orbit.state(t);
        Matrix::from_rows(&[[0.0, 1.0], [self.orbit.half_p1_sq_minus_c2(t), p[2]]])
    }

    /// Second row of A⁻¹B in cancellation-free form.
    fn reduced_row(&self, t: f64) -> Result<[f64; 2]> {
        let (a, b) = (self.orbit.alpha, self.orbit.beta);
        let (s, g) = self.orbit.tanh_sech2(t);
        let den = 24.0 - 33.0 * g;
        if den.abs() < 1e-12 {
            return Err(Error::Precondition(format!("mass matrix singular at t = {t}")));
        }
        Ok([a * (-48.0 + 165.0 * g - 121.0 * g * g) / (2.0 * b * den), b * s * (-48.0 + 132.0 * g) / den])
    }

    pub fn reduced(&self, t: f64) -> Result<Matrix> {
        let r = self.reduced_row(t)?;
        Ok(Matrix::from_rows(&[[0.0, 1.0], r]))
    }

    /// R(t) = A⁻¹B − Q.
    pub fn remainder(&self, t: f64) -> Result<Matrix> {
        let (s, g) = self.orbit.tanh_sech2(t);
        let den = 8.0 - 11.0 * g;
        if den.abs() < 1e-12 {
            return Err(Error::Precondition(format!("mass matrix singular at t = {t}")));
        }
        let r21 = 55.0 / 19.0 * g * (9.0 - 11.0 * g) / den;
        let r22 = self.orbit.beta * g * (48.0 / (1.0 + s) + 132.0 * s - 66.0) / (3.0 * den);
        Ok(Matrix::from_rows(&[[0.0, 0.0], [r21, r22]]))
    }

    pub fn remainder_norm(&self, t: f64) -> Result<f64> {
        Ok(self.remainder(t)?.norm_inf())
    }

    /// ‖P‖∞ from the stored eigenvectors.
    pub fn norm_p(&self) -> f64 {
        complex_norm_inf(&self.p_eig)
    }

    /// ‖P⁻¹‖∞ from the explicit 2×2 inverse.
    pub fn norm_p_inv(&self) -> f64 {
        let p = &self.p_eig;
        let det = p[0][0] * p[1][1] - p[0][1] * p[1][0];
        let inv = [[p[1][1] / det, -p[0][1] / det], [-p[1][0] / det, p[0][0] / det]];
        complex_norm_inf(&inv)
    }

    /// Closed forms ‖P‖ = 2 and ‖P⁻¹‖ = √(30/109) + 30/√2071.
    pub fn norm_constants() -> (f64, f64) {
        (2.0, (30.0f64 / 109.0).sqrt() + 30.0 / 2071.0f64.sqrt())
    }

    /// w = (w₁, −v₂, v₁) with w₁ from the orthogonality constraint.
    pub fn lift(&self, t: f64, v: &[f64]) -> Result<[f64; 3]> {
        let p = self.orbit.state(t);
        if p[1].abs() < 1e-8 {
            return Err(Error::Precondition(format!("cannot lift at singular time {t}")));
        }
        let k = -self.orbit.half_p1_sq_minus_c2(t) - p[1];
        Ok([(p[2] * v[1] - k * v[0]) / p[1], -v[1], v[0]])
    }

    /// Relative violation |⟨w, f(p(t))⟩| / (|w||f|).
    pub fn constraint_violation(&self, t: f64, w: &[f64]) -> f64 {
        let f = self.orbit.velocity(t);
        dot(w, &f).abs() / (dot(w, w).sqrt() * dot(&f, &f).sqrt()).max(f64::MIN_POSITIVE)
    }
}

fn reduced_rhs(dae: &DaeSystem) -> impl Fn(f64, &[f64], &mut [f64]) + '_ {
    move |t, v, dv| {
        let r = dae.reduced_row(t).unwrap_or([f64::NAN, f64::NAN]);
        dv[0] = v[1];
        dv[1] = r[0] * v[0] + r[1] * v[1];
    }
}

/// Integrates the reduced equation over `span`, lifting to the
/// 3-dimensional adjoint equation on [t̂ − 0.25, t̂ + 0.25] around each
/// singular time in the way.
pub fn dae_solve_reduced(v0: &[f64; 2], span: (f64, f64), tol: &ToleranceConfig) -> Result<Trajectory> {
    let dae = dae_build();
    let (t0, t1) = span;
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    if dae.singular_times.iter().any(|&s| (s - t0).abs() < LIFT_MARGIN) {
        return Err(Error::Precondition("span starts next to a singular time".into()));
    }
    let mut crossings: Vec<f64> = dae
        .singular_times
        .iter()
        .copied()
        .filter(|&s| (s - t0) * dir > 0.0 && (t1 - s) * dir > -LIFT_MARGIN)
        .collect();
    crossings.sort_by(|a, b| ((a - t0) * dir).partial_cmp(&((b - t0) * dir)).expect("finite"));

    let mut pieces: Vec<Trajectory> = Vec::new();
    let mut t = t0;
    let mut v = v0.to_vec();
    for s in crossings {
        let before = s - dir * LIFT_MARGIN;
        if (before - t) * dir > 0.0 {
            let tr = integrate(reduced_rhs(&dae), &v, (t, before), tol)?;
            v = tr.eval(before)?;
            t = before;
            pieces.push(tr);
        }
        let after = if (t1 - s) * dir > LIFT_MARGIN { s + dir * LIFT_MARGIN } else { t1 };
        let w0 = dae.lift(t, &v)?;
        let tr3 = integrate(michelson_adjoint_rhs(dae.orbit), &w0, (t, after), tol)?;
        let wl = tr3.eval(after)?;
        let viol = dae.constraint_violation(after, &wl);
        if viol > HANDOFF_TOL {
            return Err(Error::ConstraintDrift { t: after, drift: viol });
        }
        pieces.push(tr3.map_linear(&Matrix::from_rows(&[[0.0, 0.0, 1.0], [0.0, -1.0, 0.0]]))?);
        v = vec![wl[2], -wl[1]];
        t = after;
    }
    if (t1 - t) * dir > 0.0 {
        pieces.push(integrate(reduced_rhs(&dae), &v, (t, t1), tol)?);
    }
    if dir < 0.0 {
        pieces.reverse();
    }
    let mut it = pieces.into_iter();
    let mut out = it.next().ok_or_else(|| Error::InvalidInput("empty span".into()))?;
    for p in it {
        out = out.concat(p)?;
    }
    Ok(out)
}
