//! Coefficient matrix ξ for the Michelson heteroclinic orbit.
//!
//! Rows are the bounded adjoint solutions (φ, ψ); columns the parameter
//! directions λ₁ = c² − c_k², λ₂ = ν̄₃, λ₃ = ε, whose perturbations of the
//! third field component are 1, x₃ and −2κx₁x₂.

use alloc::format;

use super::node_quadrature;
use super::tails::{tail_bounds, TailBounds};
use crate::dichotomy::{dae_build, AdjointBasis};
use crate::error::{Error, Result};
use crate::orbits::kuramoto::KuramotoOrbit;

/// Largest accepted Richardson estimate of a half-line integral.
pub const MAX_RICHARDSON: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct SplittingReport3D {
    pub t0: f64,
    pub kappa: f64,
    /// ξ_{i,λⱼ}, rows (φ, ψ).
    pub xi: [[f64; 3]; 2],
    pub budgets: [[f64; 3]; 2],
    pub parity_zeros: [[bool; 3]; 2],
    /// ∫_{−t₀}^{t₀} of the integrands behind ξ_{1,λ₁}, ξ_{2,λ₂}, ξ_{2,λ₃}.
    pub parity_residuals: [f64; 3],
    /// ∫₀^{t₀} ψ₃, ∫₀^{t₀} φ₃p₃, ∫₀^{t₀} φ₃p₁p₂.
    pub half_line: [f64; 3],
    pub quadrature_errors: [f64; 3],
    pub tails: TailBounds,
    pub het_tangent: [f64; 3],
    /// ξ_{i,·}·het_tangent for both rows.
    pub tangent_residuals: [f64; 2],
    pub tangent_budgets: [f64; 2],
    /// det of the (λ₁, λ₂) block, −ξ_{1,λ₂}ξ_{2,λ₁}.
    pub determinant: f64,
    pub determinant_budget: f64,
    /// Same determinant in the (c, ν̄₃) chart.
    pub determinant_c_nu: f64,
    pub rank_ok: bool,
}

impl SplittingReport3D {
    pub fn tangent_ok(&self) -> bool {
        self.tangent_residuals.iter().zip(&self.tangent_budgets).all(|(r, b)| r.abs() <= *b)
    }
}

pub fn xi_matrix_3d(basis: &AdjointBasis, t_cut: f64, kappa: f64) -> Result<SplittingReport3D> {
    if !(t_cut >= 20.0) || t_cut > basis.horizon {
        return Err(Error::Precondition(format!(
            "t_cut = {t_cut} must lie in [20, {}]",
            basis.horizon
        )));
    }
    if basis.solutions.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: basis.solutions.len() });
    }
    let orbit = KuramotoOrbit::new();
    let (phi, psi) = (basis.phi(), basis.psi());
    let half = (0.0, t_cut);
    let q_psi = node_quadrature(psi, half, |_, w| w[2])?;
    let q_p3 = node_quadrature(phi, half, |t, w| w[2] * orbit.state(t)[2])?;
    let q_p1p2 = node_quadrature(phi, half, |t, w| {
        let p = orbit.state(t);
        w[2] * p[0] * p[1]
    })?;
    let quads = [q_psi, q_p3, q_p1p2];
    if let Some(worst) = quads.iter().map(|q| q.error).reduce(f64::max).filter(|e| *e > MAX_RICHARDSON) {
        return Err(Error::QuadratureDisagreement { difference: worst });
    }

    let full = (-t_cut, t_cut);
    let parity_residuals = [
        node_quadrature(phi, full, |_, w| w[2])?.value,
        node_quadrature(psi, full, |t, w| w[2] * orbit.state(t)[2])?.value,
        -2.0 * kappa
            * node_quadrature(psi, full, |t, w| {
                let p = orbit.state(t);
                w[2] * p[0] * p[1]
            })?
            .value,
    ];

    let v_at = |tr: &crate::Trajectory| -> Result<[f64; 2]> {
        let w = tr.eval(t_cut)?;
        Ok([w[2], -w[1]])
    };
    let tails = tail_bounds(&dae_build(), t_cut, v_at(psi)?, v_at(phi)?)?;

    let half_line = [q_psi.value, q_p3.value, q_p1p2.value];
    let quadrature_errors = [q_psi.error, q_p3.error, q_p1p2.error];
    let err = |k: usize| tails.bounds[k] + quadrature_errors[k];
    let xi12 = 2.0 * half_line[1];
    let xi13 = -4.0 * kappa * half_line[2];
    let xi21 = 2.0 * half_line[0];
    let b12 = 2.0 * err(1);
    let b13 = 4.0 * kappa.abs() * err(2);
    let b21 = 2.0 * err(0);
    let xi = [[0.0, xi12, xi13], [xi21, 0.0, 0.0]];
    let budgets = [[0.0, b12, b13], [b21, 0.0, 0.0]];
    let parity_zeros = [[true, false, false], [false, true, true]];

    if !(xi12.abs() > b12) {
        return Err(Error::Precondition("ξ_{1,λ₂} indistinguishable from zero".into()));
    }
    let het_tangent = [0.0, -xi13 / xi12, 1.0];
    let tangent_residuals = [xi12 * het_tangent[1] + xi13, xi21 * het_tangent[0]];
    let tangent_budgets = [b12 * het_tangent[1].abs() + b13, b21 * het_tangent[0].abs()];

    let determinant = -xi12 * xi21;
    let determinant_budget = xi12.abs() * b21 + xi21.abs() * b12 + b12 * b21;
    Ok(SplittingReport3D {
        t0: t_cut,
        kappa,
        xi,
        budgets,
        parity_zeros,
        parity_residuals,
        half_line,
        quadrature_errors,
        tails,
        het_tangent,
        tangent_residuals,
        tangent_budgets,
        determinant,
        determinant_budget,
        determinant_c_nu: 2.0 * orbit.c_k * determinant,
        rank_ok: determinant.abs() > determinant_budget,
    })
}
