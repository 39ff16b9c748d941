//! Gronwall bounds for the half-line tails ∫_{t₀}^∞ of the three nonzero
//! Michelson integrands.
//!
//! With v′ = (Q + R(t))v, Q = PΛP⁻¹ and Re Λ = a < 0, every solution obeys
//! ‖v(t)‖ ≤ ‖P‖‖P⁻¹‖‖v(t₀)‖ e^{(a + ‖P‖‖P⁻¹‖‖R(t₀)‖)(t − t₀)} as long as
//! ‖R‖ decreases, so ∫_{t₀}^∞ ‖v‖ ≤ L‖v(t₀)‖. The weights |p₃| and |p₁p₂|
//! decrease as well and are bounded by their value at t₀.

use alloc::format;

use crate::dichotomy::DaeSystem;
use crate::error::{Error, Result};

/// Window over which monotonicity is sampled.
const MONOTONE_WINDOW: f64 = 40.0;
const MONOTONE_SAMPLES: usize = 4000;
/// Required ratio ‖P‖‖P⁻¹‖‖R(t₀)‖ / |a|.
const MAX_PERTURBATION_RATIO: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct TailBounds {
    pub t0: f64,
    pub norm_p: f64,
    pub norm_p_inv: f64,
    pub norm_r: f64,
    /// L = −‖P‖‖P⁻¹‖ / (a + ‖P‖‖P⁻¹‖‖R(t₀)‖).
    pub l: f64,
    pub psi_norm: f64,
    pub phi_norm: f64,
    /// Bounds for ∫ψ̂₁, ∫φ̂₁p₃ and ∫φ̂₁p₁p₂ over [t₀, ∞).
    pub bounds: [f64; 3],
}

fn strictly_decreasing(mut g: impl FnMut(f64) -> Result<f64>, t0: f64) -> Result<bool> {
    let h = MONOTONE_WINDOW / MONOTONE_SAMPLES as f64;
    let mut prev = g(t0)?;
    for k in 1..=MONOTONE_SAMPLES {
        let cur = g(t0 + h * k as f64)?;
        if !(cur < prev) && !(cur == 0.0 && prev == 0.0) {
            return Ok(false);
        }
        prev = cur;
    }
    Ok(true)
}

/// `psi_end` and `phi_end` are the reduced states (w₃, −w₂) at t₀.
pub fn tail_bounds(dae: &DaeSystem, t0: f64, psi_end: [f64; 2], phi_end: [f64; 2]) -> Result<TailBounds> {
    if !(t0 > dae.singular_times[1] + 1.0) {
        return Err(Error::Precondition(format!("t0 = {t0} too close to the singular time")));
    }
    let (np_closed, npi_closed) = DaeSystem::norm_constants();
    let (norm_p, norm_p_inv) = (dae.norm_p(), dae.norm_p_inv());
    if (norm_p - np_closed).abs() > 1e-12 || (norm_p_inv - npi_closed).abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "eigenvector norms {norm_p}, {norm_p_inv} disagree with closed forms {np_closed}, {npi_closed}"
        )));
    }
    if !strictly_decreasing(|t| dae.remainder_norm(t), t0)? {
        return Err(Error::Precondition(format!("‖R(t)‖ not decreasing after t0 = {t0}")));
    }
    let orbit = dae.orbit;
    if !strictly_decreasing(|t| Ok(orbit.state(t)[2].abs()), t0)?
        || !strictly_decreasing(
            |t| {
                let p = orbit.state(t);
                Ok((p[0] * p[1]).abs())
            },
            t0,
        )?
    {
        return Err(Error::Precondition(format!("integrand weights not decreasing after t0 = {t0}")));
    }
    let norm_r = dae.remainder_norm(t0)?;
    let kappa = norm_p * norm_p_inv;
    if kappa * norm_r > MAX_PERTURBATION_RATIO * dae.a.abs() {
        return Err(Error::Precondition(format!(
            "‖P‖‖P⁻¹‖‖R(t0)‖ = {} not small against |a| = {}",
            kappa * norm_r,
            dae.a.abs()
        )));
    }
    let l = -kappa / (dae.a + kappa * norm_r);
    let psi_norm = psi_end[0].abs().max(psi_end[1].abs());
    let phi_norm = phi_end[0].abs().max(phi_end[1].abs());
    let p = orbit.state(t0);
    Ok(TailBounds {
        t0,
        norm_p,
        norm_p_inv,
        norm_r,
        l,
        psi_norm,
        phi_norm,
        bounds: [l * psi_norm, p[2].abs() * l * phi_norm, (p[0] * p[1]).abs() * l * phi_norm],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dichotomy::dae_build;

    #[test]
    fn rejects_early_t0() {
        let d = dae_build();
        assert!(matches!(tail_bounds(&d, 3.0, [1.0, 0.0], [0.0, 1.0]), Err(Error::Precondition(_))));
    }

    #[test]
    fn constant_l_at_20() {
        let d = dae_build();
        let tb = tail_bounds(&d, 20.0, [1.0, 0.0], [0.0, 1.0]).unwrap();
        let expected = 2.0 * 1.183_844_323_020_575_3 / d.orbit.beta;
        assert!((tb.l - expected).abs() < 1e-4 * expected);
        assert!(tb.l > expected);
    }
}
