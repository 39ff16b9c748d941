//! Spectra at the Michelson equilibria (±√2 c, 0, 0), where the
//! characteristic polynomial is r³ + r + x₁.

use alloc::format;
use alloc::vec;

use num_traits::Float;

use super::{EquilibriumClassification, SpectralLabel, IMAGINARY_TOL};
use crate::error::{Error, Result};
use crate::families::{michelson_jacobian, MichelsonParams};
use crate::numerics::linalg::{characteristic_polynomial, eigenvalues};

#[derive(Clone, Debug, PartialEq)]
pub struct MichelsonSpectrum {
    pub c: f64,
    /// Equilibria at x₁ = −√2c and x₁ = +√2c.
    pub minus: EquilibriumClassification,
    pub plus: EquilibriumClassification,
    /// |real eigenvalue|.
    pub lambda: f64,
    /// |Re| of the complex pair.
    pub rho: f64,
    pub omega: f64,
    /// |λ − 2ρ|.
    pub divergence_gap: f64,
    /// 0 < ρ < λ.
    pub shilnikov: bool,
}

fn classify_at(x1: f64, params: &MichelsonParams) -> Result<(EquilibriumClassification, f64, f64, f64)> {
    let j = michelson_jacobian(&[x1, 0.0, 0.0], params);
    let ev = eigenvalues(&j)?;
    let real: vec::Vec<_> = ev.iter().filter(|z| z.im.abs() <= 1e-12).collect();
    let complex: vec::Vec<_> = ev.iter().filter(|z| z.im > 1e-12).collect();
    let (label, lam, rho, omega) = match (real.as_slice(), complex.as_slice()) {
        ([r], [z]) if r.re.abs() > IMAGINARY_TOL && z.re.abs() > IMAGINARY_TOL && r.re * z.re < 0.0 => {
            (SpectralLabel::SaddleFocus, r.re.abs(), z.re.abs(), z.im)
        }
        _ => (SpectralLabel::Other, f64::NAN, f64::NAN, f64::NAN),
    };
    let cls = EquilibriumClassification {
        point: vec![x1, 0.0, 0.0],
        char_coeffs: characteristic_polynomial(&j)?,
        eigenvalues: ev,
        label,
    };
    Ok((cls, lam, rho, omega))
}

pub fn michelson_spectrum(c: f64) -> Result<MichelsonSpectrum> {
    if !(c > 0.0) {
        return Err(Error::Precondition(format!("c = {c} must be positive")));
    }
    let params = MichelsonParams::unperturbed(c);
    let x = 2.0.sqrt() * c;
    let (minus, ..) = classify_at(-x, &params)?;
    let (plus, lambda, rho, omega) = classify_at(x, &params)?;
    let divergence_gap = (lambda - 2.0 * rho).abs();
    Ok(MichelsonSpectrum {
        c,
        minus,
        plus,
        lambda,
        rho,
        omega,
        divergence_gap,
        shilnikov: 0.0 < rho && rho < lambda,
    })
}
