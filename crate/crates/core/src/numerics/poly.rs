//! Real polynomials given by coefficients in descending powers.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::linalg::{eigenvalues, Matrix};

/// Roots of `c[0] rᵈ + c[1] rᵈ⁻¹ + … + c[d]` from the companion matrix.
pub fn roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let lead = *coeffs.first().ok_or_else(|| Error::InvalidInput("empty polynomial".into()))?;
    if lead == 0.0 {
        return Err(Error::InvalidInput("leading coefficient is zero".into()));
    }
    let d = coeffs.len() - 1;
    let comp = Matrix::from_fn(d, d, |i, j| {
        if i + 1 < d {
            if j == i + 1 {
                1.0
            } else {
                0.0
            }
        } else {
            -coeffs[d - j] / lead
        }
    });
    eigenvalues(&comp)
}

pub fn eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

pub fn eval_real(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
}

pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    let d = coeffs.len().saturating_sub(1);
    coeffs[..d].iter().enumerate().map(|(i, &c)| c * (d - i) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots() {
        // r^3 - 6r^2 + 11r - 6
        let r = roots(&[1.0, -6.0, 11.0, -6.0]).unwrap();
        for (z, x) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((z.re - x).abs() < 1e-12 && z.im.abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_and_eval() {
        let c = [1.0, 0.0, -2.0, 1.0];
        assert_eq!(derivative(&c), [3.0, 0.0, -2.0]);
        assert_eq!(eval_real(&c, 2.0), 5.0);
    }
}
