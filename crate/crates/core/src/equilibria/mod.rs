//! Equilibria, characteristic polynomials and spectral labels.

mod discriminant;
mod michelson;
mod reversibility;

pub use discriminant::{
    char_poly_4d_perturbed, classify_region_4d, discriminant_surfaces, SurfaceChart, SurfacePoint,
    DiscriminantSurfaces,
};
pub use michelson::{michelson_spectrum, MichelsonSpectrum};
pub use reversibility::{bd_angle, classify_reversibility_4d, scan_reversibility_curve, CurvePoint};

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::numerics::poly;

/// Two eigenvalues count as one double eigenvalue below this separation.
pub const DOUBLE_TOL: f64 = 1e-6;
/// Real parts below this are treated as zero.
pub const IMAGINARY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpectralLabel {
    Bt,
    Hdz,
    Bd,
    HhPoint,
    Sr,
    Df,
    HhArc,
    Ff,
    NodeFocus,
    FocusNode,
    Nn,
    SaddleFocus,
    Other,
}

impl SpectralLabel {
    pub const CURVE_STRATA: [SpectralLabel; 7] = [
        SpectralLabel::Bt,
        SpectralLabel::Hdz,
        SpectralLabel::Bd,
        SpectralLabel::HhPoint,
        SpectralLabel::Sr,
        SpectralLabel::Df,
        SpectralLabel::HhArc,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SpectralLabel::Bt => "BT",
            SpectralLabel::Hdz => "HDZ",
            SpectralLabel::Bd => "BD",
            SpectralLabel::HhPoint => "HH",
            SpectralLabel::Sr => "SR",
            SpectralLabel::Df => "DF",
            SpectralLabel::HhArc => "HH-arc",
            SpectralLabel::Ff => "FF",
            SpectralLabel::NodeFocus => "N+F-",
            SpectralLabel::FocusNode => "F+N-",
            SpectralLabel::Nn => "NN",
            SpectralLabel::SaddleFocus => "saddle-focus",
            SpectralLabel::Other => "other",
        }
    }
}

impl fmt::Display for SpectralLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquilibriumClassification {
    pub point: Vec<f64>,
    /// Monic, descending.
    pub char_coeffs: Vec<f64>,
    pub eigenvalues: Vec<Complex64>,
    pub label: SpectralLabel,
}

impl EquilibriumClassification {
    /// Largest of: |poly(λ)| over the eigenvalues, and the mismatch of their
    /// sum and product against the coefficients.
    pub fn consistency_residual(&self) -> f64 {
        let n = self.eigenvalues.len();
        let mut worst: f64 = self
            .eigenvalues
            .iter()
            .map(|&z| poly::eval(&self.char_coeffs, z).norm())
            .fold(0.0, f64::max);
        let sum: Complex64 = self.eigenvalues.iter().sum();
        let prod: Complex64 = self.eigenvalues.iter().product();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        worst = worst.max((sum + self.char_coeffs[1]).norm());
        worst.max((prod - sign * self.char_coeffs[n]).norm())
    }
}
