//! Spectrum of p₋ along the reversibility curve ν₁² + ν₃² = 1, ν₁ ≤ 0,
//! where the characteristic polynomial is r⁴ − ν₃r² + 2√(−ν₁).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::{EquilibriumClassification, SpectralLabel, DOUBLE_TOL};
use crate::error::{Error, Result};
use crate::numerics::linalg::sort_complex;

#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint {
    pub theta: f64,
    pub nu1: f64,
    pub nu3: f64,
    pub classification: EquilibriumClassification,
}

pub fn classify_reversibility_4d(nu1: f64, nu3: f64) -> Result<EquilibriumClassification> {
    if nu1 > 1e-10 || (nu1 * nu1 + nu3 * nu3 - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition(format!("({nu1}, {nu3}) is not on the reversibility curve")));
    }
    let q = 2.0 * (-nu1).max(0.0).sqrt();
    let disc = nu3 * nu3 - 4.0 * q;
    let root = Complex64::new(disc, 0.0).sqrt();
    // z = r² solves z² − ν₃z + q = 0; z_small is the root nearer to 0.
    let (z_big, z_small) = {
        let zp = (Complex64::new(nu3, 0.0) + root) / 2.0;
        let zm = (Complex64::new(nu3, 0.0) - root) / 2.0;
        if zp.norm() >= zm.norm() {
            (zp, zm)
        } else {
            (zm, zp)
        }
    };
    let (rb, rs) = (z_big.sqrt(), z_small.sqrt());
    let mut eigenvalues = vec![rb, -rb, rs, -rs];
    sort_complex(&mut eigenvalues);

    let label = if 2.0 * rs.norm() < DOUBLE_TOL {
        if nu3 > 0.0 {
            SpectralLabel::Bt
        } else {
            SpectralLabel::Hdz
        }
    } else if (rb - rs).norm() < DOUBLE_TOL || (rb + rs).norm() < DOUBLE_TOL {
        if nu3 > 0.0 {
            SpectralLabel::Bd
        } else {
            SpectralLabel::HhPoint
        }
    } else if disc < 0.0 {
        SpectralLabel::Df
    } else if nu3 > 0.0 {
        SpectralLabel::Sr
    } else {
        SpectralLabel::HhArc
    };
    Ok(EquilibriumClassification {
        point: vec![-(-nu1).max(0.0).sqrt(), 0.0, 0.0, 0.0],
        char_coeffs: vec![1.0, 0.0, -nu3, 0.0, q],
        eigenvalues,
        label,
    })
}

/// Angle θ ∈ (0, π/2) of BD on the parametrization (−sin θ, cos θ), the
/// root of cos⁴θ = 64 sin θ; HH is at π − θ.
pub fn bd_angle() -> f64 {
    let mut th: f64 = 1.0 / 64.0;
    for _ in 0..50 {
        let (s, c) = th.sin_cos();
        let g = c.powi(4) - 64.0 * s;
        let dg = -4.0 * c.powi(3) * s - 64.0 * c;
        let step = g / dg;
        th -= step;
        if step.abs() < 1e-17 {
            break;
        }
    }
    th
}

/// Points per open arc next to θ = 0 and θ = π.
const SHORT_ARC_POINTS: usize = 10;

/// `n` points on (−sin θ, cos θ), θ ∈ [0, π]: BT, BD, HH and HDZ plus
/// uniform grids on the three open arcs between them.
pub fn scan_reversibility_curve(n: usize) -> Result<Vec<CurvePoint>> {
    if n < 4 + 2 * SHORT_ARC_POINTS + 1 {
        return Err(Error::InvalidInput(format!("scan needs at least {} points", 5 + 2 * SHORT_ARC_POINTS)));
    }
    let bd = bd_angle();
    let pi = core::f64::consts::PI;
    let interior = |a: f64, b: f64, k: usize| (1..=k).map(move |i| a + (b - a) * i as f64 / (k + 1) as f64);
    let mut thetas = vec![0.0, bd, pi - bd, pi];
    thetas.extend(interior(0.0, bd, SHORT_ARC_POINTS));
    thetas.extend(interior(bd, pi - bd, n - 4 - 2 * SHORT_ARC_POINTS));
    thetas.extend(interior(pi - bd, pi, SHORT_ARC_POINTS));
    thetas.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
    thetas
        .into_iter()
        .map(|theta| {
            let (nu1, nu3) = if theta == pi { (0.0, -1.0) } else { (-theta.sin(), theta.cos()) };
            Ok(CurvePoint { theta, nu1, nu3, classification: classify_reversibility_4d(nu1, nu3)? })
        })
        .collect()
}
