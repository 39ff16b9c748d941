//! Improper-node surfaces 𝒟∓ of the origin of the translated 4D family and
//! the focus/node split of its spectrum.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::{EquilibriumClassification, SpectralLabel, IMAGINARY_TOL};
use crate::error::{Error, Result};
use crate::families::{four_d_jacobian, FourDParams};
use crate::numerics::linalg::{characteristic_polynomial, eigenvalues, least_squares, Matrix};
use crate::numerics::newton::newton_solve;
use crate::numerics::ode::ToleranceConfig;
use crate::numerics::poly;

/// Grid points per free coordinate.
const GRID: usize = 5;
/// A root pair closer than this in squared separation is on 𝒟∓.
const SURFACE_TOL: f64 = 1e-8;

/// (A, B, C, D) with Q(r) = r⁴ − Dr³ − Cr² − Br − A the characteristic
/// polynomial of the Jacobian at the origin.
pub fn char_poly_4d_perturbed(params: &FourDParams) -> [f64; 4] {
    let c = characteristic_polynomial(&four_d_jacobian(&[0.0; 4], params)).expect("square Jacobian");
    [-c[4], -c[3], -c[2], -c[1]]
}

fn q_coeffs(params: &FourDParams) -> [f64; 5] {
    let [a, b, c, d] = char_poly_4d_perturbed(params);
    [1.0, -d, -c, -b, -a]
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfacePoint {
    pub lambda: [f64; 4],
    /// The double root.
    pub r: f64,
    pub q: f64,
    pub dq: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceChart {
    /// −1 for 𝒟⁻, +1 for 𝒟⁺.
    pub sign: f64,
    pub points: Vec<SurfacePoint>,
    /// Unit normal at the center from the least-squares fit.
    pub normal: [f64; 4],
    pub expected_normal: [f64; 4],
    /// Distance between the unit normals, up to orientation.
    pub normal_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscriminantSurfaces {
    pub center: [f64; 4],
    pub radius: f64,
    pub minus: SurfaceChart,
    pub plus: SurfaceChart,
}

fn unit(v: [f64; 4]) -> [f64; 4] {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.map(|x| x / n)
}

/// Solves Q = ∂Q/∂r = 0 for (r, λ₁) with λ₂, λ₃, λ₄ fixed.
fn solve_point(sign: f64, rest: [f64; 3], kappa: f64, seed: [f64; 2]) -> Result<SurfacePoint> {
    let tol = ToleranceConfig::new(1e-14, 1e-14, 1.0, 50)?;
    let lam = |l1: f64| FourDParams::new([l1, rest[0], rest[1], rest[2]], kappa);
    let x = newton_solve(
        |z: &[f64]| {
            let c = q_coeffs(&lam(z[1]));
            Ok(vec![poly::eval_real(&c, z[0]), poly::eval_real(&poly::derivative(&c), z[0])])
        },
        &seed,
        &tol,
    )?;
    if x[0] * sign <= 0.0 {
        return Err(Error::Precondition(format!("double root {} has the wrong sign", x[0])));
    }
    let params = lam(x[1]);
    let c = q_coeffs(&params);
    Ok(SurfacePoint {
        lambda: params.lambda,
        r: x[0],
        q: poly::eval_real(&c, x[0]),
        dq: poly::eval_real(&poly::derivative(&c), x[0]),
    })
}

/// Monomials of degree ≤ 3 in three variables.
fn monomials(u: [f64; 3]) -> Vec<f64> {
    let mut out = vec![1.0];
    for i in 0..3 {
        out.push(u[i]);
    }
    for i in 0..3 {
        for j in i..3 {
            out.push(u[i] * u[j]);
        }
    }
    for i in 0..3 {
        for j in i..3 {
            for k in j..3 {
                out.push(u[i] * u[j] * u[k]);
            }
        }
    }
    out
}

fn chart(sign: f64, center: [f64; 4], radius: f64, kappa: f64) -> Result<SurfaceChart> {
    let offsets: Vec<f64> =
        (0..GRID).map(|i| radius * (2.0 * i as f64 / (GRID - 1) as f64 - 1.0)).collect();
    let mut points = Vec::new();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for &d2 in &offsets {
        for &d3 in &offsets {
            for &d4 in &offsets {
                let rest = [center[1] + d2, center[2] + d3, center[3] + d4];
                let guess = center[0] - sign * d2 - d3;
                let pt = solve_point(sign, rest, kappa, [sign, guess])?;
                rows.push(monomials([d2, d3, d4]));
                rhs.push(pt.lambda[0] - center[0]);
                points.push(pt);
            }
        }
    }
    let ncols = rows[0].len();
    let a = Matrix::from_row_major(rows.len(), ncols, rows.concat())?;
    let coef = least_squares(&a, &rhs)?;
    // λ₁ = g(λ₂, λ₃, λ₄): the normal is (1, −g₂, −g₃, −g₄).
    let normal = unit([1.0, -coef[1], -coef[2], -coef[3]]);
    let expected_normal = unit([1.0, sign, 1.0, 0.0]);
    let diff = |s: f64| normal.iter().zip(&expected_normal).map(|(a, b)| (a - s * b).abs()).fold(0.0, f64::max);
    Ok(SurfaceChart { sign, points, normal, expected_normal, normal_error: diff(1.0).min(diff(-1.0)) })
}

/// Local charts of 𝒟⁻ and 𝒟⁺ as graphs λ₁ = g(λ₂, λ₃, λ₄) over a cube of
/// half-width `radius` around `center`.
pub fn discriminant_surfaces(center: [f64; 4], radius: f64, kappa: f64) -> Result<DiscriminantSurfaces> {
    if !(radius > 0.0 && radius <= 0.2) {
        return Err(Error::Precondition(format!("radius {radius} outside (0, 0.2]")));
    }
    Ok(DiscriminantSurfaces {
        center,
        radius,
        minus: chart(-1.0, center, radius, kappa)?,
        plus: chart(1.0, center, radius, kappa)?,
    })
}

/// Focus/node type of the stable and unstable eigenvalue pairs at the
/// origin.
pub fn classify_region_4d(params: &FourDParams) -> Result<EquilibriumClassification> {
    let j = four_d_jacobian(&[0.0; 4], params);
    let ev = eigenvalues(&j)?;
    if ev.iter().any(|z| z.re.abs() < IMAGINARY_TOL) {
        return Err(Error::Precondition("origin is not hyperbolic".into()));
    }
    let stable: Vec<Complex64> = ev.iter().copied().filter(|z| z.re < 0.0).collect();
    let unstable: Vec<Complex64> = ev.iter().copied().filter(|z| z.re > 0.0).collect();
    if stable.len() != 2 || unstable.len() != 2 {
        return Err(Error::Precondition(format!("origin has {} stable eigenvalues", stable.len())));
    }
    // Discriminant of the quadratic factor: (r₁ − r₂)², real for both cases.
    let disc = |pair: &[Complex64]| ((pair[0] - pair[1]) * (pair[0] - pair[1])).re;
    let (ds, du) = (disc(&stable), disc(&unstable));
    if ds.abs() < SURFACE_TOL || du.abs() < SURFACE_TOL {
        return Err(Error::Ambiguous(format!(
            "within {SURFACE_TOL:e} of a discriminant surface (stable {ds:e}, unstable {du:e})"
        )));
    }
    let label = match (du > 0.0, ds > 0.0) {
        (false, false) => SpectralLabel::Ff,
        (true, false) => SpectralLabel::NodeFocus,
        (false, true) => SpectralLabel::FocusNode,
        (true, true) => SpectralLabel::Nn,
    };
    Ok(EquilibriumClassification {
        point: vec![0.0; 4],
        char_coeffs: characteristic_polynomial(&j)?,
        eigenvalues: ev,
        label,
    })
}
