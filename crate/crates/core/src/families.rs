//! Vector-field families of the nilpotent unfolding: the general unfolding,
//! its rescaling and limit family, the Michelson form of the 3-dimensional
//! directional chart and the translated 4-dimensional family.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{check_dim, Error, Result};
use crate::numerics::linalg::Matrix;

/// Parameters μ of the unscaled unfolding.
#[derive(Clone, Debug, PartialEq)]
pub struct UnfoldingParams {
    pub mu: Vec<f64>,
    pub kappa: f64,
}

impl UnfoldingParams {
    pub fn new(mu: Vec<f64>, kappa: f64) -> Result<Self> {
        if mu.len() < 3 {
            return Err(Error::InvalidInput("dimension must be at least 3".to_string()));
        }
        Ok(Self { mu, kappa })
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }
}

/// How ν is normalized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Chart {
    /// ‖ν‖₂ = 1.
    Spherical,
    /// νᵢ pinned to `sign` (±1), the rest free. `index` is zero-based.
    Directional { index: usize, sign: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RescaledParams {
    pub nu: Vec<f64>,
    pub epsilon: f64,
    pub kappa: f64,
    pub chart: Chart,
}

impl RescaledParams {
    pub fn spherical(nu: Vec<f64>, epsilon: f64, kappa: f64) -> Result<Self> {
        let norm: f64 = nu.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput("nu must lie on the unit sphere".to_string()));
        }
        Self::checked(nu, epsilon, kappa, Chart::Spherical)
    }

    pub fn directional(nu: Vec<f64>, index: usize, epsilon: f64, kappa: f64) -> Result<Self> {
        let pinned = *nu.get(index).ok_or(Error::DimensionMismatch { expected: index + 1, found: nu.len() })?;
        if pinned != 1.0 && pinned != -1.0 {
            return Err(Error::InvalidInput("pinned coordinate must be +1 or -1".to_string()));
        }
        Self::checked(nu, epsilon, kappa, Chart::Directional { index, sign: pinned })
    }

    fn checked(nu: Vec<f64>, epsilon: f64, kappa: f64, chart: Chart) -> Result<Self> {
        if nu.len() < 3 {
            return Err(Error::InvalidInput("dimension must be at least 3".to_string()));
        }
        if !(epsilon >= 0.0) {
            return Err(Error::InvalidInput("epsilon must be nonnegative".to_string()));
        }
        Ok(Self { nu, epsilon, kappa, chart })
    }

    pub fn n(&self) -> usize {
        self.nu.len()
    }

    /// Whether ν lies in the reversibility set (ν_{n−2i} = 0).
    pub fn is_reversible(&self, tol: f64) -> bool {
        in_reversibility_set(&self.nu, tol)
    }
}

/// ν_{n−2i} = 0 for i = 0, …, ⌊(n−2)/2⌋.
pub fn in_reversibility_set(nu: &[f64], tol: f64) -> bool {
    let n = nu.len();
    (0..=(n - 2) / 2).all(|i| nu[n - 2 * i - 1].abs() <= tol)
}

/// Parameters of the Michelson form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MichelsonParams {
    pub c: f64,
    pub nu3_bar: f64,
    pub epsilon: f64,
    pub kappa: f64,
}

impl MichelsonParams {
    pub fn new(c: f64, nu3_bar: f64, epsilon: f64, kappa: f64) -> Result<Self> {
        if !(c >= 0.0) {
            return Err(Error::InvalidInput("c must be nonnegative".to_string()));
        }
        Ok(Self { c, nu3_bar, epsilon, kappa })
    }

    /// The unperturbed system at speed `c`.
    pub fn unperturbed(c: f64) -> Self {
        Self { c, nu3_bar: 0.0, epsilon: 0.0, kappa: 1.0 }
    }
}

/// λ = (η₂, η₃ − 2, η₄, ε̄) of the translated 4-dimensional family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourDParams {
    pub lambda: [f64; 4],
    pub kappa: f64,
}

impl FourDParams {
    pub fn new(lambda: [f64; 4], kappa: f64) -> Self {
        Self { lambda, kappa }
    }

    pub fn origin(kappa: f64) -> Self {
        Self { lambda: [0.0; 4], kappa }
    }

    /// Parameters obtained from the ν₁ = −1 directional chart
    /// (ν̄₂, ν̄₃, ν̄₄) by translating q₋ to the origin.
    pub fn from_directional(nu_bar: [f64; 3], epsilon: f64, kappa: f64) -> Self {
        let eta2 = 2f64.powf(-0.75) * (nu_bar[0] - epsilon * kappa);
        let eta3 = 2f64.powf(-0.5) * nu_bar[1];
        let eta4 = 2f64.powf(-0.25) * nu_bar[2];
        let eps_bar = 2f64.powf(0.25) * epsilon;
        Self { lambda: [eta2, eta3 - 2.0, eta4, eps_bar], kappa }
    }

    pub fn eta3(&self) -> f64 {
        self.lambda[1] + 2.0
    }
}

/// Coordinate change from the ν₁ = −1 chart to the translated family:
/// x₁ = (y₁ + 1)/2, xₖ = yₖ / 2^{(k+3)/4}. Time is scaled by 2^{1/4}.
pub fn directional_to_translated(y: &[f64; 4]) -> [f64; 4] {
    [(y[0] + 1.0) / 2.0, y[1] * 2f64.powf(-1.25), y[2] * 2f64.powf(-1.5), y[3] * 2f64.powf(-1.75)]
}

pub fn translated_to_directional(x: &[f64; 4]) -> [f64; 4] {
    [2.0 * x[0] - 1.0, x[1] * 2f64.powf(1.25), x[2] * 2f64.powf(1.5), x[3] * 2f64.powf(1.75)]
}

/// Factor relating the two time variables: ẋ = `TRANSLATED_TIME_FACTOR` · D ẏ.
pub const TRANSLATED_TIME_FACTOR: f64 = 0.840_896_415_253_714_5;

fn last_component(nu: &[f64], y: &[f64]) -> f64 {
    nu[0] + (1..y.len()).map(|k| nu[k] * y[k]).sum::<f64>() + y[0] * y[0]
}

/// (y₂, …, yₙ, ν₁ + Σ νₖyₖ + y₁²).
pub fn limit_family_rhs(y: &[f64], params: &RescaledParams) -> Result<Vec<f64>> {
    check_dim(params.n(), y.len())?;
    let mut out = y[1..].to_vec();
    out.push(last_component(&params.nu, y));
    Ok(out)
}

/// The limit family plus ε·κ·y₁y₂ in the last component.
pub fn rescaled_family_rhs(y: &[f64], params: &RescaledParams) -> Result<Vec<f64>> {
    rescaled_family_rhs_with(y, params, |_| 0.0)
}

/// As [`rescaled_family_rhs`] with a user remainder: ε²·`remainder(y)` is
/// added to the last component.
pub fn rescaled_family_rhs_with(
    y: &[f64],
    params: &RescaledParams,
    remainder: impl Fn(&[f64]) -> f64,
) -> Result<Vec<f64>> {
    let mut out = limit_family_rhs(y, params)?;
    let e = params.epsilon;
    *out.last_mut().expect("n >= 3") += e * params.kappa * y[0] * y[1] + e * e * remainder(y);
    Ok(out)
}

/// (x₂, …, xₙ, μ₁ + Σ μₖxₖ + x₁² + h(x, μ)).
pub fn unfolding_rhs(x: &[f64], params: &UnfoldingParams, h: impl Fn(&[f64], &[f64]) -> f64) -> Result<Vec<f64>> {
    check_dim(params.n(), x.len())?;
    let mut out = x[1..].to_vec();
    out.push(last_component(&params.mu, x) + h(x, &params.mu));
    Ok(out)
}

/// The lowest-order h compatible with the generic condition: κ·x₁x₂.
pub fn kappa_term(kappa: f64) -> impl Fn(&[f64], &[f64]) -> f64 {
    move |x, _| kappa * x[0] * x[1]
}

fn mu_power(n: usize, k: usize) -> i32 {
    // k is zero-based.
    if k == 0 {
        2 * n as i32
    } else {
        (n - k) as i32
    }
}

fn x_power(n: usize, k: usize) -> i32 {
    (n + k) as i32
}

/// Maps rescaled parameters and state back to the unfolding.
pub fn unscale(params: &RescaledParams, y: &[f64]) -> Result<(UnfoldingParams, Vec<f64>)> {
    let n = params.n();
    check_dim(n, y.len())?;
    let e = params.epsilon;
    if !(e > 0.0) {
        return Err(Error::InvalidInput("epsilon must be positive to unscale".to_string()));
    }
    let mu = (0..n).map(|k| e.powi(mu_power(n, k)) * params.nu[k]).collect();
    let x = (0..n).map(|k| e.powi(x_power(n, k)) * y[k]).collect();
    Ok((UnfoldingParams { mu, kappa: params.kappa }, x))
}

fn nu_from_mu(mu: &[f64], e: f64) -> Vec<f64> {
    let n = mu.len();
    (0..n).map(|k| mu[k] / e.powi(mu_power(n, k))).collect()
}

/// Rescales (μ, x) into the spherical chart, choosing ε > 0 with ‖ν‖ = 1.
pub fn rescale_spherical(params: &UnfoldingParams, x: &[f64]) -> Result<(RescaledParams, Vec<f64>)> {
    let n = params.n();
    check_dim(n, x.len())?;
    if params.mu.iter().all(|&m| m == 0.0) {
        return Err(Error::InvalidInput("mu = 0 has no rescaling".to_string()));
    }
    let g = |e: f64| nu_from_mu(&params.mu, e).iter().map(|v| v * v).sum::<f64>().ln();
    // ‖ν(ε)‖ is strictly decreasing in ε; bisect on ln ε.
    let (mut lo, mut hi) = (-60.0f64, 60.0f64);
    if g(lo.exp()) < 0.0 || g(hi.exp()) > 0.0 {
        return Err(Error::InvalidInput("mu outside representable range".to_string()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid.exp()) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let e = (0.5 * (lo + hi)).exp();
    let mut nu = nu_from_mu(&params.mu, e);
    let norm = nu.iter().map(|v| v * v).sum::<f64>().sqrt();
    nu.iter_mut().for_each(|v| *v /= norm);
    let y = (0..n).map(|k| x[k] / e.powi(x_power(n, k))).collect();
    Ok((RescaledParams { nu, epsilon: e, kappa: params.kappa, chart: Chart::Spherical }, y))
}

/// Rescales (μ, x) into the directional chart pinning νᵢ (zero-based).
pub fn rescale_directional(params: &UnfoldingParams, x: &[f64], index: usize) -> Result<(RescaledParams, Vec<f64>)> {
    let n = params.n();
    check_dim(n, x.len())?;
    let m = *params.mu.get(index).ok_or(Error::DimensionMismatch { expected: index + 1, found: n })?;
    if m == 0.0 {
        return Err(Error::InvalidInput("pinned parameter is zero".to_string()));
    }
    let e = m.abs().powf(1.0 / mu_power(n, index) as f64);
    let mut nu = nu_from_mu(&params.mu, e);
    nu[index] = m.signum();
    let y = (0..n).map(|k| x[k] / e.powi(x_power(n, k))).collect();
    let chart = Chart::Directional { index, sign: m.signum() };
    Ok((RescaledParams { nu, epsilon: e, kappa: params.kappa, chart }, y))
}

/// The unfolding field written in rescaled coordinates:
/// ẏₖ = ε^{−(n+k−1)} ẋₖ / ε.
pub fn rescaled_from_unfolding_rhs(
    y: &[f64],
    params: &RescaledParams,
    h: impl Fn(&[f64], &[f64]) -> f64,
) -> Result<Vec<f64>> {
    let n = params.n();
    let (up, x) = unscale(params, y)?;
    let fx = unfolding_rhs(&x, &up, h)?;
    let e = params.epsilon;
    Ok((0..n).map(|k| fx[k] / e.powi(x_power(n, k) + 1)).collect())
}

/// Diagonal of the involution R(y) = ((−1)ⁿy₁, (−1)ⁿ⁻¹y₂, …, −yₙ).
pub fn involution_r(n: usize) -> Vec<f64> {
    (0..n).map(|k| if (n - k) % 2 == 0 { 1.0 } else { -1.0 }).collect()
}

pub fn involution_matrix(n: usize) -> Matrix {
    let d = involution_r(n);
    Matrix::from_fn(n, n, |i, j| if i == j { d[i] } else { 0.0 })
}

pub fn apply_involution(y: &[f64]) -> Vec<f64> {
    y.iter().zip(involution_r(y.len())).map(|(a, s)| a * s).collect()
}

/// The parameter/state symmetry of the limit family: ν₁ is kept, νₖ and yₖ
/// pick up the sign of R.
pub fn sign_symmetry(nu: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = nu.len();
    check_dim(n, y.len())?;
    let r = involution_r(n);
    let nu2 = (0..n).map(|k| if k == 0 { nu[0] } else { r[k] * nu[k] }).collect();
    let y2 = (0..n).map(|k| r[k] * y[k]).collect();
    Ok((nu2, y2))
}

/// L(y) = yₙ − ν₂y₁ − … − νₙyₙ₋₁ and its derivative ν₁ + y₁² along the
/// limit flow.
pub fn monotone_functional_l(y: &[f64], nu: &[f64]) -> Result<(f64, f64)> {
    let n = nu.len();
    check_dim(n, y.len())?;
    let l = y[n - 1] - (1..n).map(|k| nu[k] * y[k - 1]).sum::<f64>();
    Ok((l, nu[0] + y[0] * y[0]))
}

pub fn monotone_functional_gradient(nu: &[f64]) -> Vec<f64> {
    let n = nu.len();
    let mut g: Vec<f64> = (1..n).map(|k| -nu[k]).collect();
    g.push(1.0);
    g
}

/// (x₂, x₃, c² − x₂ + ν̄₃x₃ − ½x₁² − 2εκx₁x₂).
pub fn michelson_rhs(x: &[f64; 3], p: &MichelsonParams) -> [f64; 3] {
    [
        x[1],
        x[2],
        p.c * p.c - x[1] + p.nu3_bar * x[2] - 0.5 * x[0] * x[0] - 2.0 * p.epsilon * p.kappa * x[0] * x[1],
    ]
}

pub fn michelson_jacobian(x: &[f64; 3], p: &MichelsonParams) -> Matrix {
    let ek = 2.0 * p.epsilon * p.kappa;
    Matrix::from_rows(&[
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [-x[0] - ek * x[1], -1.0 - ek * x[0], p.nu3_bar],
    ])
}

/// (x₂, x₃, x₄, −x₁ + λ₁x₂ + (2+λ₂)x₃ + λ₃x₄ + x₁² + λ₄κx₁x₂).
pub fn four_d_translated_rhs(x: &[f64; 4], p: &FourDParams) -> [f64; 4] {
    let l = &p.lambda;
    [
        x[1],
        x[2],
        x[3],
        -x[0] + l[0] * x[1] + (2.0 + l[1]) * x[2] + l[2] * x[3] + x[0] * x[0] + l[3] * p.kappa * x[0] * x[1],
    ]
}

pub fn four_d_jacobian(x: &[f64; 4], p: &FourDParams) -> Matrix {
    let l = &p.lambda;
    let k = l[3] * p.kappa;
    Matrix::from_rows(&[
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [-1.0 + 2.0 * x[0] + k * x[1], l[0] + k * x[0], 2.0 + l[1], l[2]],
    ])
}

/// Jacobian of the limit family at `y`.
pub fn limit_family_jacobian(y: &[f64], params: &RescaledParams) -> Result<Matrix> {
    let n = params.n();
    check_dim(n, y.len())?;
    let mut j = Matrix::zeros(n, n);
    for i in 0..n - 1 {
        j[(i, i + 1)] = 1.0;
    }
    j[(n - 1, 0)] = 2.0 * y[0] + params.epsilon * params.kappa * y[1];
    for k in 1..n {
        j[(n - 1, k)] = params.nu[k];
    }
    j[(n - 1, 1)] += params.epsilon * params.kappa * y[0];
    Ok(j)
}

/// Equilibria (±√(−ν₁), 0, …, 0) of the limit family, empty for ν₁ > 0.
pub fn limit_family_equilibria(nu: &[f64]) -> Vec<Vec<f64>> {
    let n = nu.len();
    if nu[0] > 0.0 {
        return Vec::new();
    }
    let r = (-nu[0]).sqrt();
    let mut plus = vec![0.0; n];
    plus[0] = r;
    let mut minus = vec![0.0; n];
    minus[0] = -r;
    vec![plus, minus]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dir4(nu: [f64; 4], e: f64, k: f64) -> RescaledParams {
        RescaledParams::directional(nu.to_vec(), 0, e, k).unwrap()
    }

    #[test]
    fn limit_family_examples() {
        let p = dir4([-1.0, 0.0, 0.0, 0.0], 0.0, 1.0);
        assert_eq!(limit_family_rhs(&[0.0; 4], &p).unwrap(), [0.0, 0.0, 0.0, -1.0]);
        assert_eq!(limit_family_rhs(&[1.0, 0.0, 0.0, 0.0], &p).unwrap(), [0.0; 4]);
        let p3 = RescaledParams::spherical(vec![0.0, -1.0, 0.0], 0.0, 1.0).unwrap();
        assert_eq!(limit_family_rhs(&[1.0, 1.0, 1.0], &p3).unwrap(), [1.0, 1.0, 0.0]);
        assert!(limit_family_rhs(&[1.0, 1.0], &p3).is_err());
    }

    #[test]
    fn rescaled_family_examples() {
        let p = dir4([-1.0, 0.0, 0.0, 0.0], 0.1, 2.0);
        let f = rescaled_family_rhs(&[1.0, 1.0, 0.0, 0.0], &p).unwrap();
        assert!((f[3] - 0.2).abs() < 1e-15);
        for q in [[1.0, 0.0, 0.0, 0.0], [-1.0, 0.0, 0.0, 0.0]] {
            assert_eq!(rescaled_family_rhs(&q, &p).unwrap()[3], 0.0);
        }
    }

    #[test]
    fn translated_family_matches_directional_chart() {
        let nu_bar = [0.3, 2.4, -0.2];
        let (e, k) = (0.05, 1.7);
        let pd = dir4([-1.0, nu_bar[0], nu_bar[1], nu_bar[2]], e, k);
        let pt = FourDParams::from_directional(nu_bar, e, k);
        let x = [0.4, -0.3, 0.2, 0.7];
        let y = translated_to_directional(&x);
        let fy = rescaled_family_rhs(&y, &pd).unwrap();
        let fx = four_d_translated_rhs(&x, &pt);
        let scale = [0.5, 2f64.powf(-1.25), 2f64.powf(-1.5), 2f64.powf(-1.75)];
        for i in 0..4 {
            assert!((TRANSLATED_TIME_FACTOR * scale[i] * fy[i] - fx[i]).abs() < 1e-13, "{i}");
        }
        assert!((TRANSLATED_TIME_FACTOR - 2f64.powf(-0.25)).abs() < 1e-16);
        let back = directional_to_translated(&y);
        assert!((0..4).all(|i| (back[i] - x[i]).abs() < 1e-15));
    }

    #[test]
    fn michelson_equilibrium_and_jacobian() {
        let p = MichelsonParams::unperturbed(0.7);
        let q = [2f64.sqrt() * 0.7, 0.0, 0.0];
        assert!(michelson_rhs(&q, &p).iter().all(|v| v.abs() < 1e-15));
        let j = michelson_jacobian(&q, &p);
        assert_eq!(j[(2, 0)], -q[0]);
    }

    #[test]
    fn four_d_origin() {
        let p = FourDParams::origin(1.0);
        assert_eq!(four_d_translated_rhs(&[0.0; 4], &p), [0.0; 4]);
        assert_eq!(four_d_jacobian(&[0.0; 4], &p).row(3), &[-1.0, 0.0, 2.0, 0.0]);
    }

    #[test]
    fn involution_is_an_involution() {
        for n in 3..=8 {
            let r = involution_r(n);
            assert!(r.iter().all(|s| s * s == 1.0));
            assert_eq!(r[n - 1], -1.0);
            assert_eq!(r[0], if n % 2 == 0 { 1.0 } else { -1.0 });
        }
    }

    #[test]
    fn functional_l_derivative() {
        let nu = [1.0, 0.2, -0.4, 0.1];
        let (_, dl) = monotone_functional_l(&[0.0, 0.3, 0.2, 0.1], &nu).unwrap();
        assert_eq!(dl, 1.0);
    }

    #[test]
    fn spherical_validation() {
        assert!(RescaledParams::spherical(vec![1.0, 1.0, 0.0], 0.0, 1.0).is_err());
        assert!(RescaledParams::directional(vec![0.5, 1.0, 0.0], 0, 0.0, 1.0).is_err());
    }
}
