//! Hamiltonian form of the even-dimensional limit family on the
//! reversibility set, and the first integral of the translated 4D family.
//!
//! With m = n/2, q = S·(y₁, y₃, …, y_{n−1}) and p = (y₂, y₄, …, yₙ) the
//! limit family becomes q̇ = ∂H/∂p, ṗ = −∂H/∂q for H = ½⟨Sp, p⟩ + V(q).
//! S is the Hankel matrix with first row (−ν₃, −ν₅, …, −ν_{n−1}, 1) and its
//! inverse is the lower anti-triangular Hankel matrix built from the b
//! recursion.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::families::in_reversibility_set;
use crate::numerics::linalg::Matrix;
use crate::numerics::ode::{integrate, ToleranceConfig, Trajectory};

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalSystem {
    pub n: usize,
    pub m: usize,
    /// (ν₁, ν₃, …, ν_{n−1}).
    pub nu_odd: Vec<f64>,
    pub s: Matrix,
    pub s_inv: Matrix,
    /// (b₁, …, b_m) with b₁ = 1.
    pub b: Vec<f64>,
    pub potential: PotentialCoeffs,
}

/// V(q) = ½ qᵀ·quadratic·q − ⅓ q_m³ + linear·q_m.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialCoeffs {
    pub quadratic: Matrix,
    pub linear: f64,
    pub cubic: f64,
}

impl CanonicalSystem {
    /// ν_{2k+1} for k = 0, …, m−1.
    fn nu(&self, k: usize) -> f64 {
        self.nu_odd[k]
    }

    pub fn potential(&self, q: &[f64]) -> Result<f64> {
        check_dim(self.m, q.len())?;
        let mq = self.potential.quadratic.mul_vec(q)?;
        let quad: f64 = 0.5 * q.iter().zip(&mq).map(|(a, b)| a * b).sum::<f64>();
        let qm = q[self.m - 1];
        Ok(quad + self.potential.cubic * qm * qm * qm + self.potential.linear * qm)
    }

    pub fn potential_gradient(&self, q: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.m, q.len())?;
        let mut g = self.potential.quadratic.mul_vec(q)?;
        let qm = q[self.m - 1];
        g[self.m - 1] += 3.0 * self.potential.cubic * qm * qm + self.potential.linear;
        Ok(g)
    }

    pub fn hamiltonian(&self, q: &[f64], p: &[f64]) -> Result<f64> {
        check_dim(self.m, p.len())?;
        let sp = self.s.mul_vec(p)?;
        let kinetic: f64 = 0.5 * sp.iter().zip(p).map(|(a, b)| a * b).sum::<f64>();
        Ok(kinetic + self.potential(q)?)
    }

    /// (∂H/∂p, −∂H/∂q).
    pub fn hamiltonian_field(&self, q: &[f64], p: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        check_dim(self.m, p.len())?;
        let qdot = self.s.mul_vec(p)?;
        let pdot = self.potential_gradient(q)?.into_iter().map(|g| -g).collect();
        Ok((qdot, pdot))
    }

    pub fn to_canonical(&self, y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        check_dim(self.n, y.len())?;
        let odd: Vec<f64> = y.iter().step_by(2).copied().collect();
        let p: Vec<f64> = y.iter().skip(1).step_by(2).copied().collect();
        Ok((self.s.mul_vec(&odd)?, p))
    }

    pub fn from_canonical(&self, q: &[f64], p: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.m, p.len())?;
        let odd = self.s_inv.mul_vec(q)?;
        let mut y = vec![0.0; self.n];
        for k in 0..self.m {
            y[2 * k] = odd[k];
            y[2 * k + 1] = p[k];
        }
        Ok(y)
    }

    /// The limit family on the reversibility set.
    pub fn limit_field(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.n, y.len())?;
        let mut out = y[1..].to_vec();
        let last = self.nu(0) + (1..self.m).map(|k| self.nu(k) * y[2 * k]).sum::<f64>() + y[0] * y[0];
        out.push(last);
        Ok(out)
    }

    /// The limit family pushed forward to (q̇, ṗ).
    pub fn transformed_field(&self, q: &[f64], p: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let y = self.from_canonical(q, p)?;
        let f = self.limit_field(&y)?;
        let odd: Vec<f64> = f.iter().step_by(2).copied().collect();
        let pdot = f.iter().skip(1).step_by(2).copied().collect();
        Ok((self.s.mul_vec(&odd)?, pdot))
    }

    /// H evaluated at the canonical image of `y`.
    pub fn hamiltonian_of_state(&self, y: &[f64]) -> Result<f64> {
        let (q, p) = self.to_canonical(y)?;
        self.hamiltonian(&q, &p)
    }
}

/// Builds the canonical coordinates for even `n` and ν on the
/// reversibility set (ν given in full, ν₁ … νₙ).
pub fn build_canonical(n: usize, nu: &[f64]) -> Result<CanonicalSystem> {
    if n % 2 != 0 || n < 4 {
        return Err(Error::InvalidInput(format!("dimension must be even and at least 4, got {n}")));
    }
    check_dim(n, nu.len())?;
    if !in_reversibility_set(nu, 1e-10) {
        return Err(Error::InvalidInput("nu is not in the reversibility set".into()));
    }
    let m = n / 2;
    let nu_odd: Vec<f64> = (0..m).map(|k| nu[2 * k]).collect();
    // ν_{2k+1} with one-based k.
    let nuo = |k: usize| nu_odd[k];

    let s = Matrix::from_fn(m, m, |i, j| {
        let k = i + j;
        if k + 2 <= m {
            -nuo(k + 1)
        } else if k + 1 == m {
            1.0
        } else {
            0.0
        }
    });

    // b is stored one-based in `bb`.
    let mut bb = vec![0.0; m + 1];
    bb[1] = 1.0;
    for i in 2..=m {
        bb[i] = (1..i).map(|l| nuo(m - i + l) * bb[l]).sum();
    }
    let s_inv = Matrix::from_fn(m, m, |i, j| {
        let k = (i + 1 + j + 1) as isize - m as isize;
        if k >= 1 {
            bb[k as usize]
        } else {
            0.0
        }
    });

    let mut quad = Matrix::zeros(m, m);
    // Entries are added to the coefficient of q_i q_j (one-based indices).
    let mut add = |i: usize, j: usize, a: f64| {
        if i == j {
            quad[(i - 1, i - 1)] += 2.0 * a;
        } else {
            quad[(i - 1, j - 1)] += a;
            quad[(j - 1, i - 1)] += a;
        }
    };
    let qmm: f64 = (1..m).map(|k| nuo(k) * bb[k + 1]).sum();
    add(m, m, -0.5 * qmm);
    for j in 1..=m / 2 {
        add(m - j, m - j, -0.5 * bb[m - 2 * j + 1]);
    }
    for k in 1..m {
        for i in m - k..m {
            add(i, m, -nuo(k) * bb[i + k + 1 - m]);
        }
    }
    for j in 1..=m / 2 {
        for i in j..m - j {
            add(i, m - j, -bb[i - j + 1]);
        }
    }
    let potential = PotentialCoeffs { quadratic: quad, linear: -nuo(0), cubic: -1.0 / 3.0 };
    Ok(CanonicalSystem { n, m, nu_odd, s, s_inv, b: bb[1..].to_vec(), potential })
}

/// Chunk length for [`conservation_run`].
const CONSERVATION_CHUNK: f64 = 0.5;

/// Outcome of integrating the limit family and tracking H along the orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct ConservationRun {
    pub trajectory: Trajectory,
    pub h0: f64,
    pub max_delta_h: f64,
    /// End of the covered interval; below `t_end` when the orbit escaped.
    pub t_reached: f64,
    pub escaped: bool,
}

/// Integrates the limit family from `y0` over [0, `t_end`], stopping at the
/// first chunk boundary where max |yᵢ| exceeds `escape_radius` (solutions
/// of the limit family typically blow up in finite time).
pub fn conservation_run(
    sys: &CanonicalSystem,
    y0: &[f64],
    t_end: f64,
    escape_radius: f64,
    tol: &ToleranceConfig,
) -> Result<ConservationRun> {
    check_dim(sys.n, y0.len())?;
    if !(t_end > 0.0 && escape_radius > 0.0) {
        return Err(Error::InvalidInput(format!("t_end {t_end} and escape radius {escape_radius} must be positive")));
    }
    let field = |_: f64, y: &[f64], dy: &mut [f64]| {
        dy[..sys.n - 1].copy_from_slice(&y[1..]);
        dy[sys.n - 1] = sys.nu(0) + (1..sys.m).map(|k| sys.nu(k) * y[2 * k]).sum::<f64>() + y[0] * y[0];
    };
    let h0 = sys.hamiltonian_of_state(y0)?;
    let mut trajectory: Option<Trajectory> = None;
    let mut t = 0.0;
    let mut escaped = false;
    while t < t_end && !escaped {
        let t1 = (t + CONSERVATION_CHUNK).min(t_end);
        let start = trajectory.as_ref().map_or_else(|| y0.to_vec(), |tr| tr.last().to_vec());
        let piece = integrate(field, &start, (t, t1), tol)?;
        escaped = piece.states().any(|y| y.iter().any(|v| v.abs() > escape_radius));
        trajectory = Some(match trajectory {
            None => piece,
            Some(tr) => tr.concat(piece)?,
        });
        t = t1;
    }
    let trajectory = trajectory.expect("at least one chunk");
    let mut max_delta_h: f64 = 0.0;
    for y in trajectory.states() {
        max_delta_h = max_delta_h.max((sys.hamiltonian_of_state(y)? - h0).abs());
    }
    Ok(ConservationRun { t_reached: trajectory.t_end(), trajectory, h0, max_delta_h, escaped })
}

/// ½x₁² − ⅓x₁³ − (η₃/2)x₂² + x₂x₄ − ½x₃², first integral of the translated
/// 4D family at λ₁ = λ₃ = λ₄ = 0.
pub fn first_integral_4d_eta(x: &[f64; 4], eta3: f64) -> f64 {
    0.5 * x[0] * x[0] - x[0] * x[0] * x[0] / 3.0 - 0.5 * eta3 * x[1] * x[1] + x[1] * x[3] - 0.5 * x[2] * x[2]
}

/// The first integral at λ = 0 (η₃ = 2).
pub fn first_integral_4d(x: &[f64; 4]) -> f64 {
    first_integral_4d_eta(x, 2.0)
}

pub fn first_integral_4d_gradient(x: &[f64; 4], eta3: f64) -> [f64; 4] {
    [x[0] - x[0] * x[0], x[3] - eta3 * x[1], -x[2], x[1]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::linalg::inverse;

    #[test]
    fn four_dimensional_case() {
        let nu3 = 0.37;
        let sys = build_canonical(4, &[-0.5, 0.0, nu3, 0.0]).unwrap();
        assert_eq!(sys.s, Matrix::from_rows(&[[-nu3, 1.0], [1.0, 0.0]]));
        assert_eq!(sys.b, [1.0, nu3]);
        assert_eq!(sys.s_inv, Matrix::from_rows(&[[0.0, 1.0], [1.0, nu3]]));
        let q = [0.3, -0.8];
        // −V = ν₁q₂ + ½ν₃²q₂² + ⅓q₂³ + ½q₁² + ν₃q₁q₂
        let expected = -(-0.5 * q[1] + 0.5 * nu3 * nu3 * q[1] * q[1] + q[1].powi(3) / 3.0 + 0.5 * q[0] * q[0]
            + nu3 * q[0] * q[1]);
        assert!((sys.potential(&q).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn zero_parameters_give_exchange_matrix() {
        let sys = build_canonical(6, &[0.0; 6]).unwrap();
        assert_eq!(sys.b, [1.0, 0.0, 0.0]);
        assert_eq!(sys.s, sys.s_inv);
        assert_eq!(sys.s.matmul(&sys.s).unwrap(), Matrix::identity(3));
    }

    #[test]
    fn recursion_inverse_matches_dense_inverse() {
        let nu = [-0.3, 0.0, 0.41, 0.0, -1.3, 0.0, 0.77, 0.0, 0.25, 0.0];
        let sys = build_canonical(10, &nu).unwrap();
        assert!(sys.s_inv.max_abs_diff(&inverse(&sys.s).unwrap()) < 1e-12);
    }

    #[test]
    fn invalid_inputs() {
        assert!(build_canonical(5, &[0.0; 5]).is_err());
        assert!(build_canonical(4, &[-1.0, 0.1, 0.0, 0.0]).is_err());
        assert!(build_canonical(4, &[-1.0, 0.0, 0.0, 0.1]).is_err());
        assert!(build_canonical(4, &[-1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn first_integral_vanishes_at_origin() {
        assert_eq!(first_integral_4d(&[0.0; 4]), 0.0);
    }
}
