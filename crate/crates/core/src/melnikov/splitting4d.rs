//! Splitting gradient of the 4D homoclinic orbit at λ = 0.
//!
//! With ψ = ∇H = (p₁ − p₁², p₄ − η₃p₂, −p₃, p₂) the perturbation directions
//! λ₁x₂, λ₂x₃, λ₃x₄, λ₄κx₁x₂ give ξ = (∫p₂², ∫p₂p₃, ∫p₂p₄, κ∫p₁p₂²).
//!
//! Tail bound: past T the orbit follows the stable linear flow
//! u″ + au′ + u = 0, so |pᵢ(T + s)| ≤ K m (1 + s)e^{−rs} with
//! m = ‖(u, u′)(T)‖∞ and K fitted as the sampled supremum of
//! ‖Ce^{Ms}‖∞ / ((1 + s)e^{−rs}).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::linalg::{singular_values, Matrix};
use crate::numerics::quad::{simpson_midpoints, QuadEstimate};
use crate::orbits::homoclinic::{slowest_decay, stable_factor, HomoclinicProfile};

/// Smallest accepted ratio of extreme singular values.
pub const RANK_THRESHOLD: f64 = 1e-3;
const ENVELOPE_WINDOW: f64 = 40.0;
const ENVELOPE_SAMPLES: usize = 4000;

#[derive(Clone, Debug, PartialEq)]
pub struct TailEnvelope {
    pub k: f64,
    pub rate: f64,
    /// ‖(u, u′)(T)‖∞.
    pub m: f64,
    /// Bounds on ∫_{|t|>T} |pᵢpⱼ| and ∫_{|t|>T} |pᵢpⱼpₖ|.
    pub quadratic: f64,
    pub cubic: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignVerdicts4D {
    pub xi1_positive: bool,
    pub xi3_negative: bool,
    pub xi4_sign_of_kappa: bool,
    pub xi1_minus_xi3_positive: bool,
}

impl SignVerdicts4D {
    pub fn all(&self) -> bool {
        self.xi1_positive && self.xi3_negative && self.xi4_sign_of_kappa && self.xi1_minus_xi3_positive
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankCheck {
    pub name: String,
    pub rank: usize,
    pub expected: usize,
    /// Smallest over largest singular value.
    pub ratio: f64,
}

impl RankCheck {
    pub fn ok(&self) -> bool {
        self.rank == self.expected
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplittingReport4D {
    pub p: f64,
    pub kappa: f64,
    /// (ξ_{λ₁}, ξ_{λ₂}, ξ_{λ₃}, ξ_{λ₄}); ξ_{λ₂} is exactly 0.
    pub xi: [f64; 4],
    pub budgets: [f64; 4],
    /// Symmetric quadrature of p₂p₃.
    pub parity_residual: f64,
    /// −∫p₃².
    pub xi3_by_parts: f64,
    pub by_parts_gap: f64,
    pub xi1_minus_xi3: f64,
    pub tail: TailEnvelope,
    pub signs: SignVerdicts4D,
    pub hom_tangent_normal: [f64; 4],
    pub region_ranks: Vec<RankCheck>,
}

fn exp_stable(a: f64, s: f64) -> [[f64; 2]; 2] {
    let tau = -a / 2.0;
    let d2 = a * a / 4.0 - 1.0;
    let (c, sn) = if d2.abs() < 1e-14 {
        (1.0, s)
    } else if d2 > 0.0 {
        let d = d2.sqrt();
        ((d * s).cosh(), (d * s).sinh() / d)
    } else {
        let w = (-d2).sqrt();
        ((w * s).cos(), (w * s).sin() / w)
    };
    let e = (tau * s).exp();
    [[e * (c - tau * sn), e * sn], [-e * sn, e * (c + (-a - tau) * sn)]]
}

/// Linearized tail envelope past T for the profile at parameter P.
pub fn tail_envelope_4d(p: f64, end_state: &[f64]) -> TailEnvelope {
    let a = stable_factor(p);
    let r = slowest_decay(p);
    let c_rows = [[1.0, 0.0], [0.0, 1.0], [-1.0, -a], [a, a * a - 1.0]];
    let h = ENVELOPE_WINDOW / ENVELOPE_SAMPLES as f64;
    let mut k: f64 = 0.0;
    for i in 0..=ENVELOPE_SAMPLES {
        let s = h * i as f64;
        let e = exp_stable(a, s);
        let norm = c_rows
            .iter()
            .map(|row| (row[0] * e[0][0] + row[1] * e[1][0]).abs() + (row[0] * e[0][1] + row[1] * e[1][1]).abs())
            .fold(0.0, f64::max);
        k = k.max(norm / ((1.0 + s) * (-r * s).exp()));
    }
    let m = end_state[0].abs().max(end_state[1].abs());
    let c2 = 2.0 * r;
    let c3 = 3.0 * r;
    let quadratic = 2.0 * (k * m).powi(2) * (1.0 / c2 + 2.0 / c2.powi(2) + 2.0 / c2.powi(3));
    let cubic = 2.0 * (k * m).powi(3) * (1.0 / c3 + 3.0 / c3.powi(2) + 6.0 / c3.powi(3) + 6.0 / c3.powi(4));
    TailEnvelope { k, rate: r, m, quadratic, cubic }
}

/// Simpson over the profile nodes on [0, T] with interpolated midpoints,
/// doubled for the even integrand.
fn even_integral(profile: &HomoclinicProfile, f: impl Fn(&[f64]) -> f64) -> Result<QuadEstimate> {
    let tr = &profile.trajectory;
    let times = tr.times();
    let values: Vec<f64> = tr.states().map(&f).collect();
    let mids = times
        .windows(2)
        .map(|w| tr.eval(0.5 * (w[0] + w[1])).map(|x| f(&x)))
        .collect::<Result<Vec<f64>>>()?;
    let q = simpson_midpoints(times, &values, &mids)?;
    Ok(QuadEstimate { value: 2.0 * q.value, coarse: 2.0 * q.coarse, error: 2.0 * q.error })
}

fn symmetric_integral(profile: &HomoclinicProfile, f: impl Fn(&[f64]) -> f64) -> Result<f64> {
    let full = profile.full_orbit();
    let times = full.times();
    let values: Vec<f64> = full.states().map(&f).collect();
    let mids = times
        .windows(2)
        .map(|w| profile.state(0.5 * (w[0] + w[1])).map(|x| f(&x)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(simpson_midpoints(times, &values, &mids)?.value)
}

fn rank_check(name: &str, rows: &[[f64; 4]], expected: usize) -> RankCheck {
    let m = Matrix::from_rows(rows);
    let sv = singular_values(&m);
    let top = sv.first().copied().unwrap_or(0.0);
    let bottom = sv.last().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|&&s| s > RANK_THRESHOLD * top).count();
    RankCheck { name: name.into(), rank, expected, ratio: if top > 0.0 { bottom / top } else { 0.0 } }
}

pub fn xi_gradient_4d(profile: &HomoclinicProfile, kappa: f64) -> Result<SplittingReport4D> {
    if (profile.p + 2.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!("splitting gradient needs P = -2, got {}", profile.p)));
    }
    let q1 = even_integral(profile, |x| x[1] * x[1])?;
    let q3 = even_integral(profile, |x| x[1] * x[3])?;
    let q33 = even_integral(profile, |x| x[2] * x[2])?;
    let q4 = even_integral(profile, |x| x[0] * x[1] * x[1])?;
    let parity_residual = symmetric_integral(profile, |x| x[1] * x[2])?;

    let tail = tail_envelope_4d(profile.p, profile.trajectory.last());
    let xi = [q1.value, 0.0, q3.value, kappa * q4.value];
    let budgets = [
        q1.error + tail.quadratic,
        0.0,
        q3.error + tail.quadratic,
        kappa.abs() * (q4.error + tail.cubic),
    ];
    if !(xi[0] > budgets[0]) {
        return Err(Error::Precondition("ξ_{λ₁} below its error budget; truncation too short".into()));
    }
    let xi3_by_parts = -q33.value;
    let xi1_minus_xi3 = xi[0] - xi[2];
    let signs = SignVerdicts4D {
        xi1_positive: xi[0] > budgets[0],
        xi3_negative: xi[2] < -budgets[2],
        xi4_sign_of_kappa: kappa != 0.0 && xi[3] * kappa.signum() > budgets[3],
        xi1_minus_xi3_positive: xi1_minus_xi3 > budgets[0] + budgets[2],
    };
    let normal = xi;
    let d_minus = [1.0, -1.0, 1.0, 0.0];
    let d_plus = [1.0, 1.0, 1.0, 0.0];
    let e4 = [0.0, 0.0, 0.0, 1.0];
    let region_ranks = alloc::vec![
        rank_check("Hom, D-, lambda4=0", &[normal, d_minus, e4], 3),
        rank_check("Hom, D+, lambda4=0", &[normal, d_plus, e4], 3),
        rank_check("Hom, D-, D+, lambda4=0", &[normal, d_minus, d_plus, e4], 4),
    ];
    Ok(SplittingReport4D {
        p: profile.p,
        kappa,
        xi,
        budgets,
        parity_residual,
        xi3_by_parts,
        by_parts_gap: (xi[2] - xi3_by_parts).abs(),
        xi1_minus_xi3,
        tail,
        signs,
        hom_tangent_normal: normal,
        region_ranks,
    })
}
