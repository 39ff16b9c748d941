//! Even homoclinic solutions of u'''' + P u'' + u − u² = 0.
//!
//! The state (u, u′, u″, u‴) is the translated 4D family at λ₁ = λ₃ = λ₄ = 0
//! and η₃ = −P. The orbit is computed on [0, T] from the even initial
//! condition (u₀, 0, u″₀, 0) by multiple shooting: the interval is split into
//! segments, interior node states become extra unknowns, and the terminal
//! state is required to lie in the stable subspace of the origin.
//!
//! The stable subspace is described through the stable factor
//! r² + a r + 1 of r⁴ + P r² + 1, a = √(2 − P): a state lies in it iff
//! u″ + a u′ + u = 0 and u‴ + a u″ + u′ = 0. This is well defined at the
//! double root P = −2.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::hamiltonian::first_integral_4d_eta;
use crate::numerics::linalg::Matrix;
use crate::numerics::newton::newton_solve_with;
use crate::numerics::norm_inf;
use crate::numerics::ode::{integrate, ToleranceConfig, Trajectory};

/// Validated parameter window.
pub const P_WINDOW: (f64, f64) = (-3.0, -1.5);

const SEGMENT_LENGTH: f64 = 2.5;
const SEED_P: f64 = -3.0;
const SEED_AMPLITUDE: f64 = 1.5;
const MAX_CONTINUATION_STEP: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct HomoclinicProfile {
    pub p: f64,
    pub u0: f64,
    pub u2_0: f64,
    pub t_end: f64,
    /// (u, u′, u″, u‴) on [0, T].
    pub trajectory: Trajectory,
    /// Max-norm of the stable-subspace conditions at T.
    pub boundary_residual: f64,
    /// Largest state mismatch between consecutive shooting segments.
    pub continuity_residual: f64,
    pub iterations: usize,
    unknowns: Vec<f64>,
}

/// Stable factor coefficient a = √(2 − P).
pub fn stable_factor(p: f64) -> f64 {
    (2.0 - p).sqrt()
}

/// Slowest decay rate of the stable subspace.
pub fn slowest_decay(p: f64) -> f64 {
    let a = stable_factor(p);
    if a >= 2.0 {
        (a - (a * a - 4.0).sqrt()) / 2.0
    } else {
        a / 2.0
    }
}

fn boundary_rows(a: f64) -> [[f64; 4]; 2] {
    [[1.0, a, 1.0, 0.0], [0.0, 1.0, a, 1.0]]
}

fn rhs(p: f64) -> impl Fn(f64, &[f64], &mut [f64]) {
    move |_, x, dx| {
        dx[0] = x[1];
        dx[1] = x[2];
        dx[2] = x[3];
        dx[3] = -p * x[2] - x[0] + x[0] * x[0];
    }
}

/// State plus the 4×4 variational matrix, row-major.
fn variational_rhs(p: f64) -> impl Fn(f64, &[f64], &mut [f64]) {
    move |_, x, dx| {
        dx[0] = x[1];
        dx[1] = x[2];
        dx[2] = x[3];
        dx[3] = -p * x[2] - x[0] + x[0] * x[0];
        let c0 = -1.0 + 2.0 * x[0];
        for j in 0..4 {
            let m = |i: usize| x[4 + 4 * i + j];
            dx[4 + j] = m(1);
            dx[8 + j] = m(2);
            dx[12 + j] = m(3);
            dx[16 + j] = c0 * m(0) - p * m(2);
        }
    }
}

struct Shooting {
    p: f64,
    nodes: Vec<f64>,
    tol: ToleranceConfig,
    a: f64,
}

impl Shooting {
    fn new(p: f64, t_end: f64, tol: ToleranceConfig) -> Self {
        let k = ((t_end / SEGMENT_LENGTH).ceil() as usize).max(1);
        let nodes = (0..=k).map(|i| t_end * i as f64 / k as f64).collect();
        Self { p, nodes, tol, a: stable_factor(p) }
    }

    fn segments(&self) -> usize {
        self.nodes.len() - 1
    }

    fn size(&self) -> usize {
        2 + 4 * (self.segments() - 1)
    }

    fn start_state(&self, z: &[f64], k: usize) -> [f64; 4] {
        if k == 0 {
            [z[0], 0.0, z[1], 0.0]
        } else {
            let o = 2 + 4 * (k - 1);
            [z[o], z[o + 1], z[o + 2], z[o + 3]]
        }
    }

    fn flow(&self, x: &[f64; 4], k: usize) -> Result<Trajectory> {
        integrate(rhs(self.p), x, (self.nodes[k], self.nodes[k + 1]), &self.tol)
    }

    fn residual(&self, z: &[f64]) -> Result<Vec<f64>> {
        let ks = self.segments();
        let mut r = Vec::with_capacity(self.size());
        for k in 0..ks {
            let end = self.flow(&self.start_state(z, k), k)?;
            let e = end.last();
            if k + 1 < ks {
                let next = self.start_state(z, k + 1);
                r.extend((0..4).map(|i| e[i] - next[i]));
            } else {
                for row in boundary_rows(self.a) {
                    r.push((0..4).map(|i| row[i] * e[i]).sum());
                }
            }
        }
        Ok(r)
    }

    fn jacobian(&self, z: &[f64]) -> Result<Matrix> {
        let ks = self.segments();
        let n = self.size();
        let mut jac = Matrix::zeros(n, n);
        for k in 0..ks {
            let x = self.start_state(z, k);
            let mut y0 = vec![0.0; 20];
            y0[..4].copy_from_slice(&x);
            for i in 0..4 {
                y0[4 + 5 * i] = 1.0;
            }
            let tr = integrate(variational_rhs(self.p), &y0, (self.nodes[k], self.nodes[k + 1]), &self.tol)?;
            let yl = tr.last();
            let mono = |i: usize, j: usize| yl[4 + 4 * i + j];
            // Columns of the segment start: (u₀, u″₀) for k = 0.
            let cols: Vec<(usize, usize)> =
                if k == 0 { vec![(0, 0), (2, 1)] } else { (0..4).map(|j| (j, 2 + 4 * (k - 1) + j)).collect() };
            let row0 = 4 * k;
            if k + 1 < ks {
                for i in 0..4 {
                    for &(j, c) in &cols {
                        jac[(row0 + i, c)] = mono(i, j);
                    }
                    jac[(row0 + i, 2 + 4 * k + i)] = -1.0;
                }
            } else {
                for (ri, row) in boundary_rows(self.a).iter().enumerate() {
                    for &(j, c) in &cols {
                        jac[(row0 + ri, c)] = (0..4).map(|i| row[i] * mono(i, j)).sum();
                    }
                }
            }
        }
        Ok(jac)
    }

    fn seed_from_guess(&self, guess: impl Fn(f64) -> [f64; 4]) -> Vec<f64> {
        let g0 = guess(0.0);
        let mut z = vec![g0[0], g0[2]];
        for k in 1..self.segments() {
            z.extend_from_slice(&guess(self.nodes[k]));
        }
        z
    }

    fn solve(&self, z0: &[f64]) -> Result<HomoclinicProfile> {
        let out = newton_solve_with(|z| self.residual(z), |z| self.jacobian(z), z0, &self.tol)?;
        let z = out.root;
        let ks = self.segments();
        let mut traj: Option<Trajectory> = None;
        let mut continuity: f64 = 0.0;
        let mut boundary = 0.0;
        for k in 0..ks {
            let seg = self.flow(&self.start_state(&z, k), k)?;
            let e = seg.last().to_vec();
            if k + 1 < ks {
                let next = self.start_state(&z, k + 1);
                continuity = continuity.max((0..4).map(|i| (e[i] - next[i]).abs()).fold(0.0, f64::max));
            } else {
                boundary = boundary_rows(self.a)
                    .iter()
                    .map(|row| (0..4).map(|i| row[i] * e[i]).sum::<f64>().abs())
                    .fold(0.0, f64::max);
            }
            traj = Some(match traj {
                None => seg,
                Some(t) => t.concat(seg)?,
            });
        }
        Ok(HomoclinicProfile {
            p: self.p,
            u0: z[0],
            u2_0: z[1],
            t_end: *self.nodes.last().expect("nodes"),
            trajectory: traj.expect("at least one segment"),
            boundary_residual: boundary,
            continuity_residual: continuity,
            iterations: out.iterations,
            unknowns: z,
        })
    }
}

/// u ≈ A sech²(bt) with b half the slowest decay rate of the linearization.
fn sech2_guess(p: f64) -> impl Fn(f64) -> [f64; 4] {
    let b = slowest_decay(p) / 2.0;
    let a = SEED_AMPLITUDE;
    move |t| {
        let e = (-2.0 * b * t.abs()).exp();
        let s = (1.0 - e) / (1.0 + e);
        let g = 4.0 * e / ((1.0 + e) * (1.0 + e));
        [
            a * g,
            -2.0 * a * b * g * s,
            2.0 * a * b * b * g * (2.0 - 3.0 * g),
            8.0 * a * b * b * b * g * s * (3.0 * g - 1.0),
        ]
    }
}

fn check_inputs(p: f64, t_end: f64, tol: &ToleranceConfig) -> Result<()> {
    tol.validate()?;
    if !(P_WINDOW.0..=P_WINDOW.1).contains(&p) {
        return Err(Error::Precondition(format!("P = {p} outside the validated window [-3, -1.5]")));
    }
    let r = slowest_decay(p);
    if r < 1e-3 {
        return Err(Error::Precondition(format!("origin not hyperbolic enough at P = {p}")));
    }
    if !(r * (t_end - 5.0) >= 8.0) {
        return Err(Error::Precondition(format!("truncation time {t_end} too short for decay rate {r}")));
    }
    Ok(())
}

impl HomoclinicProfile {
    pub fn eta3(&self) -> f64 {
        -self.p
    }

    /// State at any t ∈ [−T, T]; negative times use the reversibility
    /// (u, u′, u″, u‴)(−t) = (u, −u′, u″, −u‴)(t).
    pub fn state(&self, t: f64) -> Result<[f64; 4]> {
        let x = self.trajectory.eval(t.abs())?;
        let s = if t < 0.0 { -1.0 } else { 1.0 };
        Ok([x[0], s * x[1], x[2], s * x[3]])
    }

    /// Node samples reflected onto [−T, T].
    pub fn full_orbit(&self) -> Trajectory {
        let tr = &self.trajectory;
        let n = tr.len();
        let mut times = Vec::with_capacity(2 * n - 1);
        let mut states = Vec::with_capacity(2 * n - 1);
        for i in (1..n).rev() {
            let x = tr.state(i);
            times.push(-tr.times()[i]);
            states.push(vec![x[0], -x[1], x[2], -x[3]]);
        }
        for i in 0..n {
            times.push(tr.times()[i]);
            states.push(tr.state(i).to_vec());
        }
        Trajectory::from_samples(times, states).expect("reflected nodes are ordered")
    }

    /// Largest |H| along the nodes, with H the first integral at η₃ = −P.
    pub fn max_first_integral(&self) -> f64 {
        let eta3 = self.eta3();
        self.trajectory
            .states()
            .map(|x| first_integral_4d_eta(&[x[0], x[1], x[2], x[3]], eta3).abs())
            .fold(0.0, f64::max)
    }

    /// Checks u > 0, u′ < 0 and u‴ − u′ > 0 at every node in (0, T).
    pub fn sign_properties(&self) -> SignProperties {
        let tr = &self.trajectory;
        let interior = 1..tr.len() - 1;
        let mut out = SignProperties { u_positive: true, du_negative: true, p4_minus_p2_positive: true, nodes: 0 };
        for i in interior {
            let x = tr.state(i);
            out.nodes += 1;
            out.u_positive &= x[0] > 0.0;
            out.du_negative &= x[1] < 0.0;
            out.p4_minus_p2_positive &= x[3] - x[1] > 0.0;
        }
        out
    }

    /// Re-runs the boundary and continuity checks with a tighter integrator.
    pub fn residual_with(&self, tol: &ToleranceConfig) -> Result<f64> {
        let sh = Shooting::new(self.p, self.t_end, *tol);
        Ok(norm_inf(&sh.residual(&self.unknowns)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignProperties {
    pub u_positive: bool,
    pub du_negative: bool,
    pub p4_minus_p2_positive: bool,
    pub nodes: usize,
}

impl SignProperties {
    pub fn all(&self) -> bool {
        self.u_positive && self.du_negative && self.p4_minus_p2_positive
    }
}

fn solve_seeded(p: f64, t_end: f64, tol: &ToleranceConfig, seed: Option<&HomoclinicProfile>) -> Result<HomoclinicProfile> {
    let sh = Shooting::new(p, t_end, *tol);
    let z0 = match seed {
        Some(prev) if prev.t_end == t_end && prev.unknowns.len() == sh.size() => prev.unknowns.clone(),
        Some(prev) => sh.seed_from_guess(|t| {
            let x = prev.trajectory.eval(t).unwrap_or([0.0; 4].to_vec());
            [x[0], x[1], x[2], x[3]]
        }),
        None => sh.seed_from_guess(sech2_guess(p)),
    };
    sh.solve(&z0)
}

/// Solves at P = −3 from the sech² guess and continues to `p` in steps of
/// at most 0.1.
pub fn shoot_homoclinic_4d(p: f64, t_end: f64, tol: &ToleranceConfig) -> Result<HomoclinicProfile> {
    check_inputs(p, t_end, tol)?;
    let mut prof = solve_seeded(SEED_P, t_end, tol, None)?;
    let steps = ((p - SEED_P).abs() / MAX_CONTINUATION_STEP).ceil() as usize;
    for i in 1..=steps {
        let pi = if i == steps { p } else { SEED_P + (p - SEED_P) * i as f64 / steps as f64 };
        prof = solve_seeded(pi, t_end, tol, Some(&prof))?;
    }
    Ok(prof)
}

/// Result of natural-parameter continuation.
#[derive(Clone, Debug)]
pub struct Continuation {
    pub profiles: Vec<HomoclinicProfile>,
    /// Set when the branch could not be followed to the end.
    pub diagnostic: Option<String>,
}

/// Natural-parameter continuation from `p_start` to `p_end` in `steps`
/// equal steps, each seeded by the previous profile. A failing step is
/// retried with halved increments before the branch is abandoned.
pub fn continuation_in_p(
    p_start: f64,
    p_end: f64,
    steps: usize,
    t_end: f64,
    tol: &ToleranceConfig,
) -> Result<Continuation> {
    let first = shoot_homoclinic_4d(p_start, t_end, tol)?;
    let mut profiles = vec![first];
    if p_start == p_end || steps == 0 {
        return Ok(Continuation { profiles, diagnostic: None });
    }
    let h = (p_end - p_start) / steps as f64;
    for i in 1..=steps {
        let target = if i == steps { p_end } else { p_start + h * i as f64 };
        let mut current = profiles.last().expect("nonempty").clone();
        let mut frac = 1.0;
        loop {
            let p0 = current.p;
            let pi = if frac == 1.0 { target } else { p0 + (target - p0) * frac };
            match solve_seeded(pi, t_end, tol, Some(&current)) {
                Ok(prof) => {
                    current = prof;
                    if pi == target {
                        break;
                    }
                    frac = (2.0 * frac).min(1.0);
                }
                Err(e) => {
                    frac /= 2.0;
                    if frac < 1.0 / 16.0 {
                        return Ok(Continuation {
                            profiles,
                            diagnostic: Some(format!("continuation stopped near P = {p0}: {e}")),
                        });
                    }
                }
            }
        }
        profiles.push(current);
    }
    Ok(Continuation { profiles, diagnostic: None })
}
