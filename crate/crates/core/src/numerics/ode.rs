//! Adaptive Dormand–Prince 5(4) integration with continuous output.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{check_dim, Error, Result};
use crate::numerics::linalg::Matrix;

const MAX_STEPS: usize = 2_000_000;

/// Tolerances shared by the integrator and Newton iterations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_step: f64,
    pub max_iters: usize,
}

impl ToleranceConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_step: f64, max_iters: usize) -> Result<Self> {
        let tol = Self { abs_tol, rel_tol, max_step, max_iters };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x > 0.0 && !x.is_nan();
        if !(positive(self.abs_tol) && positive(self.rel_tol) && positive(self.max_step)) {
            return Err(Error::InvalidInput("tolerances and max_step must be strictly positive".to_string()));
        }
        if self.max_iters < 1 {
            return Err(Error::InvalidInput("max_iters must be at least 1".to_string()));
        }
        Ok(())
    }

    /// Same tolerances with a different step cap.
    pub fn with_max_step(mut self, max_step: f64) -> Self {
        self.max_step = max_step;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self.rel_tol = tol;
        self
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-10, max_step: 0.1, max_iters: 50 }
    }
}

#[derive(Clone, Debug, PartialEq)]
struct DenseSegment {
    t0: f64,
    h: f64,
    coeffs: Vec<f64>,
}

/// Ordered samples (tᵢ, xᵢ) with interpolation between nodes.
///
/// Integrator output carries the fourth-order Dormand–Prince interpolant;
/// trajectories assembled from samples interpolate linearly.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    dim: usize,
    times: Vec<f64>,
    states: Vec<f64>,
    dense: Option<Vec<DenseSegment>>,
}

impl Trajectory {
    /// Builds a linearly interpolated trajectory from samples.
    pub fn from_samples(times: Vec<f64>, states: Vec<Vec<f64>>) -> Result<Self> {
        check_dim(times.len(), states.len())?;
        if times.is_empty() {
            return Err(Error::TooFewNodes);
        }
        let dim = states[0].len();
        let mut flat = Vec::with_capacity(dim * states.len());
        for s in &states {
            check_dim(dim, s.len())?;
            flat.extend_from_slice(s);
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("times must be strictly increasing".to_string()));
        }
        Ok(Self { dim, times, states: flat, dense: None })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Interpolation order between nodes.
    pub fn order(&self) -> u32 {
        if self.dense.is_some() {
            4
        } else {
            1
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.states[i * self.dim..(i + 1) * self.dim]
    }

    pub fn states(&self) -> impl Iterator<Item = &[f64]> {
        self.states.chunks(self.dim)
    }

    pub fn component(&self, j: usize) -> Vec<f64> {
        self.states().map(|s| s[j]).collect()
    }

    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn first(&self) -> &[f64] {
        self.state(0)
    }

    pub fn last(&self) -> &[f64] {
        self.state(self.len() - 1)
    }

    fn locate(&self, t: f64) -> Result<usize> {
        let (a, b) = (self.t_start(), self.t_end());
        if !(t >= a && t <= b) {
            return Err(Error::OutOfRange { t });
        }
        if self.len() == 1 {
            return Ok(0);
        }
        let i = self.times.partition_point(|&s| s <= t);
        Ok(i.saturating_sub(1).min(self.len() - 2))
    }

    /// Interpolated state; exact at nodes.
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        let i = self.locate(t)?;
        if t == self.times[i] {
            return Ok(self.state(i).to_vec());
        }
        if self.len() == 1 || t == self.times[i + 1] {
            return Ok(self.state(self.len().min(i + 2) - 1).to_vec());
        }
        let n = self.dim;
        match &self.dense {
            Some(segs) => {
                let seg = &segs[i];
                let th = (t - seg.t0) / seg.h;
                let th1 = 1.0 - th;
                let c = &seg.coeffs;
                Ok((0..n)
                    .map(|k| {
                        c[k] + th * (c[n + k] + th1 * (c[2 * n + k] + th * (c[3 * n + k] + th1 * c[4 * n + k])))
                    })
                    .collect())
            }
            None => {
                let (t0, t1) = (self.times[i], self.times[i + 1]);
                let w = (t - t0) / (t1 - t0);
                let (x0, x1) = (self.state(i), self.state(i + 1));
                Ok(x0.iter().zip(x1).map(|(a, b)| a + w * (b - a)).collect())
            }
        }
    }

    /// Time derivative of the interpolant.
    pub fn derivative(&self, t: f64) -> Result<Vec<f64>> {
        let i = self.locate(t)?;
        if self.len() == 1 {
            return Ok(vec![0.0; self.dim]);
        }
        let n = self.dim;
        match &self.dense {
            Some(segs) => {
                let seg = &segs[i];
                let th = (t - seg.t0) / seg.h;
                let th1 = 1.0 - th;
                let c = &seg.coeffs;
                Ok((0..n)
                    .map(|k| {
                        let g = c[2 * n + k] + th * (c[3 * n + k] + th1 * c[4 * n + k]);
                        let dg = c[3 * n + k] + (1.0 - 2.0 * th) * c[4 * n + k];
                        let q = c[n + k] + th1 * g;
                        let dq = -g + th1 * dg;
                        (q + th * dq) / seg.h
                    })
                    .collect())
            }
            None => {
                let dt = self.times[i + 1] - self.times[i];
                Ok(self.state(i).iter().zip(self.state(i + 1)).map(|(a, b)| (b - a) / dt).collect())
            }
        }
    }

    /// Joins `other` onto the end of `self`. The first node of `other` must
    /// coincide in time with the last node of `self`; the state of `other`
    /// is kept there.
    pub fn concat(mut self, other: Trajectory) -> Result<Trajectory> {
        check_dim(self.dim, other.dim)?;
        if other.t_start() != self.t_end() {
            return Err(Error::InvalidInput("trajectories do not share an endpoint".to_string()));
        }
        let n = self.dim;
        self.times.pop();
        self.states.truncate(self.states.len() - n);
        self.times.extend_from_slice(&other.times);
        self.states.extend_from_slice(&other.states);
        self.dense = match (self.dense, other.dense) {
            (Some(mut a), Some(b)) => {
                a.extend(b);
                Some(a)
            }
            _ => None,
        };
        Ok(self)
    }

    /// Image under the linear map `m`, keeping the dense interpolant.
    pub fn map_linear(&self, m: &Matrix) -> Result<Trajectory> {
        check_dim(self.dim, m.cols())?;
        let (n, k) = (self.dim, m.rows());
        let apply = |block: &[f64]| m.mul_vec(block);
        let mut states = Vec::with_capacity(k * self.len());
        for x in self.states() {
            states.extend(apply(x)?);
        }
        let dense = match &self.dense {
            Some(segs) => {
                let mut out = Vec::with_capacity(segs.len());
                for seg in segs {
                    let mut coeffs = Vec::with_capacity(5 * k);
                    for b in seg.coeffs.chunks(n) {
                        coeffs.extend(apply(b)?);
                    }
                    out.push(DenseSegment { t0: seg.t0, h: seg.h, coeffs });
                }
                Some(out)
            }
            None => None,
        };
        Ok(Trajectory { dim: k, times: self.times.clone(), states, dense })
    }

    /// Applies `f` to every node, returning a linearly interpolated copy.
    pub fn map_nodes(&self, mut f: impl FnMut(f64, &[f64]) -> Vec<f64>) -> Result<Trajectory> {
        let states: Vec<Vec<f64>> = self.times.iter().zip(self.states()).map(|(&t, x)| f(t, x)).collect();
        Trajectory::from_samples(self.times.clone(), states)
    }

    /// Values of `f` at every node.
    pub fn node_values(&self, mut f: impl FnMut(f64, &[f64]) -> f64) -> Vec<f64> {
        self.times.iter().zip(self.states()).map(|(&t, x)| f(t, x)).collect()
    }

    fn reverse_in_place(&mut self) {
        let n = self.dim;
        self.times.reverse();
        let mut rev = Vec::with_capacity(self.states.len());
        for chunk in self.states.chunks(n).rev() {
            rev.extend_from_slice(chunk);
        }
        self.states = rev;
        if let Some(d) = self.dense.as_mut() {
            d.reverse();
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Integrates `x' = rhs(t, x)` over `t_span` (either direction).
pub fn integrate<F>(rhs: F, x0: &[f64], t_span: (f64, f64), tol: &ToleranceConfig) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    run(rhs, None::<fn(f64, &mut [f64])>, x0, t_span, tol)
}

/// As [`integrate`], calling `project(t, x)` on every accepted state. The
/// interpolant is corrected so that it passes through projected nodes.
pub fn integrate_projected<F, P>(
    rhs: F,
    project: P,
    x0: &[f64],
    t_span: (f64, f64),
    tol: &ToleranceConfig,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    P: FnMut(f64, &mut [f64]),
{
    run(rhs, Some(project), x0, t_span, tol)
}

fn wrms(v: &[f64], scale: &[f64]) -> f64 {
    let s: f64 = v.iter().zip(scale).map(|(a, b)| (a / b) * (a / b)).sum();
    (s / v.len() as f64).sqrt()
}

fn run<F, P>(
    mut rhs: F,
    mut project: Option<P>,
    x0: &[f64],
    (t0, t1): (f64, f64),
    tol: &ToleranceConfig,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    P: FnMut(f64, &mut [f64]),
{
    tol.validate()?;
    if !(t0.is_finite() && t1.is_finite()) || t0 == t1 {
        return Err(Error::InvalidInput("degenerate integration span".to_string()));
    }
    let n = x0.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty state".to_string()));
    }
    if x0.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite { t: t0 });
    }
    let dir = if t1 > t0 { 1.0 } else { -1.0 };
    let span = (t1 - t0).abs();

    let mut y = x0.to_vec();
    if let Some(p) = project.as_mut() {
        p(t0, &mut y);
    }
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    let mut err = vec![0.0; n];
    let mut sc = vec![0.0; n];

    let mut t = t0;
    rhs(t, &y, &mut k1);
    if k1.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite { t });
    }

    // Initial step guess.
    for i in 0..n {
        sc[i] = tol.abs_tol + tol.rel_tol * y[i].abs();
    }
    let d0 = wrms(&y, &sc);
    let d1 = wrms(&k1, &sc);
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h0 = h0.min(tol.max_step).min(span);
    for i in 0..n {
        ytmp[i] = y[i] + dir * h0 * k1[i];
    }
    rhs(t + dir * h0, &ytmp, &mut k2);
    for i in 0..n {
        err[i] = (k2[i] - k1[i]) / h0;
    }
    let d2 = wrms(&err, &sc);
    let dmax = d1.max(d2);
    let h1 = if dmax <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / dmax).powf(0.2) };
    let mut h = (100.0 * h0).min(h1).min(tol.max_step).min(span);

    let mut times = vec![t0];
    let mut states = y.clone();
    let mut segs: Vec<DenseSegment> = Vec::new();
    let mut rejected_last = false;
    let mut steps = 0usize;

    while (t1 - t) * dir > 0.0 {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::StepLimit { t });
        }
        let remaining = (t1 - t).abs();
        let mut last = false;
        if h >= remaining || remaining - h <= 1e-12 * span {
            h = remaining;
            last = true;
        }
        if h <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::StepUnderflow { t });
        }
        let hs = dir * h;

        for i in 0..n {
            ytmp[i] = y[i] + hs * A21 * k1[i];
        }
        rhs(t + C2 * hs, &ytmp, &mut k2);
        for i in 0..n {
            ytmp[i] = y[i] + hs * (A31 * k1[i] + A32 * k2[i]);
        }
        rhs(t + C3 * hs, &ytmp, &mut k3);
        for i in 0..n {
            ytmp[i] = y[i] + hs * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        rhs(t + C4 * hs, &ytmp, &mut k4);
        for i in 0..n {
            ytmp[i] = y[i] + hs * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        rhs(t + C5 * hs, &ytmp, &mut k5);
        for i in 0..n {
            ytmp[i] = y[i] + hs * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let tn = if last { t1 } else { t + hs };
        rhs(tn, &ytmp, &mut k6);
        for i in 0..n {
            ynew[i] = y[i] + hs * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        rhs(tn, &ynew, &mut k7);
        for i in 0..n {
            err[i] = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            sc[i] = tol.abs_tol + tol.rel_tol * y[i].abs().max(ynew[i].abs());
        }
        let e = wrms(&err, &sc);
        if !e.is_finite() || ynew.iter().any(|x| !x.is_finite()) {
            if h <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
                return Err(Error::NonFinite { t });
            }
            h *= 0.1;
            rejected_last = true;
            continue;
        }
        if e <= 1.0 {
            let mut coeffs = vec![0.0; 5 * n];
            for i in 0..n {
                let ydiff = ynew[i] - y[i];
                let bspl = hs * k1[i] - ydiff;
                coeffs[i] = y[i];
                coeffs[n + i] = ydiff;
                coeffs[2 * n + i] = bspl;
                coeffs[3 * n + i] = ydiff - hs * k7[i] - bspl;
                coeffs[4 * n + i] =
                    hs * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            match project.as_mut() {
                Some(p) => {
                    ytmp.copy_from_slice(&ynew);
                    p(tn, &mut ynew);
                    for i in 0..n {
                        coeffs[n + i] += ynew[i] - ytmp[i];
                    }
                    rhs(tn, &ynew, &mut k1);
                }
                None => k1.copy_from_slice(&k7),
            }
            segs.push(DenseSegment { t0: t, h: hs, coeffs });
            t = tn;
            y.copy_from_slice(&ynew);
            times.push(t);
            states.extend_from_slice(&y);
            let mut fac = 0.9 * e.max(1e-10).powf(-0.2);
            fac = fac.clamp(0.2, 10.0);
            if rejected_last {
                fac = fac.min(1.0);
            }
            h = (h * fac).min(tol.max_step);
            rejected_last = false;
        } else {
            let fac = (0.9 * e.powf(-0.2)).max(0.2);
            h *= fac;
            rejected_last = true;
        }
    }

    let mut traj = Trajectory { dim: n, times, states, dense: Some(segs) };
    if dir < 0.0 {
        traj.reverse_in_place();
    }
    Ok(traj)
}
