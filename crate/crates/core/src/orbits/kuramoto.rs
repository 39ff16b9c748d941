//! p₁(t) = α(−9 tanh βt + 11 tanh³ βt) with α = 15√(11/19³), β = √(11/19)/2,
//! a heteroclinic solution of the Michelson system at c = c_k = √2·α.
//!
//! Everything is written in terms of s = tanh βt and σ = sech² βt, with σ
//! formed from e^{−2β|t|} so that tails keep full relative accuracy.

use num_traits::Float;

use crate::families::MichelsonParams;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KuramotoOrbit {
    pub alpha: f64,
    pub beta: f64,
    pub c_k: f64,
}

impl Default for KuramotoOrbit {
    fn default() -> Self {
        Self::new()
    }
}

impl KuramotoOrbit {
    pub fn new() -> Self {
        let alpha = 15.0 * (11.0f64 / 6859.0).sqrt();
        let beta = (11.0f64 / 19.0).sqrt() / 2.0;
        Self { alpha, beta, c_k: core::f64::consts::SQRT_2 * alpha }
    }

    pub fn params(&self) -> MichelsonParams {
        MichelsonParams::unperturbed(self.c_k)
    }

    /// (tanh βt, sech² βt).
    pub fn tanh_sech2(&self, t: f64) -> (f64, f64) {
        let e = (-2.0 * self.beta * t.abs()).exp();
        let d = 1.0 + e;
        let s = (1.0 - e) / d;
        (if t < 0.0 { -s } else { s }, 4.0 * e / (d * d))
    }

    pub fn state(&self, t: f64) -> [f64; 3] {
        let (a, b) = (self.alpha, self.beta);
        let (s, g) = self.tanh_sech2(t);
        [
            a * s * (2.0 - 11.0 * g),
            a * b * g * (24.0 - 33.0 * g),
            a * b * b * g * s * (-48.0 + 132.0 * g),
        ]
    }

    /// ṗ(t) from the analytic derivative.
    pub fn velocity(&self, t: f64) -> [f64; 3] {
        let (a, b) = (self.alpha, self.beta);
        let (_, g) = self.tanh_sech2(t);
        let p = self.state(t);
        [p[1], p[2], a * b * b * b * g * (660.0 * g * g - 672.0 * g + 96.0)]
    }

    /// p₁²/2 − c_k².
    pub fn half_p1_sq_minus_c2(&self, t: f64) -> f64 {
        let (_, g) = self.tanh_sech2(t);
        0.5 * self.alpha * self.alpha * g * (-48.0 + 165.0 * g - 121.0 * g * g)
    }

    /// Limit as t → ±∞: (±2α, 0, 0).
    pub fn limit(&self, sign: f64) -> [f64; 3] {
        [2.0 * self.alpha * sign.signum(), 0.0, 0.0]
    }

    /// Exponential rate at which the orbit approaches its limits.
    pub fn decay_rate(&self) -> f64 {
        2.0 * self.beta
    }
}

pub fn kuramoto_p(t: f64) -> [f64; 3] {
    KuramotoOrbit::new().state(t)
}
