//! Ornstein–Uhlenbeck exploration noise.

use rand::Rng;

use crate::fmath::{ln, sqrt};

/// Standard normal draw via the Marsaglia polar method. Kept local so the
/// whole sampling path is deterministic given the RNG stream and identical
/// across platforms.
pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u = 2.0 * rng.gen::<f64>() - 1.0;
        let v = 2.0 * rng.gen::<f64>() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * sqrt(-2.0 * ln(s) / s);
        }
    }
}

/// Mean-reverting noise process over the two action components, stepped
/// once per environment step: `x ← x + θ(μ − x) + σ·N(0,1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OuNoise {
    pub theta: f64,
    pub sigma: f64,
    pub mu: f64,
    state: [f64; 2],
}

impl OuNoise {
    pub fn new(theta: f64, sigma: f64, mu: f64) -> Self {
        Self {
            theta,
            sigma,
            mu,
            state: [mu; 2],
        }
    }

    /// Back to the process mean; called at each episode start.
    pub fn reset(&mut self) {
        self.state = [self.mu; 2];
    }

    pub fn sample<R: Rng>(&mut self, rng: &mut R) -> [f64; 2] {
        for x in &mut self.state {
            *x += self.theta * (self.mu - *x) + self.sigma * standard_normal(rng);
        }
        self.state
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_decay_without_volatility() {
        let mut n = OuNoise::new(0.15, 0.0, 0.0);
        n.state = [1.0, -2.0];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = n.sample(&mut rng);
        assert!((s[0] - 0.85).abs() < 1e-15);
        assert!((s[1] + 1.7).abs() < 1e-15);
    }

    #[test]
    fn mean_is_a_fixed_point() {
        let mut n = OuNoise::new(0.15, 0.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..10 {
            assert_eq!(n.sample(&mut rng), [0.0, 0.0]);
        }
    }

    #[test]
    fn long_run_spread_matches_stationary_std() {
        // Var of the discrete recursion is σ²/(1 − (1−θ)²).
        let mut n = OuNoise::new(0.15, 0.2, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut sum_sq = 0.0;
        let steps = 100_000;
        for _ in 0..steps {
            let s = n.sample(&mut rng);
            sum_sq += s[0] * s[0] + s[1] * s[1];
        }
        let sd = (sum_sq / (2.0 * steps as f64)).sqrt();
        let expected = 0.2 / (1.0f64 - 0.85 * 0.85).sqrt();
        assert!((expected - 0.37966).abs() < 1e-4);
        assert!(
            (sd - expected).abs() / expected < 0.05,
            "sd {sd}, expected {expected}"
        );
    }

    #[test]
    fn normal_draws_have_unit_spread() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 50_000;
        let mut mean = 0.0;
        let mut sq = 0.0;
        for _ in 0..n {
            let x = standard_normal(&mut rng);
            mean += x;
            sq += x * x;
        }
        mean /= n as f64;
        let var = sq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.02);
        assert!((var - 1.0).abs() < 0.03);
    }
}
