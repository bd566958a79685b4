//! Cheap experiments with known behavior, used to exercise the harness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use super::{Experiment, TrialError};
use crate::sweep::{Dim, HyperParamPoint, HyperParamSpace};

fn checked(space: &HyperParamSpace, point: &HyperParamPoint) -> Result<(), TrialError> {
    space
        .validate(point)
        .map_err(|e| TrialError::InvalidPoint(e.to_string()))
}

/// `1 − x² + noise_scale · z` with `z ~ N(0, 1)` drawn from the seed.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoisyQuadratic;

impl NoisyQuadratic {
    pub const NAME: &'static str = "noisy-quadratic";

    pub fn metric(x: f64, noise_scale: f64, seed: u64) -> f64 {
        let z: f64 = StandardNormal.sample(&mut ChaCha8Rng::seed_from_u64(seed));
        1.0 - x * x + noise_scale * z
    }
}

impl Experiment for NoisyQuadratic {
    fn name(&self) -> &str {
        Self::NAME
    }

    fn space(&self) -> HyperParamSpace {
        HyperParamSpace::new(vec![Dim::linear("x", -2.0, 2.0), Dim::linear("noise_scale", 0.0, 1.0)])
            .expect("static space is valid")
    }

    fn run_trial(&self, point: &HyperParamPoint, seed: u64) -> Result<f64, TrialError> {
        checked(&self.space(), point)?;
        Ok(Self::metric(point["x"], point["noise_scale"], seed))
    }
}

/// Two-armed Gaussian bandit learned by REINFORCE on softmax logits.
///
/// Arm 1 pays `N(1, 1)`, arm 0 pays `N(0, 1)`. Each episode is one pull.
/// The metric is the final probability of arm 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct Bandit;

impl Bandit {
    pub const NAME: &'static str = "bandit";
    pub const LOGIT_LIMIT: f64 = 20.0;

    pub fn train(step_size: f64, episodes: u64, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let arms = [Normal::new(0.0, 1.0).unwrap(), Normal::new(1.0, 1.0).unwrap()];
        let mut logits = [0.0f64; 2];
        for _ in 0..episodes {
            let p1 = prob_arm1(&logits);
            let arm = usize::from(rng.random::<f64>() < p1);
            let reward = arms[arm].sample(&mut rng);
            // d log π(a) / d logit_k = 1[a = k] − π(k)
            let probs = [1.0 - p1, p1];
            for (k, l) in logits.iter_mut().enumerate() {
                let g = f64::from(u8::from(k == arm)) - probs[k];
                *l = (*l + step_size * reward * g).clamp(-Self::LOGIT_LIMIT, Self::LOGIT_LIMIT);
            }
        }
        prob_arm1(&logits)
    }
}

fn prob_arm1(logits: &[f64; 2]) -> f64 {
    1.0 / (1.0 + (logits[0] - logits[1]).exp())
}

impl Experiment for Bandit {
    fn name(&self) -> &str {
        Self::NAME
    }

    fn space(&self) -> HyperParamSpace {
        HyperParamSpace::new(vec![
            Dim::log("step_size", 1e-5, 1.0),
            Dim::integer("episodes", 1.0, 5000.0),
        ])
        .expect("static space is valid")
    }

    fn run_trial(&self, point: &HyperParamPoint, seed: u64) -> Result<f64, TrialError> {
        checked(&self.space(), point)?;
        Ok(Self::train(point["step_size"], point["episodes"] as u64, seed))
    }
}
