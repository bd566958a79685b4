//! REINFORCE, one-step actor-critic and clipped-surrogate PPO updates.

use rand::seq::SliceRandom;
use rand::Rng;

use super::mlp::{PolicyNet, ValueNet, FEATURES};
use super::pendulum::PendulumState;
use super::RlError;

/// One environment step as seen by the learner.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub state: PendulumState,
    pub features: [f64; FEATURES],
    /// Unclipped action.
    pub action: f64,
    /// `log π(action | state)` under the policy that acted.
    pub log_prob: f64,
    pub reward: f64,
    pub next_state: PendulumState,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub steps: Vec<Step>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn rewards(&self) -> impl Iterator<Item = f64> + '_ {
        self.steps.iter().map(|s| s.reward)
    }
}

/// `G_t = Σ_{k≥t} γ^{k−t} r_k`.
pub fn discounted_returns(rewards: &[f64], gamma: f64) -> Vec<f64> {
    let mut out = vec![0.0; rewards.len()];
    let mut acc = 0.0;
    for (t, r) in rewards.iter().enumerate().rev() {
        acc = r + gamma * acc;
        out[t] = acc;
    }
    out
}

/// Monte-Carlo policy gradient over one complete episode:
/// `θ += α Σ_t γ^t G_t ∇ log π(a_t | s_t)`.
pub fn reinforce_update(policy: &mut PolicyNet, trajectory: &Trajectory, step_size: f64, gamma: f64) {
    if step_size == 0.0 || trajectory.is_empty() {
        return;
    }
    let rewards: Vec<f64> = trajectory.rewards().collect();
    let returns = discounted_returns(&rewards, gamma);
    let mut grad = vec![0.0; policy.param_len()];
    let mut discount = 1.0;
    for (step, g) in trajectory.steps.iter().zip(&returns) {
        let weight = discount * g;
        if weight != 0.0 {
            policy.grad_log_prob_into(&step.features, step.action, weight, &mut grad);
        }
        discount *= gamma;
    }
    policy.apply(step_size, &grad);
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub features: [f64; FEATURES],
    pub action: f64,
    pub reward: f64,
    pub next_features: [f64; FEATURES],
    pub terminal: bool,
}

/// TD error `δ = r + γ·V(s')·[not terminal] − V(s)`.
pub fn td_error(value: &ValueNet, t: &Transition, gamma: f64) -> f64 {
    let bootstrap = if t.terminal {
        0.0
    } else {
        gamma * value.value(&t.next_features)
    };
    t.reward + bootstrap - value.value(&t.features)
}

/// One online actor-critic step; returns the TD error used.
pub fn actor_critic_update(
    policy: &mut PolicyNet,
    value: &mut ValueNet,
    transition: &Transition,
    policy_step: f64,
    value_step: f64,
    gamma: f64,
) -> f64 {
    let delta = td_error(value, transition, gamma);
    if delta == 0.0 {
        return delta;
    }
    let mut gv = vec![0.0; value.param_len()];
    value.grad_into(&transition.features, 1.0, &mut gv);
    let mut gp = vec![0.0; policy.param_len()];
    policy.grad_log_prob_into(&transition.features, transition.action, 1.0, &mut gp);
    value.apply(value_step * delta, &gv);
    policy.apply(policy_step * delta, &gp);
    delta
}

/// A flattened time step for PPO.
#[derive(Debug, Clone, PartialEq)]
pub struct PpoSample {
    pub features: [f64; FEATURES],
    pub action: f64,
    pub old_log_prob: f64,
    pub ret: f64,
}

pub fn ppo_samples(batch: &[Trajectory], gamma: f64) -> Vec<PpoSample> {
    batch
        .iter()
        .flat_map(|traj| {
            let rewards: Vec<f64> = traj.rewards().collect();
            let returns = discounted_returns(&rewards, gamma);
            traj.steps.iter().zip(returns).map(|(s, ret)| PpoSample {
                features: s.features,
                action: s.action,
                old_log_prob: s.log_prob,
                ret,
            })
        })
        .collect()
}

pub const ADVANTAGE_STD_FLOOR: f64 = 1e-8;

/// `Â = G − V(s)`, shifted to zero mean and scaled to unit std (std floored
/// at `10⁻⁸`).
pub fn normalized_advantages(value: &ValueNet, samples: &[PpoSample]) -> Vec<f64> {
    let raw: Vec<f64> = samples.iter().map(|s| s.ret - value.value(&s.features)).collect();
    let n = raw.len() as f64;
    let mean = raw.iter().sum::<f64>() / n;
    let var = raw.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n;
    let std = var.sqrt().max(ADVANTAGE_STD_FLOOR);
    raw.iter().map(|a| (a - mean) / std).collect()
}

fn clipped_term(ratio: f64, adv: f64, clip: f64) -> (f64, bool) {
    let unclipped = ratio * adv;
    let clipped = ratio.clamp(1.0 - clip, 1.0 + clip) * adv;
    if unclipped <= clipped {
        (unclipped, true)
    } else {
        (clipped, false)
    }
}

/// `mean_t min(ρ_t Â_t, clip(ρ_t, 1−ε, 1+ε) Â_t)` with `ρ_t = π/π_old`.
pub fn ppo_surrogate(policy: &PolicyNet, samples: &[PpoSample], advantages: &[f64], clip: f64) -> f64 {
    let total: f64 = samples
        .iter()
        .zip(advantages)
        .map(|(s, &adv)| {
            let ratio = (policy.log_prob(&s.features, s.action) - s.old_log_prob).exp();
            clipped_term(ratio, adv, clip).0
        })
        .sum();
    total / samples.len() as f64
}

/// Gradient of [`ppo_surrogate`] with respect to the policy parameters.
///
/// Terms where the clipped branch is active contribute nothing.
pub fn ppo_surrogate_grad(policy: &PolicyNet, samples: &[PpoSample], advantages: &[f64], clip: f64) -> Vec<f64> {
    let mut grad = vec![0.0; policy.param_len()];
    let inv_n = 1.0 / samples.len() as f64;
    for (s, &adv) in samples.iter().zip(advantages) {
        let ratio = (policy.log_prob(&s.features, s.action) - s.old_log_prob).exp();
        if clipped_term(ratio, adv, clip).1 {
            policy.grad_log_prob_into(&s.features, s.action, adv * ratio * inv_n, &mut grad);
        }
    }
    grad
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpoConfig {
    pub clip: f64,
    pub epochs: usize,
    pub policy_step: f64,
    pub value_step: f64,
    pub gamma: f64,
    /// Samples per gradient step; `None` uses the whole batch.
    pub minibatch: Option<usize>,
}

/// Adam moment estimates for one parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    pub fn new(len: usize) -> Self {
        Self {
            m: vec![0.0; len],
            v: vec![0.0; len],
            t: 0,
        }
    }

    /// Bias-corrected Adam direction for `grad`, scaled so that adding
    /// `step · direction` moves uphill.
    pub fn direction(&mut self, grad: &[f64]) -> Vec<f64> {
        self.t += 1;
        let c1 = 1.0 - Self::BETA1.powi(self.t);
        let c2 = 1.0 - Self::BETA2.powi(self.t);
        grad.iter()
            .zip(self.m.iter_mut().zip(self.v.iter_mut()))
            .map(|(&g, (m, v))| {
                *m = Self::BETA1 * *m + (1.0 - Self::BETA1) * g;
                *v = Self::BETA2 * *v + (1.0 - Self::BETA2) * g * g;
                (*m / c1) / ((*v / c2).sqrt() + Self::EPS)
            })
            .collect()
    }
}

/// Optimizer state carried across PPO updates.
#[derive(Debug, Clone, PartialEq)]
pub struct PpoOptimizer {
    policy: Adam,
    value: Adam,
}

impl PpoOptimizer {
    pub fn new(policy: &PolicyNet, value: &ValueNet) -> Self {
        Self {
            policy: Adam::new(policy.param_len()),
            value: Adam::new(value.param_len()),
        }
    }
}

/// Gradient of `−½ mean (V(s) − G)²` over `samples`.
pub fn value_regression_grad(value: &ValueNet, samples: &[PpoSample]) -> Vec<f64> {
    let mut gv = vec![0.0; value.param_len()];
    let inv_n = 1.0 / samples.len() as f64;
    for s in samples {
        let v = value.value(&s.features);
        value.grad_into(&s.features, (s.ret - v) * inv_n, &mut gv);
    }
    gv
}

/// `epochs` passes of Adam ascent on the clipped surrogate, each step paired
/// with an Adam descent step of the value net on `½ mean (V(s) − G)²`.
///
/// Advantages are computed once, before the first pass. Each pass visits the
/// samples in a fresh random order, `cfg.minibatch` at a time.
pub fn ppo_update<R: Rng + ?Sized>(
    policy: &mut PolicyNet,
    value: &mut ValueNet,
    optimizer: &mut PpoOptimizer,
    batch: &[Trajectory],
    cfg: &PpoConfig,
    rng: &mut R,
) -> Result<(), RlError> {
    if !(cfg.clip > 0.0 && cfg.clip < 1.0) {
        return Err(RlError::Invalid(format!("clip must be in (0, 1), got {}", cfg.clip)));
    }
    let samples = ppo_samples(batch, cfg.gamma);
    if samples.is_empty() {
        return Err(RlError::Invalid("PPO batch is empty".into()));
    }
    if cfg.epochs == 0 {
        return Ok(());
    }
    let advantages = normalized_advantages(value, &samples);
    let chunk = cfg.minibatch.unwrap_or(samples.len()).clamp(1, samples.len());
    let mut order: Vec<usize> = (0..samples.len()).collect();
    for _ in 0..cfg.epochs {
        order.shuffle(rng);
        for idx in order.chunks(chunk) {
            let mb: Vec<PpoSample> = idx.iter().map(|&i| samples[i].clone()).collect();
            let adv: Vec<f64> = idx.iter().map(|&i| advantages[i]).collect();
            let gp = ppo_surrogate_grad(policy, &mb, &adv, cfg.clip);
            let gv = value_regression_grad(value, &mb);
            policy.apply(cfg.policy_step, &optimizer.policy.direction(&gp));
            value.apply(cfg.value_step, &optimizer.value.direction(&gv));
            if !(policy.is_finite() && value.is_finite()) {
                return Err(RlError::Diverged);
            }
        }
    }
    Ok(())
}
