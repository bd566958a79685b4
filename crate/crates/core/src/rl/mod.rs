//! Pendulum swing-up and three policy-gradient learners over
//! hand-differentiated networks.

mod algos;
mod mlp;
mod pendulum;
mod train;

pub use algos::{
    actor_critic_update, discounted_returns, normalized_advantages, ppo_samples, ppo_surrogate, ppo_surrogate_grad,
    ppo_update, reinforce_update, td_error, value_regression_grad, Adam, PpoConfig, PpoOptimizer, PpoSample, Step,
    Trajectory, Transition, ADVANTAGE_STD_FLOOR,
};
pub use mlp::{Mlp, MlpCache, PolicyNet, ValueNet, FEATURES, LOG_STD_MAX, LOG_STD_MIN};
pub use pendulum::{pendulum_reset, pendulum_step, wrap_angle, NonFiniteState, PendulumParams, PendulumState};
pub use train::{declared_space, train_agent, AgentConfig, Algorithm, MetricMode, PendulumExperiment, TrainOptions};

use thiserror::Error;

use crate::experiments::TrialError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RlError {
    #[error("diverged")]
    Diverged,
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

impl From<RlError> for TrialError {
    fn from(e: RlError) -> Self {
        match e {
            RlError::Diverged => TrialError::Diverged,
            RlError::Invalid(m) => TrialError::InvalidPoint(m),
        }
    }
}
