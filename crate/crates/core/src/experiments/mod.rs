//! The trial contract and the built-in experiments.

mod sensitivity;
mod surrogate;

use thiserror::Error;

pub use sensitivity::{
    seed_sensitivity_report, Regime, RegimeResult, SeedFailure, SensitivityReport, DEFAULT_SEED_COUNT,
};
pub use surrogate::{Bandit, NoisyQuadratic};

use crate::rl::{Algorithm, PendulumExperiment};
use crate::sweep::{HyperParamPoint, HyperParamSpace};

/// Why a trial produced no metric.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrialError {
    #[error("diverged")]
    Diverged,
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("{0}")]
    Failed(String),
}

/// Something a sweep can evaluate.
///
/// `run_trial` must be a pure function of `(point, seed)`: no shared mutable
/// state, identical output on every call. Trials run concurrently.
pub trait Experiment: Send + Sync {
    fn name(&self) -> &str;

    fn space(&self) -> HyperParamSpace;

    fn higher_is_better(&self) -> bool {
        true
    }

    fn run_trial(&self, point: &HyperParamPoint, seed: u64) -> Result<f64, TrialError>;
}

/// Names accepted by [`by_name`].
pub const REGISTERED: [&str; 5] = [
    NoisyQuadratic::NAME,
    Bandit::NAME,
    "pendulum-reinforce",
    "pendulum-ac",
    "pendulum-ppo",
];

pub fn by_name(name: &str) -> Option<Box<dyn Experiment>> {
    match name {
        NoisyQuadratic::NAME => Some(Box::new(NoisyQuadratic)),
        Bandit::NAME => Some(Box::new(Bandit)),
        _ => Algorithm::ALL
            .into_iter()
            .find(|a| a.experiment_name() == name)
            .map(|a| Box::new(PendulumExperiment::new(a)) as Box<dyn Experiment>),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_round_trips_names() {
        for name in REGISTERED {
            assert_eq!(by_name(name).unwrap().name(), name);
        }
        assert!(by_name("cartpole").is_none());
    }
}
