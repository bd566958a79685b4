//! Full training runs and their sweepable hyperparameter spaces.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::algos::{
    actor_critic_update, ppo_update, reinforce_update, PpoConfig, PpoOptimizer, Step, Trajectory, Transition,
};
use super::mlp::{PolicyNet, ValueNet};
use super::pendulum::{pendulum_reset, pendulum_step, PendulumParams};
use super::RlError;
use crate::experiments::{Experiment, TrialError};
use crate::sweep::{Dim, HyperParamPoint, HyperParamSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Reinforce,
    ActorCritic,
    Ppo,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Reinforce, Algorithm::ActorCritic, Algorithm::Ppo];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Reinforce => "reinforce",
            Algorithm::ActorCritic => "actor-critic",
            Algorithm::Ppo => "ppo",
        }
    }

    /// Registered experiment name, e.g. `pendulum-ac`.
    pub fn experiment_name(self) -> &'static str {
        match self {
            Algorithm::Reinforce => "pendulum-reinforce",
            Algorithm::ActorCritic => "pendulum-ac",
            Algorithm::Ppo => "pendulum-ppo",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = RlError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reinforce" => Ok(Algorithm::Reinforce),
            "actor-critic" | "ac" => Ok(Algorithm::ActorCritic),
            "ppo" => Ok(Algorithm::Ppo),
            other => Err(RlError::Invalid(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// The sweep box for each algorithm (3, 4 and 6 dimensions).
pub fn declared_space(algorithm: Algorithm) -> HyperParamSpace {
    let mut dims = vec![
        Dim::log("policy_step", 1e-5, 1e-1),
        Dim::linear("gamma", 0.9, 0.999),
        Dim::integer("hidden", 8.0, 64.0),
    ];
    match algorithm {
        Algorithm::Reinforce => {}
        Algorithm::ActorCritic => dims.push(Dim::log("value_step", 1e-5, 1e-1)),
        Algorithm::Ppo => dims.extend([
            Dim::linear("clip", 0.05, 0.4),
            Dim::integer("epochs", 1.0, 10.0),
            Dim::log("value_step", 1e-5, 1e-1),
        ]),
    }
    HyperParamSpace::new(dims).expect("declared spaces are valid")
}

/// Typed hyperparameters for one agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentConfig {
    pub policy_step: f64,
    pub value_step: f64,
    pub gamma: f64,
    pub hidden: usize,
    pub clip: f64,
    pub epochs: usize,
}

impl AgentConfig {
    /// Read a point after checking it against [`declared_space`].
    pub fn from_point(algorithm: Algorithm, point: &HyperParamPoint) -> Result<Self, RlError> {
        declared_space(algorithm)
            .validate(point)
            .map_err(|e| RlError::Invalid(e.to_string()))?;
        let get = |k: &str| point.get(k);
        Ok(Self {
            policy_step: get("policy_step").unwrap(),
            gamma: get("gamma").unwrap(),
            hidden: get("hidden").unwrap() as usize,
            value_step: get("value_step").unwrap_or(0.0),
            clip: get("clip").unwrap_or(0.2),
            epochs: get("epochs").map_or(1, |e| e as usize),
        })
    }
}

/// What a training run reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricMode {
    /// Mean of every reward seen while training.
    Lifetime,
    /// Mean reward of the final policy acting on its mean action.
    FinalPolicy { episodes: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainOptions {
    pub episodes: usize,
    /// Episodes collected per PPO update.
    pub ppo_batch_episodes: usize,
    /// Samples per PPO gradient step.
    pub ppo_minibatch: usize,
    /// Initial policy log-std.
    pub init_log_std: f64,
    pub metric: MetricMode,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self {
            episodes: 100,
            ppo_batch_episodes: 2,
            ppo_minibatch: 32,
            init_log_std: 0.0,
            metric: MetricMode::Lifetime,
        }
    }
}

fn ensure_finite(policy: &PolicyNet, value: Option<&ValueNet>) -> Result<(), RlError> {
    if policy.is_finite() && value.is_none_or(ValueNet::is_finite) {
        Ok(())
    } else {
        Err(RlError::Diverged)
    }
}

/// Train one agent from scratch; returns the metric selected by
/// `options.metric` (a value in `[−1, 1]`).
///
/// All randomness (network init, resets, actions) comes from one generator
/// seeded with `seed`, so the result is a pure function of the inputs.
pub fn train_agent(
    algorithm: Algorithm,
    config: &AgentConfig,
    seed: u64,
    params: &PendulumParams,
    options: &TrainOptions,
) -> Result<f64, RlError> {
    params.validate().map_err(RlError::Invalid)?;
    if config.hidden == 0 || options.episodes == 0 || options.ppo_batch_episodes == 0 || options.ppo_minibatch == 0 {
        return Err(RlError::Invalid(
            "hidden, episodes and batch size must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut policy = PolicyNet::with_log_std(config.hidden, options.init_log_std, &mut rng);
    let mut value = match algorithm {
        Algorithm::Reinforce => None,
        _ => Some(ValueNet::new(config.hidden, &mut rng)),
    };
    let ppo = PpoConfig {
        clip: config.clip,
        epochs: config.epochs,
        policy_step: config.policy_step,
        value_step: config.value_step,
        gamma: config.gamma,
        minibatch: Some(options.ppo_minibatch),
    };
    let mut optimizer = value.as_ref().map(|v| PpoOptimizer::new(&policy, v));

    let horizon = params.steps_per_episode;
    let mut reward_sum = 0.0;
    let mut batch: Vec<Trajectory> = Vec::with_capacity(options.ppo_batch_episodes);

    for episode in 0..options.episodes {
        let mut state = pendulum_reset(params, &mut rng);
        let mut traj = Trajectory {
            steps: Vec::with_capacity(horizon),
        };
        for t in 0..horizon {
            let features = state.features(params);
            let (action, log_prob) = policy.sample(&features, &mut rng);
            let (next, reward) = pendulum_step(params, state, action).map_err(|_| RlError::Diverged)?;
            reward_sum += reward;
            match (algorithm, value.as_mut()) {
                (Algorithm::ActorCritic, Some(v)) => {
                    let transition = Transition {
                        features,
                        action,
                        reward,
                        next_features: next.features(params),
                        terminal: t + 1 == horizon,
                    };
                    actor_critic_update(
                        &mut policy,
                        v,
                        &transition,
                        config.policy_step,
                        config.value_step,
                        config.gamma,
                    );
                    ensure_finite(&policy, Some(v))?;
                }
                _ => traj.steps.push(Step {
                    state,
                    features,
                    action,
                    log_prob,
                    reward,
                    next_state: next,
                }),
            }
            state = next;
        }
        match algorithm {
            Algorithm::Reinforce => {
                reinforce_update(&mut policy, &traj, config.policy_step, config.gamma);
                ensure_finite(&policy, None)?;
            }
            Algorithm::Ppo => {
                batch.push(traj);
                if batch.len() == options.ppo_batch_episodes || episode + 1 == options.episodes {
                    let v = value.as_mut().expect("ppo has a value net");
                    let opt = optimizer.as_mut().expect("ppo has an optimizer");
                    ppo_update(&mut policy, v, opt, &batch, &ppo, &mut rng)?;
                    batch.clear();
                }
            }
            Algorithm::ActorCritic => {}
        }
    }

    match options.metric {
        MetricMode::Lifetime => Ok(reward_sum / (options.episodes * horizon) as f64),
        MetricMode::FinalPolicy { episodes } => evaluate_policy(&policy, params, episodes.max(1), &mut rng),
    }
}

fn evaluate_policy(
    policy: &PolicyNet,
    params: &PendulumParams,
    episodes: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64, RlError> {
    let mut total = 0.0;
    for _ in 0..episodes {
        let mut state = pendulum_reset(params, rng);
        for _ in 0..params.steps_per_episode {
            let action = policy.mean(&state.features(params));
            let (next, reward) = pendulum_step(params, state, action).map_err(|_| RlError::Diverged)?;
            total += reward;
            state = next;
        }
    }
    Ok(total / (episodes * params.steps_per_episode) as f64)
}

/// One of the three learners on the pendulum, as a sweepable experiment.
#[derive(Debug, Clone)]
pub struct PendulumExperiment {
    pub algorithm: Algorithm,
    pub params: PendulumParams,
    pub options: TrainOptions,
}

impl PendulumExperiment {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            params: PendulumParams::default(),
            options: TrainOptions::default(),
        }
    }
}

impl Experiment for PendulumExperiment {
    fn name(&self) -> &str {
        self.algorithm.experiment_name()
    }

    fn space(&self) -> HyperParamSpace {
        declared_space(self.algorithm)
    }

    fn run_trial(&self, point: &HyperParamPoint, seed: u64) -> Result<f64, TrialError> {
        let config = AgentConfig::from_point(self.algorithm, point)?;
        Ok(train_agent(self.algorithm, &config, seed, &self.params, &self.options)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn short() -> TrainOptions {
        TrainOptions {
            episodes: 4,
            ..TrainOptions::default()
        }
    }

    fn config() -> AgentConfig {
        AgentConfig {
            policy_step: 1e-3,
            value_step: 1e-3,
            gamma: 0.99,
            hidden: 8,
            clip: 0.2,
            epochs: 3,
        }
    }

    #[test]
    fn declared_space_shapes() {
        let dims: Vec<usize> = Algorithm::ALL.iter().map(|&a| declared_space(a).len()).collect();
        assert_eq!(dims, vec![3, 4, 6]);
        for a in Algorithm::ALL {
            for d in declared_space(a).dims() {
                if d.scale == crate::sweep::Scale::Log {
                    assert!(d.lo > 0.0);
                }
            }
        }
        assert!("nac-s".parse::<Algorithm>().is_err());
        assert_eq!("ppo".parse::<Algorithm>().unwrap(), Algorithm::Ppo);
    }

    #[test]
    fn from_point_rejects_out_of_box() {
        let p = HyperParamPoint::new()
            .with("policy_step", 1e-3)
            .with("gamma", 0.95)
            .with("hidden", 16.0);
        assert!(AgentConfig::from_point(Algorithm::Reinforce, &p).is_ok());
        assert!(AgentConfig::from_point(Algorithm::ActorCritic, &p).is_err());
        assert!(AgentConfig::from_point(Algorithm::Reinforce, &p.clone().with("gamma", 0.5)).is_err());
        assert!(AgentConfig::from_point(Algorithm::Reinforce, &p.with("hidden", 100.0)).is_err());
    }

    #[test]
    fn deterministic_and_bounded() {
        let params = PendulumParams::default();
        for a in Algorithm::ALL {
            let x = train_agent(a, &config(), 11, &params, &short()).unwrap();
            let y = train_agent(a, &config(), 11, &params, &short()).unwrap();
            assert_eq!(x.to_bits(), y.to_bits(), "{a}");
            assert!((-1.0..=1.0).contains(&x));
            let z = train_agent(a, &config(), 12, &params, &short()).unwrap();
            assert_ne!(x, z);
        }
    }

    #[test]
    fn final_policy_metric_is_available() {
        let opts = TrainOptions {
            metric: MetricMode::FinalPolicy { episodes: 2 },
            ..short()
        };
        let m = train_agent(Algorithm::Reinforce, &config(), 1, &PendulumParams::default(), &opts).unwrap();
        assert!((-1.0..=1.0).contains(&m));
    }

    #[test]
    fn huge_steps_fail_as_diverged() {
        let wild = AgentConfig {
            policy_step: f64::MAX,
            value_step: f64::MAX,
            ..config()
        };
        let params = PendulumParams::default();
        for a in Algorithm::ALL {
            assert_eq!(
                train_agent(a, &wild, 3, &params, &short()),
                Err(RlError::Diverged),
                "{a}"
            );
        }
    }

    #[test]
    fn experiment_wrapper() {
        let e = PendulumExperiment {
            options: short(),
            ..PendulumExperiment::new(Algorithm::ActorCritic)
        };
        assert_eq!(e.name(), "pendulum-ac");
        let p = HyperParamPoint::new()
            .with("policy_step", 1e-3)
            .with("gamma", 0.95)
            .with("hidden", 8.0)
            .with("value_step", 1e-2);
        assert_eq!(e.run_trial(&p, 5), e.run_trial(&p, 5));
        assert!(matches!(
            e.run_trial(&p.with("hidden", 7.0), 5),
            Err(TrialError::InvalidPoint(_))
        ));
    }
}
