use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::seed::{derive_trial_seed, splitmix64};
use super::space::{sample_epsilon_ball, sample_uniform};
use super::{HyperParamPoint, HyperParamSpace, SweepError, TrialSpec};

/// Stream tag separating the point-sampling RNG from trial seeds.
const POINT_STREAM: u64 = 0x5EED_0F90_1A75_0001;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SamplingMode {
    Uniform {
        n_points: usize,
    },
    EpsilonBall {
        center: HyperParamPoint,
        epsilon: f64,
        n_points: usize,
    },
    Explicit {
        points: Vec<HyperParamPoint>,
    },
}

/// Which points to evaluate and how many seeds each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPlan {
    pub space: HyperParamSpace,
    pub mode: SamplingMode,
    pub seeds_per_point: u32,
    pub master_seed: u64,
}

impl SweepPlan {
    pub fn validate(&self) -> Result<(), SweepError> {
        if self.seeds_per_point == 0 {
            return Err(SweepError::InvalidPlan("seeds_per_point must be >= 1".into()));
        }
        match &self.mode {
            SamplingMode::Uniform { n_points } => {
                if *n_points == 0 {
                    return Err(SweepError::InvalidPlan("n_points must be >= 1".into()));
                }
            }
            SamplingMode::EpsilonBall {
                center,
                epsilon,
                n_points,
            } => {
                if !(*epsilon > 0.0 && *epsilon <= 1.0) {
                    return Err(SweepError::InvalidPlan(format!(
                        "epsilon must be in (0, 1], got {epsilon}"
                    )));
                }
                if *n_points == 0 {
                    return Err(SweepError::InvalidPlan("n_points must be >= 1".into()));
                }
                self.space.validate(center)?;
            }
            SamplingMode::Explicit { points } => {
                if points.is_empty() {
                    return Err(SweepError::InvalidPlan("explicit mode needs at least one point".into()));
                }
                for p in points {
                    self.space.validate(p)?;
                }
            }
        }
        Ok(())
    }

    /// The sampled hyperparameter points, deterministic in `master_seed`.
    pub fn points(&self) -> Result<Vec<HyperParamPoint>, SweepError> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(self.master_seed ^ POINT_STREAM));
        match &self.mode {
            SamplingMode::Uniform { n_points } => sample_uniform(&self.space, *n_points, &mut rng),
            SamplingMode::EpsilonBall {
                center,
                epsilon,
                n_points,
            } => sample_epsilon_ball(&self.space, center, *epsilon, *n_points, &mut rng),
            SamplingMode::Explicit { points } => Ok(points.clone()),
        }
    }

    /// Number of trials the plan enumerates.
    pub fn trial_count(&self) -> usize {
        let points = match &self.mode {
            SamplingMode::Uniform { n_points } | SamplingMode::EpsilonBall { n_points, .. } => *n_points,
            SamplingMode::Explicit { points } => points.len(),
        };
        points * self.seeds_per_point as usize
    }
}

/// Points × seeds, with dense trial indices (point-major) and derived seeds.
pub fn enumerate_trials(plan: &SweepPlan) -> Result<Vec<TrialSpec>, SweepError> {
    let points = plan.points()?;
    let per = plan.seeds_per_point as u64;
    Ok(points
        .into_iter()
        .enumerate()
        .flat_map(|(i, point)| {
            (0..per).map(move |s| {
                let trial_index = i as u64 * per + s;
                TrialSpec {
                    trial_index,
                    point: point.clone(),
                    seed: derive_trial_seed(plan.master_seed, trial_index),
                }
            })
        })
        .collect())
}
