//! Distributional evaluation of stochastic learners.
//!
//! A model is scored by the distribution of its metric over random seeds and
//! over small perturbations of its hyperparameters, not by a single run.
//!
//! - [`stats`]: summaries, order statistics, kernel density estimates and
//!   KL-divergence between score samples.
//! - [`sweep`]: hyperparameter spaces, uniform and ε-ball sampling, per-trial
//!   seed derivation, a parallel trial runner and an append-only run store.
//! - [`experiments`]: the trial contract plus cheap surrogate experiments.
//! - [`rl`]: pendulum swing-up and three policy-gradient learners built on
//!   hand-differentiated networks.

pub mod experiments;
pub mod rl;
pub mod stats;
pub mod sweep;

pub use experiments::{Experiment, TrialError};
pub use stats::{ScoreSample, StatsError, SummaryStats};
pub use sweep::{HyperParamPoint, HyperParamSpace, SweepError, SweepPlan, TrialRecord};
