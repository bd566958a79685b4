//! Hyperparameter sweeps: spaces, sampling plans, seed derivation, a parallel
//! trial runner and an append-only run store.

mod plan;
mod record;
mod runner;
mod seed;
mod space;
mod store;

pub use plan::{enumerate_trials, SamplingMode, SweepPlan};
pub use record::{TrialRecord, TrialSpec, TrialStatus};
pub use runner::{resume, run_sweep, run_sweep_with_progress, Progress, SweepOutcome};
pub use seed::{derive_trial_seed, splitmix64};
pub use space::{
    epsilon_ball_unclipped, sample_epsilon_ball, sample_uniform, Dim, DimKind, HyperParamPoint, HyperParamSpace, Scale,
};
pub use store::{load_records, RunStore, StoreContents, StoreHeader};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("plan/store mismatch: {0}")]
    PlanMismatch(String),
    #[error("{path}: line {line}: {message}")]
    MalformedLine { path: String, line: usize, message: String },
    #[error("store I/O error: {0}")]
    Io(#[from] std::io::Error),
}
