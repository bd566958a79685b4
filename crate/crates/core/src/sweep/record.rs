use super::HyperParamPoint;

/// One (point, seed) execution to perform.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSpec {
    pub trial_index: u64,
    pub point: HyperParamPoint,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrialStatus {
    Ok,
    Failed(String),
}

/// Outcome of one trial. `metric` is `Some` exactly when the status is ok.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub spec: TrialSpec,
    metric: Option<f64>,
    status: TrialStatus,
    pub wall_time: f64,
}

impl TrialRecord {
    pub fn ok(spec: TrialSpec, metric: f64, wall_time: f64) -> Self {
        Self {
            spec,
            metric: Some(metric),
            status: TrialStatus::Ok,
            wall_time,
        }
    }

    pub fn failed(spec: TrialSpec, message: impl Into<String>, wall_time: f64) -> Self {
        Self {
            spec,
            metric: None,
            status: TrialStatus::Failed(message.into()),
            wall_time,
        }
    }

    pub fn trial_index(&self) -> u64 {
        self.spec.trial_index
    }

    pub fn metric(&self) -> Option<f64> {
        self.metric
    }

    pub fn status(&self) -> &TrialStatus {
        &self.status
    }

    pub fn is_ok(&self) -> bool {
        self.status == TrialStatus::Ok
    }
}
