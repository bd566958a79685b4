use super::StatsError;

/// An ordered multiset of finite scores from repeated trials.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreSample {
    label: String,
    scores: Vec<f64>,
    sorted: Vec<f64>,
}

impl ScoreSample {
    pub fn new(label: impl Into<String>, scores: Vec<f64>) -> Result<Self, StatsError> {
        if scores.is_empty() {
            return Err(StatsError::EmptySample);
        }
        if let Some((index, &value)) = scores.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(StatsError::NonFinite { index, value });
        }
        let mut sorted = scores.clone();
        sorted.sort_by(f64::total_cmp);
        Ok(Self {
            label: label.into(),
            scores,
            sorted,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Scores in insertion order.
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    /// Scores in ascending order.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    /// Always false; construction rejects empty input.
    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        self.sorted[self.sorted.len() - 1]
    }
}
