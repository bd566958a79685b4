//! Score distributions of one configuration across many seeds.

use std::fmt;

use super::Experiment;
use crate::stats::{summarize, ScoreSample, StatsError, SummaryStats, DECILES};
use crate::sweep::{derive_trial_seed, HyperParamPoint};

pub const DEFAULT_SEED_COUNT: usize = 20;

/// A labeled configuration, e.g. `"low-data"` at `noise_scale = 0.1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Regime {
    pub label: String,
    pub point: HyperParamPoint,
}

impl Regime {
    pub fn new(label: impl Into<String>, point: HyperParamPoint) -> Self {
        Self {
            label: label.into(),
            point,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedFailure {
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeResult {
    pub label: String,
    pub point: HyperParamPoint,
    /// `None` when every seed failed.
    pub sample: Option<ScoreSample>,
    pub summary: Option<SummaryStats>,
    pub failures: Vec<SeedFailure>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport {
    pub experiment: String,
    pub seed_count: usize,
    pub master_seed: u64,
    pub regimes: Vec<RegimeResult>,
}

impl SensitivityReport {
    pub fn regime(&self, label: &str) -> Option<&RegimeResult> {
        self.regimes.iter().find(|r| r.label == label)
    }
}

impl fmt::Display for SensitivityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "experiment {} seeds {} master_seed {}",
            self.experiment, self.seed_count, self.master_seed
        )?;
        for r in &self.regimes {
            match &r.summary {
                Some(s) => write!(f, "{}: {} (n={})", r.label, s.mean_pm_std(), s.n)?,
                None => write!(f, "{}: no successful seeds", r.label)?,
            }
            if !r.failures.is_empty() {
                write!(f, ", {} failed", r.failures.len())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Runs every regime on the same `seed_count` seeds derived from
/// `master_seed`, so regimes differ only in their point.
pub fn seed_sensitivity_report(
    experiment: &dyn Experiment,
    regimes: &[Regime],
    seed_count: usize,
    master_seed: u64,
) -> Result<SensitivityReport, StatsError> {
    if seed_count < 2 {
        return Err(StatsError::TooFewPoints {
            min: 2,
            got: seed_count,
        });
    }
    let seeds: Vec<u64> = (0..seed_count as u64)
        .map(|i| derive_trial_seed(master_seed, i))
        .collect();
    let mut results = Vec::with_capacity(regimes.len());
    for regime in regimes {
        let mut scores = Vec::with_capacity(seed_count);
        let mut failures = Vec::new();
        for &seed in &seeds {
            match experiment.run_trial(&regime.point, seed) {
                Ok(m) if m.is_finite() => scores.push(m),
                Ok(m) => failures.push(SeedFailure {
                    seed,
                    message: format!("non-finite metric {m}"),
                }),
                Err(e) => failures.push(SeedFailure {
                    seed,
                    message: e.to_string(),
                }),
            }
        }
        let sample = if scores.is_empty() {
            None
        } else {
            Some(ScoreSample::new(regime.label.clone(), scores)?)
        };
        let summary = sample.as_ref().map(|s| summarize(s, &DECILES)).transpose()?;
        results.push(RegimeResult {
            label: regime.label.clone(),
            point: regime.point.clone(),
            sample,
            summary,
            failures,
        });
    }
    Ok(SensitivityReport {
        experiment: experiment.name().to_owned(),
        seed_count,
        master_seed,
        regimes: results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{NoisyQuadratic, TrialError};
    use crate::sweep::HyperParamSpace;

    fn noise(label: &str, s: f64) -> Regime {
        Regime::new(label, HyperParamPoint::new().with("x", 0.0).with("noise_scale", s))
    }

    #[test]
    fn zero_noise_has_zero_spread() {
        let r = seed_sensitivity_report(&NoisyQuadratic, &[noise("flat", 0.0)], 7, 3).unwrap();
        let s = r.regime("flat").unwrap().summary.as_ref().unwrap();
        assert_eq!(s.std, 0.0);
        assert_eq!(s.n, 7);
    }

    #[test]
    fn noisier_regime_spreads_more() {
        let regimes = [noise("high-data", 0.01), noise("low-data", 0.1)];
        let r = seed_sensitivity_report(&NoisyQuadratic, &regimes, 20, 11).unwrap();
        let hi = r.regime("high-data").unwrap().summary.as_ref().unwrap().std;
        let lo = r.regime("low-data").unwrap().summary.as_ref().unwrap().std;
        assert!(lo > hi);
        assert!(r.regimes.iter().all(|g| g.sample.as_ref().unwrap().len() == 20));
        // shared seeds: the noise draws are identical up to scale
        assert!((lo / hi - 10.0).abs() < 1e-9);
    }

    #[test]
    fn needs_two_seeds() {
        assert!(seed_sensitivity_report(&NoisyQuadratic, &[noise("a", 0.1)], 1, 0).is_err());
    }

    struct OddFails;

    impl Experiment for OddFails {
        fn name(&self) -> &str {
            "odd-fails"
        }
        fn space(&self) -> HyperParamSpace {
            NoisyQuadratic.space()
        }
        fn run_trial(&self, _: &HyperParamPoint, seed: u64) -> Result<f64, TrialError> {
            if seed % 2 == 1 {
                Err(TrialError::Diverged)
            } else {
                Ok(seed as f64)
            }
        }
    }

    #[test]
    fn failures_shrink_the_sample_and_are_listed() {
        let r = seed_sensitivity_report(&OddFails, &[noise("a", 0.0)], 40, 5).unwrap();
        let g = &r.regimes[0];
        let n = g.sample.as_ref().map_or(0, ScoreSample::len);
        assert_eq!(n + g.failures.len(), 40);
        assert!(!g.failures.is_empty());
        assert!(g.failures.iter().all(|f| f.seed % 2 == 1 && f.message == "diverged"));
        assert!(r.to_string().contains("failed"));
    }
}
