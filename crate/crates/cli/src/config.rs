//! TOML inputs: sweep configs, seed-sensitivity configs and plot specs.
//!
//! Relative paths inside a file resolve against that file's directory.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use distro_eval_core::experiments::{self, Experiment, REGISTERED};
use distro_eval_core::sweep::{HyperParamPoint, HyperParamSpace, SamplingMode, SweepPlan};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const WORKERS_ENV: &str = "DISTRO_EVAL_WORKERS";

fn read_toml<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.parent().unwrap_or(Path::new("")).join(p)
    }
}

pub fn experiment(name: &str) -> CliResult<Box<dyn Experiment>> {
    experiments::by_name(name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown experiment {name:?}; registered: {}",
            REGISTERED.join(", ")
        ))
    })
}

/// Worker count: the environment override, else the config value, else the
/// available parallelism.
pub fn worker_count(configured: Option<usize>) -> CliResult<usize> {
    let n = match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("{WORKERS_ENV} must be a positive integer, got {v:?}")))?,
        Err(_) => match configured {
            Some(n) => n,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if n == 0 {
        return Err(CliError::Usage("worker count must be at least 1".into()));
    }
    Ok(n)
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: String,
    /// Replaces the experiment's declared space when present.
    #[serde(default)]
    pub space: Option<HyperParamSpace>,
    pub mode: SamplingMode,
    #[serde(default = "one")]
    pub seeds_per_point: u32,
    pub master_seed: u64,
    #[serde(default)]
    pub worker_count: Option<usize>,
    pub store: PathBuf,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let mut cfg: RunConfig = read_toml(path)?;
        cfg.store = resolve(path, &cfg.store);
        Ok(cfg)
    }

    pub fn plan(&self, exp: &dyn Experiment) -> CliResult<SweepPlan> {
        let plan = SweepPlan {
            space: self.space.clone().unwrap_or_else(|| exp.space()),
            mode: self.mode.clone(),
            seeds_per_point: self.seeds_per_point,
            master_seed: self.master_seed,
        };
        plan.validate()?;
        Ok(plan)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimeConfig {
    pub label: String,
    pub point: HyperParamPoint,
}

fn default_seed_count() -> usize {
    experiments::DEFAULT_SEED_COUNT
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedsConfig {
    pub experiment: String,
    #[serde(default = "default_seed_count")]
    pub seed_count: usize,
    pub master_seed: u64,
    #[serde(rename = "regime")]
    pub regimes: Vec<RegimeConfig>,
}

impl SeedsConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let cfg: SeedsConfig = read_toml(path)?;
        if cfg.regimes.is_empty() {
            return Err(CliError::Usage(format!(
                "{}: at least one [[regime]] is required",
                path.display()
            )));
        }
        unique(cfg.regimes.iter().map(|r| r.label.as_str()), path)?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSpec {
    pub store: PathBuf,
    pub label: String,
    #[serde(default)]
    pub color: Option<String>,
}

fn default_width() -> u32 {
    640
}

fn default_height() -> u32 {
    400
}

fn default_x_label() -> String {
    "quantile".into()
}

fn default_y_label() -> String {
    "metric".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotSpec {
    pub output: PathBuf,
    #[serde(default = "default_width")]
    pub width: u32,
    #[serde(default = "default_height")]
    pub height: u32,
    #[serde(default = "default_x_label")]
    pub x_label: String,
    #[serde(default = "default_y_label")]
    pub y_label: String,
    #[serde(default)]
    pub title: Option<String>,
    /// Fixed y-axis range; data-driven when absent.
    #[serde(default)]
    pub y_range: Option<[f64; 2]>,
    pub series: Vec<SeriesSpec>,
}

impl PlotSpec {
    pub fn load(path: &Path) -> CliResult<Self> {
        let mut spec: PlotSpec = read_toml(path)?;
        if spec.series.is_empty() {
            return Err(CliError::Usage(format!(
                "{}: at least one [[series]] is required",
                path.display()
            )));
        }
        unique(spec.series.iter().map(|s| s.label.as_str()), path)?;
        if spec.width < 100 || spec.height < 100 {
            return Err(CliError::Usage("width and height must be at least 100 pixels".into()));
        }
        if let Some([lo, hi]) = spec.y_range {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(CliError::Usage(format!("y_range must be increasing, got [{lo}, {hi}]")));
            }
        }
        spec.output = resolve(path, &spec.output);
        for s in &mut spec.series {
            s.store = resolve(path, &s.store);
        }
        Ok(spec)
    }
}

fn unique<'a>(labels: impl Iterator<Item = &'a str>, path: &Path) -> CliResult<()> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(CliError::Usage(format!("{}: duplicate label {l:?}", path.display())));
        }
    }
    Ok(())
}
