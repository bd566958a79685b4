//! Pendulum sweeps for the three learners, plotted together and compared
//! pairwise.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use distro_eval_core::rl::{declared_space, Algorithm, PendulumExperiment};
use distro_eval_core::stats::{compare, ScoreSample};
use distro_eval_core::sweep::{derive_trial_seed, SamplingMode, SweepPlan};

use crate::commands::{comparison_text, curve, report_text, run_plan};
use crate::config;
use crate::error::{CliError, CliResult};
use crate::svg::{self, Chart, Series};

pub const DEFAULT_ROOT_SEED: u64 = 2019;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Smoke,
    Desk,
    Large,
}

impl Scale {
    /// Hyperparameter settings per algorithm, one seed each.
    pub fn settings(self) -> usize {
        match self {
            Scale::Smoke => 50,
            Scale::Desk => 300,
            Scale::Large => 2000,
        }
    }
}

pub fn plan_for(algorithm: Algorithm, index: u64, scale: Scale, root_seed: u64) -> SweepPlan {
    SweepPlan {
        space: declared_space(algorithm),
        mode: SamplingMode::Uniform {
            n_points: scale.settings(),
        },
        seeds_per_point: 1,
        master_seed: derive_trial_seed(root_seed, index),
    }
}

pub fn store_path(out_dir: &Path, algorithm: Algorithm) -> std::path::PathBuf {
    out_dir.join(format!("{}.jsonl", algorithm.as_str()))
}

pub fn run(scale: Scale, out_dir: &Path, root_seed: u64, out: &mut dyn Write) -> CliResult<()> {
    let workers = config::worker_count(None)?;
    let mut text = String::new();
    let mut samples: Vec<(Algorithm, ScoreSample)> = Vec::new();
    for (k, alg) in Algorithm::ALL.into_iter().enumerate() {
        let exp = PendulumExperiment::new(alg);
        let plan = plan_for(alg, k as u64, scale, root_seed);
        let store = store_path(out_dir, alg);
        let contents = run_plan(alg.as_str(), &plan, &exp, workers, &store, out)?;
        writeln!(text, "== report {} ==", alg.as_str()).unwrap();
        text.push_str(&report_text(&store, &contents)?);
        let scores: Vec<f64> = contents.records.iter().filter_map(|r| r.metric()).collect();
        if scores.len() < 2 {
            return Err(CliError::Data(format!(
                "{}: need at least 2 ok trials, got {}",
                alg.as_str(),
                scores.len()
            )));
        }
        samples.push((alg, ScoreSample::new(alg.as_str(), scores)?));
    }

    let mut csv = format!("a,b,{}\n", distro_eval_core::stats::ComparisonReport::csv_header());
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            let ((a, pa), (b, pb)) = (&samples[i], &samples[j]);
            let r = compare(pa, pb)?;
            writeln!(text, "== compare {} vs {} ==", a.as_str(), b.as_str()).unwrap();
            text.push_str(&comparison_text(a.as_str(), b.as_str(), &r));
            writeln!(csv, "{},{},{}", a.as_str(), b.as_str(), r.csv_row()).unwrap();
        }
    }

    let series = samples
        .iter()
        .enumerate()
        .map(|(i, (alg, s))| {
            Ok(Series {
                label: alg.as_str().into(),
                color: svg::PALETTE[i].into(),
                points: curve(s)?,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let chart = Chart {
        width: 640,
        height: 400,
        title: Some(format!(
            "pendulum swing-up, {} settings per algorithm",
            scale.settings()
        )),
        x_label: "quantile of hyperparameter settings".into(),
        y_label: "lifetime average reward".into(),
        y_range: Some((-1.0, 1.0)),
    };
    let svg_path = out_dir.join("figure1.svg");
    write_artifact(&svg_path, &svg::render(&chart, &series))?;
    write_artifact(&out_dir.join("reports.txt"), &text)?;
    write_artifact(&out_dir.join("comparisons.csv"), &csv)?;
    out.write_all(text.as_bytes())
        .and_then(|_| writeln!(out, "wrote {}", svg_path.display()))
        .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
}

fn write_artifact(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
