//! One function per subcommand. Results go to `out`, progress to stderr.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use distro_eval_core::experiments::{seed_sensitivity_report, Regime};
use distro_eval_core::stats::{compare, inverse_cdf_curve, summarize, ComparisonReport, ScoreSample, DECILES};
use distro_eval_core::sweep::{load_records, resume, Progress, StoreContents, SweepPlan, TrialStatus};
use distro_eval_core::Experiment;

use crate::config::{self, PlotSpec, RunConfig, SeedsConfig};
use crate::error::{CliError, CliResult};
use crate::svg::{self, Chart, Series};

/// Most points a plotted curve carries.
pub const MAX_CURVE_POINTS: usize = 512;
const LISTED_FAILURES: usize = 10;

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn load_store(path: &Path) -> CliResult<StoreContents> {
    if !path.is_file() {
        return Err(CliError::Usage(format!("{}: no such store", path.display())));
    }
    Ok(load_records(path)?)
}

fn ok_scores(label: &str, contents: &StoreContents) -> Option<ScoreSample> {
    let scores: Vec<f64> = contents.records.iter().filter_map(|r| r.metric()).collect();
    ScoreSample::new(label, scores).ok()
}

/// Prints `completed/total` roughly every 5% and once at the end.
pub(crate) fn stderr_progress(label: &str) -> impl FnMut(Progress) + '_ {
    let mut last_bucket = usize::MAX;
    move |p: Progress| {
        let bucket = p.completed * 20 / p.total.max(1);
        if bucket != last_bucket || p.completed == p.total {
            last_bucket = bucket;
            eprintln!("{label}: {}/{} done, {} failed", p.completed, p.total, p.failed);
        }
    }
}

/// Run or resume `plan` into `store`, reporting what is left first.
pub(crate) fn run_plan(
    label: &str,
    plan: &SweepPlan,
    exp: &dyn Experiment,
    workers: usize,
    store: &Path,
    out: &mut dyn Write,
) -> CliResult<StoreContents> {
    let existing = if store.is_file() {
        load_records(store)?.records.len()
    } else {
        0
    };
    let remaining = plan.trial_count().saturating_sub(existing);
    emit(
        out,
        &format!("{label}: {remaining} trials remaining of {}\n", plan.trial_count()),
    )?;
    if let Some(dir) = store.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut progress = stderr_progress(label);
    let outcome = resume(plan, store, exp, workers, &mut progress)?;
    let failed = outcome.records.iter().filter(|r| !r.is_ok()).count();
    emit(
        out,
        &format!(
            "{label}: {} trials in {} ({} executed, {} failed)\n",
            outcome.records.len(),
            store.display(),
            outcome.executed,
            failed
        ),
    )?;
    Ok(load_records(store)?)
}

pub fn sweep(config_path: &Path, out: &mut dyn Write) -> CliResult<()> {
    let cfg = RunConfig::load(config_path)?;
    let exp = config::experiment(&cfg.experiment)?;
    let plan = cfg.plan(exp.as_ref())?;
    let workers = config::worker_count(cfg.worker_count)?;
    run_plan(exp.name(), &plan, exp.as_ref(), workers, &cfg.store, out)?;
    Ok(())
}

/// Text report of one store. Fails with a data error when no trial
/// succeeded, after describing the failures.
pub fn report_text(path: &Path, contents: &StoreContents) -> CliResult<String> {
    let mut text = String::new();
    let total = contents.records.len();
    let failures: Vec<_> = contents
        .records
        .iter()
        .filter_map(|r| match r.status() {
            TrialStatus::Failed(m) => Some((r.trial_index(), r.spec.seed, m.as_str())),
            TrialStatus::Ok => None,
        })
        .collect();
    writeln!(text, "store: {}", path.display()).unwrap();
    if let Some(h) = &contents.header {
        writeln!(text, "experiment: {}", h.experiment).unwrap();
    }
    writeln!(
        text,
        "trials: {total} (ok {}, failed {})",
        total - failures.len(),
        failures.len()
    )
    .unwrap();
    let sample = ok_scores("metric", contents);
    if let Some(sample) = &sample {
        let s = summarize(sample, &DECILES)?;
        writeln!(text, "n: {}", s.n).unwrap();
        writeln!(text, "mean±std: {}", s.mean_pm_std()).unwrap();
        writeln!(text, "min: {:.3}", s.min).unwrap();
        writeln!(text, "max: {:.3}", s.max).unwrap();
        let deciles: Vec<String> = s.quantiles.iter().map(|(q, v)| format!("{q:.1}={v:.3}")).collect();
        writeln!(text, "deciles: {}", deciles.join(" ")).unwrap();
    }
    for (idx, seed, msg) in failures.iter().take(LISTED_FAILURES) {
        writeln!(text, "failed trial {idx} (seed {seed}): {msg}").unwrap();
    }
    if failures.len() > LISTED_FAILURES {
        writeln!(text, "... and {} more failures", failures.len() - LISTED_FAILURES).unwrap();
    }
    match sample {
        Some(_) => Ok(text),
        None => Err(CliError::Data(format!(
            "{text}no successful trials in {}",
            path.display()
        ))),
    }
}

pub fn report(store: &Path, csv: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    let contents = load_store(store)?;
    let text = report_text(store, &contents)?;
    if let Some(csv_path) = csv {
        let mut body = String::from("trial_index,seed,metric\n");
        for r in &contents.records {
            if let Some(m) = r.metric() {
                writeln!(body, "{},{},{m}", r.trial_index(), r.spec.seed).unwrap();
            }
        }
        write_file(csv_path, body.as_bytes())?;
    }
    emit(out, &text)
}

/// Requires at least two successful trials.
fn comparable(path: &Path, label: &str) -> CliResult<ScoreSample> {
    let contents = load_store(path)?;
    match ok_scores(label, &contents) {
        Some(s) if s.len() >= 2 => Ok(s),
        other => Err(CliError::Data(format!(
            "{}: need at least 2 ok trials to compare, got {}",
            path.display(),
            other.map_or(0, |s| s.len())
        ))),
    }
}

pub fn comparison_text(a: &str, b: &str, r: &ComparisonReport) -> String {
    let mut text = String::new();
    writeln!(text, "A: {a} {}", r.summary_p).unwrap();
    writeln!(text, "B: {b} {}", r.summary_q).unwrap();
    writeln!(text, "kl(A||B): {:.3}", r.kl_pq).unwrap();
    writeln!(text, "kl(B||A): {:.3}", r.kl_qp).unwrap();
    writeln!(text, "bandwidth A: {:.3e}", r.bandwidth_p).unwrap();
    writeln!(text, "bandwidth B: {:.3e}", r.bandwidth_q).unwrap();
    writeln!(text, "grid points: {}", r.grid_points).unwrap();
    text
}

pub fn compare_stores(a: &Path, b: &Path, out: &mut dyn Write) -> CliResult<()> {
    let (pa, pb) = (comparable(a, "A")?, comparable(b, "B")?);
    let r = compare(&pa, &pb)?;
    emit(
        out,
        &comparison_text(&a.display().to_string(), &b.display().to_string(), &r),
    )
}

/// Inverse-CDF curve of a sample with at most [`MAX_CURVE_POINTS`] points.
pub fn curve(sample: &ScoreSample) -> CliResult<Vec<(f64, f64)>> {
    Ok(inverse_cdf_curve(sample, sample.len().min(MAX_CURVE_POINTS))?)
}

pub fn plot_icdf(spec_path: &Path, out: &mut dyn Write) -> CliResult<()> {
    let spec = PlotSpec::load(spec_path)?;
    let mut series = Vec::with_capacity(spec.series.len());
    for (i, s) in spec.series.iter().enumerate() {
        let sample = comparable(&s.store, &s.label)?;
        series.push(Series {
            label: s.label.clone(),
            color: s
                .color
                .clone()
                .unwrap_or_else(|| svg::PALETTE[i % svg::PALETTE.len()].into()),
            points: curve(&sample)?,
        });
    }
    let chart = Chart {
        width: spec.width,
        height: spec.height,
        title: spec.title.clone(),
        x_label: spec.x_label.clone(),
        y_label: spec.y_label.clone(),
        y_range: spec.y_range.map(|[lo, hi]| (lo, hi)),
    };
    write_file(&spec.output, svg::render(&chart, &series).as_bytes())?;
    emit(out, &format!("wrote {}\n", spec.output.display()))
}

pub fn seeds(config_path: &Path, out: &mut dyn Write) -> CliResult<()> {
    let cfg = SeedsConfig::load(config_path)?;
    let exp = config::experiment(&cfg.experiment)?;
    let space = exp.space();
    let regimes: Vec<Regime> = cfg
        .regimes
        .iter()
        .map(|r| {
            space
                .validate(&r.point)
                .map_err(|e| CliError::Usage(format!("regime {}: {e}", r.label)))?;
            Ok(Regime::new(r.label.clone(), r.point.clone()))
        })
        .collect::<CliResult<_>>()?;
    if cfg.seed_count < 2 {
        return Err(CliError::Usage(format!(
            "seed_count must be at least 2, got {}",
            cfg.seed_count
        )));
    }
    let report = seed_sensitivity_report(exp.as_ref(), &regimes, cfg.seed_count, cfg.master_seed)?;
    emit(out, &report.to_string())?;
    if report.regimes.iter().any(|r| r.sample.is_none()) {
        return Err(CliError::Data("a regime has no successful seeds".into()));
    }
    Ok(())
}
